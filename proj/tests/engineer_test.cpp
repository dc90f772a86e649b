#include "puregauss/engineer.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "puregauss/catalog.hpp"
#include "puregauss/steady.hpp"
#include "test_support.hpp"

namespace puregauss {
namespace {

using testing::code_of;
using testing::Generator;
using testing::max_abs_diff;

const Complex kI(0.0, 1.0);

ComplexMatrix two_mode_channels(double alpha) {
  ComplexMatrix p(2, 2);
  p << kI * std::cosh(alpha), kI * std::sinh(alpha),  //
      kI * std::sinh(alpha), kI * std::cosh(alpha);
  return p;
}

RealMatrix chain4_inverse() {
  RealMatrix r(4, 4);
  r << 0, 1, 0, -1,  //
      1, 0, 0, 0,    //
      0, 0, 0, 1,    //
      -1, 0, 1, 0;
  return r;
}

ComplexMatrix first_mode_channel(std::size_t n) {
  ComplexMatrix p = ComplexMatrix::Zero(static_cast<Eigen::Index>(n), 1);
  p(0, 0) = 1.0;
  return p;
}

TEST(PureStateSpec, DerivedMatrices) {
  Generator gen(1);
  const PureStateSpec spec = gen.spec(3);
  EXPECT_LT(max_abs_diff(spec.Y() * spec.Y_inverse(), RealMatrix::Identity(3, 3)), 1e-12);
  EXPECT_LT(max_abs_diff(spec.Y_sqrt() * spec.Y_sqrt(), spec.Y()), 1e-12);
  EXPECT_LT(max_abs_diff(spec.Y_inverse_sqrt() * spec.Y_sqrt(), RealMatrix::Identity(3, 3)),
            1e-12);
  EXPECT_EQ(spec.Z().real(), spec.X());
  EXPECT_EQ(spec.Z().imag(), spec.Y());
  const RealMatrix s = spec.symplectic();
  const RealMatrix sigma = symplectic_form(3);
  EXPECT_LT(max_abs_diff(s * sigma * s.transpose(), sigma), 1e-12);
}

TEST(PureStateSpec, RejectsInvalid) {
  EXPECT_EQ(code_of([] {
              PureStateSpec(RealMatrix::Zero(2, 2), -RealMatrix::Identity(2, 2));
            }),
            ErrorCode::NonPositiveY);
  RealMatrix x = RealMatrix::Zero(2, 2);
  x(0, 1) = 1.0;
  EXPECT_EQ(code_of([&] { PureStateSpec(x, RealMatrix::Identity(2, 2)); }),
            ErrorCode::AsymmetricMatrix);
  EXPECT_EQ(code_of([] {
              PureStateSpec(RealMatrix::Zero(2, 2), RealMatrix::Identity(3, 3));
            }),
            ErrorCode::DimensionMismatch);
}

TEST(EngineeringParameters, Validation) {
  const EngineeringParameters defaults = purely_dissipative_parameters(3);
  EXPECT_EQ(defaults.P, ComplexMatrix::Identity(3, 3));
  EXPECT_EQ(defaults.R, RealMatrix::Zero(3, 3));
  EXPECT_EQ(defaults.Gamma, RealMatrix::Zero(3, 3));
  RealMatrix sym = RealMatrix::Ones(2, 2);
  EXPECT_EQ(code_of([&] {
              EngineeringParameters(ComplexMatrix::Identity(2, 2), RealMatrix::Zero(2, 2), sym);
            }),
            ErrorCode::AsymmetricMatrix);
  EXPECT_EQ(code_of([] {
              EngineeringParameters(ComplexMatrix::Identity(2, 2), RealMatrix::Zero(3, 3),
                                    RealMatrix::Zero(2, 2));
            }),
            ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([] {
              synthesize(catalog::two_mode_squeezed(0.3), purely_dissipative_parameters(3));
            }),
            ErrorCode::DimensionMismatch);
}

TEST(TargetCovariance, Vacuum) {
  const PureStateSpec spec(RealMatrix::Zero(2, 2), RealMatrix::Identity(2, 2));
  EXPECT_LT(max_abs_diff(target_covariance(spec).matrix(),
                         RealMatrix(0.5 * RealMatrix::Identity(4, 4))),
            1e-15);
}

TEST(TargetCovariance, TwoModeSqueezed) {
  const double alpha = 0.7;
  const double c = std::cosh(2 * alpha);
  const double s = std::sinh(2 * alpha);
  RealMatrix expected(4, 4);
  expected << c, s, 0, 0,  //
      s, c, 0, 0,          //
      0, 0, c, -s,         //
      0, 0, -s, c;
  expected *= 0.5;
  EXPECT_LT(max_abs_diff(target_covariance(catalog::two_mode_squeezed(alpha)).matrix(), expected),
            1e-12);
}

TEST(TargetCovariance, ClusterIsPure) {
  for (double r : {0.0, 0.5, 1.5}) {
    const RealMatrix v = target_covariance(catalog::cv_cluster(catalog::ring_adjacency(5), r));
    EXPECT_LT(std::abs(purity(v) - 1.0), 1e-10);
    EXPECT_TRUE(is_pure(v));
  }
}

TEST(Synthesize, TwoModeSqueezedTwoChannels) {
  for (double alpha : {0.2, 0.7, 1.3}) {
    const double mu = std::cosh(alpha);
    const double nu = -std::sinh(alpha);
    const PureStateSpec spec = catalog::two_mode_squeezed(alpha);
    const EngineeringParameters params(two_mode_channels(alpha), RealMatrix::Zero(2, 2),
                                       RealMatrix::Zero(2, 2));
    const GaussianDynamics sys = synthesize(spec, params);
    ComplexMatrix expected(2, 4);
    expected << mu, nu, kI * mu, -kI * nu,  //
        nu, mu, -kI * nu, kI * mu;
    EXPECT_LT(max_abs_diff(sys.C(), expected), 1e-12);
    EXPECT_EQ(sys.G(), RealMatrix::Zero(4, 4));
    EXPECT_TRUE(theorem2_check(spec, sys));
    const Theorem1Report report = analyze(sys);
    EXPECT_TRUE(report.unique);
    EXPECT_TRUE(report.pure);
    EXPECT_LT((report.vs->matrix() - target_covariance(spec).matrix()).norm(), 1e-8);
  }
}

TEST(Synthesize, TwoModeSqueezedSingleChannel) {
  const double alpha = 0.7;
  const PureStateSpec spec = catalog::two_mode_squeezed(alpha);
  RealMatrix r = RealMatrix::Zero(2, 2);
  r(1, 1) = 1.0;
  const EngineeringParameters params(two_mode_channels(alpha).leftCols(1), r, RealMatrix::Zero(2, 2));

  ComplexMatrix q_expected(2, 2);
  q_expected << 0.0, 0.0, kI * std::sinh(2 * alpha), -kI * std::cosh(2 * alpha);
  const ComplexMatrix q = q_matrix(spec, params);
  EXPECT_LT(max_abs_diff(q, q_expected), 1e-12);
  const RankCondition rc = rank_condition(params.P, q);
  EXPECT_TRUE(rc.holds);
  EXPECT_EQ(rc.rank, 2u);

  const GaussianDynamics sys = synthesize(spec, params);
  EXPECT_EQ(sys.channels(), 1u);
  // H = [(q1 sinh 2a - q2 cosh 2a)^2 + p2^2] / 2 under H = x^T G x / 2.
  RealMatrix g = RealMatrix::Zero(4, 4);
  RealVector v(2);
  v << std::sinh(2 * alpha), -std::cosh(2 * alpha);
  g.topLeftCorner(2, 2) = v * v.transpose();
  g(3, 3) = 1.0;
  EXPECT_LT(max_abs_diff(sys.G(), g), 1e-12);

  const Theorem1Report report = analyze(sys);
  EXPECT_TRUE(report.unique);
  EXPECT_TRUE(report.pure);
  EXPECT_LT((report.vs->matrix() - target_covariance(spec).matrix()).norm(), 1e-8);

  // Doubling R reproduces the Hamiltonian exactly as displayed; same steady state.
  const GaussianDynamics doubled =
      synthesize(spec, EngineeringParameters(params.P, 2.0 * r, RealMatrix::Zero(2, 2)));
  EXPECT_LT(max_abs_diff(doubled.G(), RealMatrix(2.0 * g)), 1e-12);
  EXPECT_LT((analyze(doubled).vs->matrix() - report.vs->matrix()).norm(), 1e-8);
}

TEST(Synthesize, HarmonicChainPurelyDissipative) {
  const double r = 0.8;
  const PureStateSpec spec = catalog::harmonic_chain(4, r);
  const GaussianDynamics sys = purely_dissipative(spec);
  const double e = std::exp(-2 * r);
  ComplexMatrix expected = ComplexMatrix::Zero(4, 8);
  for (Eigen::Index k = 0; k < 4; ++k) {
    expected(k, k) = -kI * e;
    expected(k, 4 + k) = 1.0;
    if (k > 0) expected(k, k - 1) = -1.0;
    if (k < 3) expected(k, k + 1) = -1.0;
  }
  EXPECT_LT(max_abs_diff(sys.C(), expected), 1e-14);
  EXPECT_EQ(sys.G(), RealMatrix::Zero(8, 8));

  const LocalityProfile profile = locality_profile(sys);
  const std::vector<std::set<std::size_t>> supports = {{0, 1}, {0, 1, 2}, {1, 2, 3}, {2, 3}};
  EXPECT_EQ(profile.channel_supports, supports);
  EXPECT_TRUE(profile.hamiltonian_edges.empty());
}

TEST(Synthesize, HarmonicChainSingleChannel) {
  const double r = 0.8;
  const PureStateSpec spec = catalog::harmonic_chain(4, r);
  const RealMatrix x = spec.X();
  ASSERT_LT(max_abs_diff(chain4_inverse() * x, RealMatrix::Identity(4, 4)), 1e-15);
  const EngineeringParameters params(first_mode_channel(4), chain4_inverse(),
                                     RealMatrix::Zero(4, 4));

  const ComplexMatrix q = q_matrix(spec, params);
  EXPECT_LT(max_abs_diff(q, ComplexMatrix(-kI * std::exp(-2 * r) * chain4_inverse().cast<Complex>())),
            1e-14);
  const RankCondition rc = rank_condition(params.P, q);
  EXPECT_TRUE(rc.holds);
  EXPECT_EQ(rc.rank, 4u);

  const GaussianDynamics sys = synthesize(spec, params);
  RealMatrix g(8, 8);
  g << x + std::exp(-4 * r) * chain4_inverse(), -RealMatrix::Identity(4, 4),
      -RealMatrix::Identity(4, 4), chain4_inverse();
  EXPECT_LT(max_abs_diff(sys.G(), g), 1e-14);

  const LocalityProfile profile = locality_profile(sys);
  ASSERT_EQ(profile.channel_supports.size(), 1u);
  EXPECT_EQ(profile.channel_supports[0], (std::set<std::size_t>{0, 1}));
  const std::set<std::pair<std::size_t, std::size_t>> ring = {{0, 1}, {1, 2}, {2, 3}, {0, 3}};
  EXPECT_EQ(profile.hamiltonian_edges, ring);

  EXPECT_TRUE(theorem2_check(spec, sys));
  const Theorem1Report report = analyze(sys);
  EXPECT_TRUE(report.unique);
  EXPECT_TRUE(report.pure);
  EXPECT_LT((report.vs->matrix() - target_covariance(spec).matrix()).norm(), 1e-8);
}

TEST(RankCondition, Examples) {
  Generator gen(3);
  const ComplexMatrix q = gen.complex(3, 3);
  const RankCondition full = rank_condition(ComplexMatrix::Identity(3, 3), q);
  EXPECT_TRUE(full.holds);
  EXPECT_EQ(full.rank, 3u);
  const RankCondition none = rank_condition(ComplexMatrix::Zero(3, 2), q);
  EXPECT_FALSE(none.holds);
  EXPECT_EQ(none.rank, 0u);
  const RankCondition single = rank_condition(first_mode_channel(4), ComplexMatrix::Zero(4, 4));
  EXPECT_FALSE(single.holds);
  EXPECT_EQ(single.rank, 1u);
  EXPECT_EQ(code_of([&] { rank_condition(ComplexMatrix::Identity(3, 3), gen.complex(2, 2)); }),
            ErrorCode::DimensionMismatch);
}

TEST(Theorem2, Examples) {
  const PureStateSpec tms = catalog::two_mode_squeezed(0.5);
  const GaussianDynamics sys = purely_dissipative(tms);
  EXPECT_TRUE(theorem2_check(tms, sys));
  const Theorem1Report report = analyze(sys);
  EXPECT_TRUE(report.unique && report.pure);

  EXPECT_EQ(code_of([&] { theorem2_check(tms, catalog::single_opo(6.0, 0.0)); }),
            ErrorCode::DimensionMismatch);

  const PureStateSpec chain = catalog::harmonic_chain(4, 1.0);
  const EngineeringParameters starved(first_mode_channel(4), RealMatrix::Zero(4, 4),
                                      RealMatrix::Zero(4, 4));
  EXPECT_LT(rank_condition(starved.P, q_matrix(chain, starved)).rank, 4u);
  EXPECT_FALSE(theorem2_check(chain, synthesize(chain, starved)));
}

TEST(Synthesize, KernelIsInvariantProperty) {
  Generator gen(29);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = gen.integer(1, 4);
    const auto dim = static_cast<Eigen::Index>(n);
    const auto m = static_cast<Eigen::Index>(gen.integer(1, n));
    const PureStateSpec spec = gen.spec(n);
    const EngineeringParameters params(gen.complex(dim, m), gen.symmetric(dim),
                                       gen.antisymmetric(dim));
    const GaussianDynamics sys = synthesize(spec, params);
    const ComplexMatrix kernel = spec.kernel_generator();
    ASSERT_EQ(kernel.rows(), 2 * dim);
    ASSERT_EQ(kernel.cols(), dim);
    const ComplexMatrix sigma = symplectic_form(n).cast<Complex>();
    EXPECT_LT(max_abs_diff(ComplexMatrix(sys.C().transpose()), ComplexMatrix(kernel * params.P)),
              1e-12);
    const ComplexMatrix lhs = sys.G().cast<Complex>() * sigma.transpose() * kernel;
    const ComplexMatrix rhs = kernel * q_matrix(spec, params);
    EXPECT_LT(max_abs_diff(lhs, rhs), 1e-9);
    // The kernel generator spans the kernel of V + i Sigma / 2.
    const ComplexMatrix h =
        target_covariance(spec).matrix().cast<Complex>() + Complex(0.0, 0.5) * sigma;
    EXPECT_LT((h * kernel).norm(), 1e-9 * (1.0 + kernel.norm()));
  }
}

TEST(Synthesize, RoundTripProperty) {
  Generator gen(31);
  int accepted = 0;
  while (accepted < 100) {
    const std::size_t n = gen.integer(1, 4);
    const auto dim = static_cast<Eigen::Index>(n);
    const auto m = static_cast<Eigen::Index>(gen.integer(1, n));
    const PureStateSpec spec = gen.spec(n);
    const EngineeringParameters params(gen.complex(dim, m), gen.symmetric(dim),
                                       gen.antisymmetric(dim));
    if (!rank_condition(params.P, q_matrix(spec, params)).holds) continue;
    ++accepted;
    const Theorem1Report report = analyze(synthesize(spec, params));
    ASSERT_TRUE(report.unique) << "n=" << n << " m=" << m;
    EXPECT_TRUE(report.pure);
    EXPECT_LT((report.vs->matrix() - target_covariance(spec).matrix()).norm(), 1e-8);
  }
}

TEST(Synthesize, SteadyStateIndependentOfParameters) {
  Generator gen(37);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = gen.integer(2, 4);
    const auto dim = static_cast<Eigen::Index>(n);
    const PureStateSpec spec = gen.spec(n);
    const EngineeringParameters first(gen.complex(dim, dim), gen.symmetric(dim),
                                      gen.antisymmetric(dim));
    const EngineeringParameters second(gen.complex(dim, 1), gen.symmetric(dim),
                                       gen.antisymmetric(dim));
    ASSERT_TRUE(rank_condition(second.P, q_matrix(spec, second)).holds);
    const RealMatrix a = analyze(synthesize(spec, first)).vs->matrix();
    const RealMatrix b = analyze(synthesize(spec, second)).vs->matrix();
    EXPECT_LT((a - b).norm(), 1e-8);
  }
}

TEST(Synthesize, FullRankPWithoutHamiltonianAlwaysWorks) {
  Generator gen(41);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = gen.integer(1, 4);
    const auto dim = static_cast<Eigen::Index>(n);
    const PureStateSpec spec = gen.spec(n);
    const EngineeringParameters params(gen.complex(dim, dim), RealMatrix::Zero(dim, dim),
                                       RealMatrix::Zero(dim, dim));
    EXPECT_TRUE(rank_condition(params.P, q_matrix(spec, params)).holds);
    EXPECT_TRUE(theorem2_check(spec, synthesize(spec, params)));
  }
}

TEST(Theorem2, AgreesWithRankConditionProperty) {
  Generator gen(43);
  int passing = 0;
  int failing = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t n = gen.integer(2, 4);
    const auto dim = static_cast<Eigen::Index>(n);
    const auto k = static_cast<Eigen::Index>(gen.integer(1, n - 1));
    RealMatrix x = gen.symmetric(dim);
    RealMatrix y = RealMatrix::Identity(dim, dim);
    RealMatrix r = gen.symmetric(dim);
    RealMatrix gamma = gen.antisymmetric(dim);
    ComplexMatrix p = gen.complex(dim, static_cast<Eigen::Index>(gen.integer(1, n)));
    if (trial % 2 == 0) {
      // Block-diagonal Y, R, Gamma with P confined to the first k modes keeps the
      // Krylov space inside those modes: the rank condition must fail.
      for (Eigen::Index i = 0; i < dim; ++i) y(i, i) = gen.uniform(0.3, 3.0);
      r.topRightCorner(k, dim - k).setZero();
      r.bottomLeftCorner(dim - k, k).setZero();
      gamma.topRightCorner(k, dim - k).setZero();
      gamma.bottomLeftCorner(dim - k, k).setZero();
      p.bottomRows(dim - k).setZero();
    } else {
      y = gen.positive_definite(dim);
    }
    const PureStateSpec spec(x, y);
    const EngineeringParameters params(p, r, gamma);
    const bool rank_ok = rank_condition(p, q_matrix(spec, params)).holds;
    EXPECT_EQ(theorem2_check(spec, synthesize(spec, params)), rank_ok) << "trial " << trial;
    (rank_ok ? passing : failing)++;
  }
  EXPECT_GE(passing, 30);
  EXPECT_GE(failing, 30);
}

}  // namespace
}  // namespace puregauss
