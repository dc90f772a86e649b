#include "puregauss/engineer.hpp"

#include <cmath>
#include <sstream>

#include "puregauss/error.hpp"
#include "puregauss/steady.hpp"

namespace puregauss {

PureStateSpec::PureStateSpec(RealMatrix x, RealMatrix y) {
  require_symmetric(x, "X");
  require_symmetric(y, "Y");
  if (x.rows() != y.rows()) {
    throw Error(ErrorCode::DimensionMismatch,
                "X is " + std::to_string(x.rows()) + " square but Y is " +
                    std::to_string(y.rows()) + " square");
  }
  if (x.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "a state needs at least one mode");
  }
  numkit::require_finite(x, "X");
  numkit::require_finite(y, "Y");
  x_ = numkit::symmetrized(x);
  y_ = numkit::symmetrized(y);

  const numkit::SymmetricSpectrum spectrum(y_);
  if (!(spectrum.values.minCoeff() > 0.0)) {
    std::ostringstream os;
    os << "Y must be positive definite, smallest eigenvalue "
       << spectrum.values.minCoeff();
    throw Error(ErrorCode::NonPositiveY, os.str());
  }
  y_inv_ = spectrum.apply([](double l) { return 1.0 / l; });
  y_sqrt_ = spectrum.apply([](double l) { return std::sqrt(l); });
  y_inv_sqrt_ = spectrum.apply([](double l) { return 1.0 / std::sqrt(l); });
}

ComplexMatrix PureStateSpec::Z() const {
  ComplexMatrix z(x_.rows(), x_.cols());
  z.real() = x_;
  z.imag() = y_;
  return z;
}

RealMatrix PureStateSpec::symplectic() const {
  const auto n = x_.rows();
  RealMatrix s = RealMatrix::Zero(2 * n, 2 * n);
  s.topLeftCorner(n, n) = y_inv_sqrt_;
  s.bottomLeftCorner(n, n) = x_ * y_inv_sqrt_;
  s.bottomRightCorner(n, n) = y_sqrt_;
  return s;
}

ComplexMatrix PureStateSpec::kernel_generator() const {
  const auto n = x_.rows();
  ComplexMatrix g(2 * n, n);
  g.topRows(n) = -Z();
  g.bottomRows(n).setIdentity();
  return g;
}

EngineeringParameters::EngineeringParameters(ComplexMatrix p, RealMatrix r,
                                             RealMatrix gamma) {
  const auto n = p.rows();
  if (n == 0 || p.cols() == 0) {
    throw Error(ErrorCode::DimensionMismatch,
                "P must be n x m with n, m >= 1");
  }
  numkit::require_square(r, "R");
  numkit::require_square(gamma, "Gamma");
  if (r.rows() != n || gamma.rows() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                "R and Gamma must be " + std::to_string(n) + " square");
  }
  numkit::require_finite(p, "P");
  numkit::require_finite(r, "R");
  numkit::require_finite(gamma, "Gamma");
  require_symmetric(r, "R");
  const double scale = std::max(1.0, gamma.cwiseAbs().maxCoeff());
  if ((gamma + gamma.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw Error(ErrorCode::AsymmetricMatrix, "Gamma must be antisymmetric");
  }
  P = std::move(p);
  R = numkit::symmetrized(r);
  Gamma = numkit::antisymmetrized(gamma);
}

EngineeringParameters purely_dissipative_parameters(std::size_t modes) {
  const auto n = static_cast<Eigen::Index>(modes);
  return EngineeringParameters(ComplexMatrix::Identity(n, n),
                               RealMatrix::Zero(n, n), RealMatrix::Zero(n, n));
}

CovarianceMatrix target_covariance(const PureStateSpec& spec,
                                   const TolerancePolicy& tol) {
  const RealMatrix s = spec.symplectic();
  const RealMatrix sigma = symplectic_form(spec.modes());
  const double scale = 1.0 + s.squaredNorm();
  const double symplectic_residual = (s * sigma * s.transpose() - sigma).norm();
  if (symplectic_residual > tol.residual_atol * scale) {
    std::ostringstream os;
    os << "S is not symplectic, residual " << symplectic_residual;
    throw Error(ErrorCode::NumericalFailure, os.str());
  }
  RealMatrix v = 0.5 * s * s.transpose();
  if (purity_residual(v) > tol.residual_atol * scale * scale) {
    std::ostringstream os;
    os << "target covariance is not pure, residual " << purity_residual(v);
    throw Error(ErrorCode::NumericalFailure, os.str());
  }
  return CovarianceMatrix(std::move(v), tol.residual_atol * scale);
}

GaussianDynamics synthesize(const PureStateSpec& spec,
                            const EngineeringParameters& params) {
  if (params.modes() != spec.modes()) {
    throw Error(ErrorCode::DimensionMismatch,
                "parameters are for " + std::to_string(params.modes()) +
                    " modes but the state has " + std::to_string(spec.modes()));
  }
  const auto n = static_cast<Eigen::Index>(spec.modes());
  const RealMatrix& x = spec.X();
  const RealMatrix& y = spec.Y();
  const RealMatrix& y_inv = spec.Y_inverse();
  const RealMatrix& r = params.R;
  const RealMatrix& gamma = params.Gamma;

  const ComplexMatrix c = params.P.transpose() * spec.kernel_generator().transpose();

  const RealMatrix g2 = -x * r + gamma * y_inv;
  const RealMatrix g1 = x * r * x + y * r * y - gamma * y_inv * x -
                        x * y_inv * gamma.transpose();
  RealMatrix g(2 * n, 2 * n);
  g.topLeftCorner(n, n) = g1;
  g.topRightCorner(n, n) = g2;
  g.bottomLeftCorner(n, n) = g2.transpose();
  g.bottomRightCorner(n, n) = r;
  return GaussianDynamics(numkit::symmetrized(g), c);
}

GaussianDynamics purely_dissipative(const PureStateSpec& spec) {
  return synthesize(spec, purely_dissipative_parameters(spec.modes()));
}

ComplexMatrix q_matrix(const PureStateSpec& spec,
                       const EngineeringParameters& params) {
  if (params.modes() != spec.modes()) {
    throw Error(ErrorCode::DimensionMismatch,
                "parameters and state disagree on the mode count");
  }
  const ComplexMatrix ry = (params.R * spec.Y()).cast<Complex>();
  const ComplexMatrix yg =
      (spec.Y_inverse() * params.Gamma.transpose()).cast<Complex>();
  return Complex(0.0, -1.0) * ry - yg;
}

RankCondition rank_condition(const ComplexMatrix& p, const ComplexMatrix& q,
                             const TolerancePolicy& tol) {
  const auto n = p.rows();
  if (q.rows() != n || q.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                "Q must be " + std::to_string(n) + " square");
  }
  const auto m = p.cols();
  ComplexMatrix krylov(n, n * m);
  ComplexMatrix current = p;
  for (Eigen::Index i = 0; i < n; ++i) {
    krylov.middleCols(i * m, m) = current;
    current = q * current;
  }
  RankCondition out;
  out.rank = numkit::numerical_rank(krylov, tol);
  out.holds = out.rank == static_cast<std::size_t>(n);
  return out;
}

bool theorem2_check(const PureStateSpec& spec, const GaussianDynamics& sys,
                    const TolerancePolicy& tol) {
  if (sys.modes() != spec.modes()) {
    throw Error(ErrorCode::DimensionMismatch,
                "system has " + std::to_string(sys.modes()) +
                    " modes but the state has " + std::to_string(spec.modes()));
  }
  const KMatrix k = build_K(sys);
  return numkit::subspaces_equal(spec.kernel_generator(),
                                 k.matrix().transpose(), tol);
}

LocalityProfile locality_profile(const GaussianDynamics& sys,
                                 const TolerancePolicy& tol) {
  const auto n = static_cast<Eigen::Index>(sys.modes());
  LocalityProfile out;
  const ComplexMatrix& c = sys.C();
  for (Eigen::Index k = 0; k < c.rows(); ++k) {
    std::set<std::size_t> support;
    const double row_max = c.row(k).cwiseAbs().maxCoeff();
    const double threshold = tol.rank_rtol * row_max;
    for (Eigen::Index i = 0; row_max > 0.0 && i < n; ++i) {
      if (std::abs(c(k, i)) > threshold || std::abs(c(k, n + i)) > threshold) {
        support.insert(static_cast<std::size_t>(i));
      }
    }
    out.channel_supports.push_back(std::move(support));
  }

  const RealMatrix& g = sys.G();
  const double g_max = g.size() ? g.cwiseAbs().maxCoeff() : 0.0;
  const double threshold = tol.rank_rtol * g_max;
  for (Eigen::Index i = 0; g_max > 0.0 && i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double coupling =
          std::max({std::abs(g(i, j)), std::abs(g(i, n + j)),
                    std::abs(g(n + i, j)), std::abs(g(n + i, n + j))});
      if (coupling > threshold) {
        out.hamiltonian_edges.emplace(static_cast<std::size_t>(i),
                                      static_cast<std::size_t>(j));
      }
    }
  }
  return out;
}

}  // namespace puregauss
