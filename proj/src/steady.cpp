#include "puregauss/steady.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "puregauss/error.hpp"

namespace puregauss {

namespace {

constexpr double kMaxGramCondition = 1e12;

ComplexMatrix complexify(const RealMatrix& m) { return m.cast<Complex>(); }

ComplexMatrix half_i_sigma(std::size_t modes) {
  return Complex(0.0, 0.5) * complexify(symplectic_form(modes));
}

}  // namespace

KMatrix::KMatrix(ComplexMatrix stacked, std::size_t modes, std::size_t channels)
    : k_(std::move(stacked)), modes_(modes), channels_(channels) {
  const auto rows = static_cast<Eigen::Index>(2 * modes * channels);
  const auto cols = static_cast<Eigen::Index>(2 * modes);
  if (k_.rows() != rows || k_.cols() != cols) {
    throw Error(ErrorCode::DimensionMismatch,
                "K must be " + std::to_string(rows) + "x" + std::to_string(cols));
  }
}

ComplexMatrix KMatrix::block(std::size_t i) const {
  if (i >= block_count()) {
    throw Error(ErrorCode::InvalidArgument,
                "block index " + std::to_string(i) + " out of range");
  }
  const auto m = static_cast<Eigen::Index>(channels_);
  return k_.middleRows(static_cast<Eigen::Index>(i) * m, m);
}

KMatrix build_K(const GaussianDynamics& sys) {
  const std::size_t n = sys.modes();
  const auto m = static_cast<Eigen::Index>(sys.channels());
  const auto dim = static_cast<Eigen::Index>(2 * n);
  // (G Sigma^T)^T = Sigma G, so block_i = block_{i-1} (Sigma G).
  const ComplexMatrix step = complexify(symplectic_form(n) * sys.G());
  ComplexMatrix k(2 * n * static_cast<std::size_t>(m), dim);
  ComplexMatrix current = sys.C();
  for (Eigen::Index i = 0; i < dim; ++i) {
    k.middleRows(i * m, m) = current;
    current = current * step;
  }
  return KMatrix(std::move(k), n, sys.channels());
}

ComplexMatrix k_sigma_ct(const GaussianDynamics& sys) {
  const KMatrix k = build_K(sys);
  return k.matrix() * complexify(symplectic_form(sys.modes())) *
         sys.C().transpose();
}

ConditionIII condition_iii(const GaussianDynamics& sys,
                           const TolerancePolicy& tol) {
  const KMatrix k = build_K(sys);
  const ComplexMatrix product =
      k.matrix() * complexify(symplectic_form(sys.modes())) * sys.C().transpose();
  ConditionIII out;
  out.residual = product.norm();
  out.threshold = tol.residual_atol * (1.0 + k.matrix().norm() * sys.C().norm());
  out.holds = out.residual <= out.threshold;
  return out;
}

ConditionII condition_ii(const GaussianDynamics& sys, const RealMatrix& vs,
                         const TolerancePolicy& tol) {
  const auto dim = static_cast<Eigen::Index>(2 * sys.modes());
  if (vs.rows() != dim || vs.cols() != dim) {
    throw Error(ErrorCode::DimensionMismatch,
                "Vs must be " + std::to_string(dim) + " square");
  }
  const RealMatrix sigma = symplectic_form(sys.modes());
  ConditionII out;
  out.dark_residual =
      ((complexify(vs) + half_i_sigma(sys.modes())) * sys.C().transpose()).norm();
  out.commutation_residual =
      (sigma * sys.G() * vs + vs * sys.G() * sigma.transpose()).norm();
  const double dark_bound =
      tol.residual_atol * (1.0 + vs.norm() * sys.C().norm());
  const double comm_bound =
      tol.residual_atol * (1.0 + vs.norm() * sys.G().norm());
  out.holds = out.dark_residual <= dark_bound &&
              out.commutation_residual <= comm_bound;
  return out;
}

PureCovarianceFormula pure_Vs_formula(const GaussianDynamics& sys,
                                      const TolerancePolicy& tol) {
  const ConditionIII c3 = condition_iii(sys, tol);
  if (!c3.holds) {
    std::ostringstream os;
    os << "||K Sigma C^T||_F = " << c3.residual << " exceeds " << c3.threshold;
    throw Error(ErrorCode::ConditionViolated, os.str());
  }
  // K Vs = (i/2) K Sigma is linear in the rows of K, so the formula holds for
  // any matrix with the same row space. Powers of Sigma G make the raw rows
  // wildly scaled; an orthonormal basis of the row space keeps the Gram
  // matrix conditioned by the geometry alone.
  ComplexMatrix rows = build_K(sys).matrix();
  const double largest = rows.rowwise().norm().maxCoeff();
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    const double norm = rows.row(r).norm();
    if (norm > tol.rank_rtol * largest) rows.row(r) /= norm;
  }
  const ComplexMatrix basis = numkit::range_basis(rows.transpose(), tol);
  if (basis.cols() == 0) {
    throw Error(ErrorCode::SingularGram, "K is zero; the steady state is not unique");
  }
  const ComplexMatrix k = basis.transpose();
  const ComplexMatrix gram = k.adjoint() * k;
  const RealMatrix gram_re = numkit::symmetrized(gram.real());
  const RealMatrix gram_im = numkit::antisymmetrized(gram.imag());

  const RealVector spectrum = numkit::SymmetricSpectrum(gram_re).values;
  const double lo = spectrum.minCoeff();
  const double hi = spectrum.maxCoeff();
  const double cond =
      lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(cond <= kMaxGramCondition)) {
    std::ostringstream os;
    os << "Re(K^dagger K) has condition number " << cond
       << "; the steady state is not unique";
    throw Error(ErrorCode::SingularGram, os.str());
  }

  const RealMatrix sigma = symplectic_form(sys.modes());
  const RealMatrix inverse =
      Eigen::CompleteOrthogonalDecomposition<RealMatrix>(gram_re).pseudoInverse();
  const RealMatrix raw = 0.5 * sigma.transpose() * gram_im * inverse;

  const double sym_residual = (raw - raw.transpose()).norm();
  const double scale = 1.0 + raw.norm();
  if (sym_residual > tol.residual_atol * scale) {
    std::ostringstream os;
    os << "closed-form Vs has symmetry residual " << sym_residual;
    throw Error(ErrorCode::NumericalFailure, os.str());
  }
  RealMatrix vs = numkit::symmetrized(raw);
  if (purity_residual(vs) > tol.residual_atol * scale * scale) {
    std::ostringstream os;
    os << "closed-form Vs fails the purity identity, residual "
       << purity_residual(vs);
    throw Error(ErrorCode::NumericalFailure, os.str());
  }
  return PureCovarianceFormula{CovarianceMatrix(std::move(vs), tol.residual_atol * scale),
                               cond};
}

bool Theorem1Report::conditions_agree() const {
  if (!unique || !cond_ii) return false;
  return pure == cond_ii->holds && pure == cond_iii.holds;
}

Theorem1Report analyze(const GaussianDynamics& sys, const TolerancePolicy& tol) {
  tol.validate();
  Theorem1Report report;
  report.modes = sys.modes();
  report.channels = sys.channels();

  const RealMatrix a = drift_matrix(sys);
  report.drift_eigenvalues = numkit::eigenvalues(a);
  report.unique = std::all_of(
      report.drift_eigenvalues.begin(), report.drift_eigenvalues.end(),
      [&](const Complex& l) { return l.real() < -tol.eig_real_tol; });

  const KMatrix k = build_K(sys);
  const ComplexMatrix sigma_c = complexify(symplectic_form(sys.modes()));
  report.cond_iii = condition_iii(sys, tol);
  report.k_sigma_kt_residual =
      (k.matrix() * sigma_c * k.matrix().transpose()).norm();

  if (!report.unique) {
    report.vs_formula_failure = "steady state is not unique";
    return report;
  }

  const RealMatrix vs = numkit::lyapunov_solve(a, diffusion_matrix(sys), tol);
  report.vs.emplace(vs, tol.residual_atol * (1.0 + vs.norm()));
  report.purity = purity(vs);
  report.pure = is_pure(vs, tol);
  report.cond_ii = condition_ii(sys, vs, tol);
  report.uncertainty_k_residual =
      ((complexify(vs) + half_i_sigma(sys.modes())) * k.matrix().transpose()).norm();

  if (!report.cond_iii.holds) {
    report.vs_formula_failure = "condition (iii) does not hold";
  } else {
    try {
      report.vs_formula = pure_Vs_formula(sys, tol);
    } catch (const Error& e) {
      report.vs_formula_failure = e.what();
    }
  }
  return report;
}

RealVector symplectic_eigenvalues(const RealMatrix& v) {
  numkit::require_square(v, "V");
  const auto n = static_cast<std::size_t>(v.rows() / 2);
  const ComplexVector lambda =
      numkit::eigenvalues(symplectic_form(n) * v);
  std::vector<double> moduli;
  moduli.reserve(static_cast<std::size_t>(lambda.size()));
  for (const Complex& l : lambda) moduli.push_back(std::abs(l.imag()));
  std::sort(moduli.begin(), moduli.end());
  // Eigenvalues of Sigma V come in pairs +-i nu.
  RealVector nu(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    nu(static_cast<Eigen::Index>(i)) = 0.5 * (moduli[2 * i] + moduli[2 * i + 1]);
  }
  return nu;
}

double log_negativity(const RealMatrix& v,
                      const std::vector<std::size_t>& partition) {
  numkit::require_square(v, "V");
  const auto n = static_cast<std::size_t>(v.rows() / 2);
  const std::set<std::size_t> unique_modes(partition.begin(), partition.end());
  if (partition.empty() || unique_modes.size() != partition.size() ||
      unique_modes.size() >= n || *unique_modes.rbegin() >= n) {
    throw Error(ErrorCode::InvalidPartition,
                "partition must be a nonempty proper subset of distinct modes "
                "in [0, " + std::to_string(n) + ")");
  }
  RealVector flip = RealVector::Ones(v.rows());
  for (std::size_t mode : unique_modes) {
    flip(static_cast<Eigen::Index>(n + mode)) = -1.0;
  }
  const RealMatrix transposed = flip.asDiagonal() * v * flip.asDiagonal();
  const RealVector nu = symplectic_eigenvalues(transposed);
  double total = 0.0;
  for (Eigen::Index i = 0; i < nu.size(); ++i) {
    total += std::max(0.0, -std::log(2.0 * nu(i)));
  }
  return total;
}

}  // namespace puregauss
