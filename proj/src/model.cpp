#include "puregauss/model.hpp"

#include <cmath>
#include <sstream>

#include "puregauss/error.hpp"

namespace puregauss {

using numkit::antisymmetrized;
using numkit::symmetrized;

SymplecticForm::SymplecticForm(std::size_t modes)
    : modes_(modes), sigma_(RealMatrix::Zero(2 * modes, 2 * modes)) {
  const auto n = static_cast<Eigen::Index>(modes);
  sigma_.topRightCorner(n, n).setIdentity();
  sigma_.bottomLeftCorner(n, n) = -RealMatrix::Identity(n, n);
}

RealMatrix symplectic_form(std::size_t modes) {
  return SymplecticForm(modes).matrix();
}

double asymmetry(const RealMatrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

void require_symmetric(const RealMatrix& m, std::string_view name,
                       double rtol) {
  numkit::require_square(m, name);
  if (m.size() == 0) return;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  Eigen::Index worst_r = 0;
  Eigen::Index worst_c = 0;
  (m - m.transpose()).cwiseAbs().maxCoeff(&worst_r, &worst_c);
  const double gap = std::abs(m(worst_r, worst_c) - m(worst_c, worst_r));
  if (gap > rtol * scale) {
    std::ostringstream os;
    os.precision(17);
    os << name << " is not symmetric: " << name << "[" << worst_r << "]["
       << worst_c << "]=" << m(worst_r, worst_c) << " but " << name << "["
       << worst_c << "][" << worst_r << "]=" << m(worst_c, worst_r);
    throw Error(ErrorCode::AsymmetricMatrix, os.str());
  }
}

GaussianDynamics::GaussianDynamics(RealMatrix hamiltonian,
                                   ComplexMatrix coupling) {
  numkit::require_square(hamiltonian, "G");
  if (hamiltonian.rows() % 2 != 0) {
    throw Error(ErrorCode::DimensionMismatch,
                "G must be 2n x 2n, got odd dimension " +
                    std::to_string(hamiltonian.rows()));
  }
  if (coupling.cols() != hamiltonian.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                "C must have " + std::to_string(hamiltonian.cols()) +
                    " columns, got " + std::to_string(coupling.cols()));
  }
  numkit::require_finite(hamiltonian, "G");
  numkit::require_finite(coupling, "C");
  require_symmetric(hamiltonian, "G");
  modes_ = static_cast<std::size_t>(hamiltonian.rows() / 2);
  g_ = symmetrized(hamiltonian);
  c_ = std::move(coupling);
}

double uncertainty_margin(const RealMatrix& v) {
  const auto n = static_cast<std::size_t>(v.rows() / 2);
  const ComplexMatrix h =
      v.cast<Complex>() + Complex(0.0, 0.5) * symplectic_form(n).cast<Complex>();
  return numkit::min_eigenvalue_hermitian(h);
}

CovarianceMatrix::CovarianceMatrix(RealMatrix v, double uncertainty_tol) {
  numkit::require_square(v, "V");
  if (v.rows() == 0 || v.rows() % 2 != 0) {
    throw Error(ErrorCode::DimensionMismatch,
                "V must be 2n x 2n with n >= 1, got " + std::to_string(v.rows()));
  }
  numkit::require_finite(v, "V");
  require_symmetric(v, "V");
  v_ = symmetrized(v);

  const double lowest = numkit::SymmetricSpectrum(v_).values.minCoeff();
  if (!(lowest > 0.0)) {
    std::ostringstream os;
    os << "V is not positive definite (smallest eigenvalue " << lowest << ")";
    throw Error(ErrorCode::InvalidCovariance, os.str());
  }
  const double margin = uncertainty_margin(v_);
  if (margin < -uncertainty_tol) {
    std::ostringstream os;
    os << "V violates the uncertainty relation: min eig(V + i Sigma/2) = "
       << margin;
    throw Error(ErrorCode::InvalidCovariance, os.str());
  }
}

CovarianceMatrix CovarianceMatrix::vacuum(std::size_t modes) {
  return CovarianceMatrix(0.5 * RealMatrix::Identity(2 * modes, 2 * modes));
}

GaussianState::GaussianState(RealVector m, CovarianceMatrix c)
    : mean(std::move(m)), cov(std::move(c)) {
  if (mean.size() != cov.matrix().rows()) {
    throw Error(ErrorCode::DimensionMismatch,
                "mean has length " + std::to_string(mean.size()) +
                    " but V is " + std::to_string(cov.matrix().rows()) +
                    " square");
  }
  if (!mean.allFinite()) {
    throw Error(ErrorCode::NonFinite, "mean has a non-finite entry");
  }
}

GaussianState GaussianState::zero_mean(CovarianceMatrix cov) {
  RealVector mean = RealVector::Zero(cov.matrix().rows());
  return GaussianState(std::move(mean), std::move(cov));
}

RealMatrix coupling_gram_real(const ComplexMatrix& c) {
  const ComplexMatrix gram = c.adjoint() * c;
  return symmetrized(gram.real());
}

RealMatrix coupling_gram_imag(const ComplexMatrix& c) {
  const ComplexMatrix gram = c.adjoint() * c;
  return antisymmetrized(gram.imag());
}

RealMatrix drift_matrix(const GaussianDynamics& sys) {
  const RealMatrix sigma = symplectic_form(sys.modes());
  return sigma * (sys.G() + coupling_gram_imag(sys.C()));
}

RealMatrix diffusion_matrix(const GaussianDynamics& sys) {
  const RealMatrix sigma = symplectic_form(sys.modes());
  return symmetrized(sigma * coupling_gram_real(sys.C()) * sigma.transpose());
}

double purity(const RealMatrix& v) {
  numkit::require_square(v, "V");
  const double det = v.determinant();
  if (!(det > 0.0)) {
    std::ostringstream os;
    os << "det V = " << det;
    throw Error(ErrorCode::NonPositiveDeterminant, os.str());
  }
  // 2^{2n} det V = det(2V); computed this way to stay in range for large n.
  return 1.0 / std::sqrt((2.0 * v).determinant());
}

double purity_residual(const RealMatrix& v) {
  numkit::require_square(v, "V");
  const auto n = static_cast<std::size_t>(v.rows() / 2);
  const RealMatrix sigma = symplectic_form(n);
  const RealMatrix identity = RealMatrix::Identity(v.rows(), v.cols());
  return (sigma * v * sigma * v + 0.25 * identity).norm();
}

bool is_pure(const RealMatrix& v, const TolerancePolicy& tol) {
  return purity_residual(v) <= tol.residual_atol;
}

namespace {

// perm[k] is the (q.., p..) index of interleaved slot k.
std::vector<Eigen::Index> interleave_order(Eigen::Index dim) {
  const Eigen::Index n = dim / 2;
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < n; ++i) {
    perm[static_cast<std::size_t>(2 * i)] = i;
    perm[static_cast<std::size_t>(2 * i + 1)] = n + i;
  }
  return perm;
}

void require_even(Eigen::Index dim) {
  if (dim % 2 != 0) {
    throw Error(ErrorCode::DimensionMismatch,
                "phase-space dimension must be even, got " + std::to_string(dim));
  }
}

}  // namespace

RealMatrix from_interleaved(const RealMatrix& v) {
  numkit::require_square(v, "V");
  require_even(v.rows());
  const auto perm = interleave_order(v.rows());
  RealMatrix out(v.rows(), v.cols());
  for (Eigen::Index r = 0; r < v.rows(); ++r) {
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
      out(perm[r], perm[c]) = v(r, c);
    }
  }
  return out;
}

RealMatrix to_interleaved(const RealMatrix& v) {
  numkit::require_square(v, "V");
  require_even(v.rows());
  const auto perm = interleave_order(v.rows());
  RealMatrix out(v.rows(), v.cols());
  for (Eigen::Index r = 0; r < v.rows(); ++r) {
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
      out(r, c) = v(perm[r], perm[c]);
    }
  }
  return out;
}

RealVector from_interleaved(const RealVector& x) {
  require_even(x.size());
  const auto perm = interleave_order(x.size());
  RealVector out(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) out(perm[k]) = x(k);
  return out;
}

RealVector to_interleaved(const RealVector& x) {
  require_even(x.size());
  const auto perm = interleave_order(x.size());
  RealVector out(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) out(k) = x(perm[k]);
  return out;
}

}  // namespace puregauss
