#include "puregauss/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "puregauss/error.hpp"

namespace puregauss {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NoUniqueSolution: return "NoUniqueSolution";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::NonPositiveDeterminant: return "NonPositiveDeterminant";
    case ErrorCode::InvalidCovariance: return "InvalidCovariance";
    case ErrorCode::AsymmetricMatrix: return "AsymmetricMatrix";
    case ErrorCode::SingularGram: return "SingularGram";
    case ErrorCode::ConditionViolated: return "ConditionViolated";
    case ErrorCode::InvalidPartition: return "InvalidPartition";
    case ErrorCode::NonPositiveY: return "NonPositiveY";
    case ErrorCode::NonPositiveRate: return "NonPositiveRate";
    case ErrorCode::TooFewModes: return "TooFewModes";
    case ErrorCode::UnstableStep: return "UnstableStep";
    case ErrorCode::UnknownEntry: return "UnknownEntry";
    case ErrorCode::Schema: return "Schema";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

void TolerancePolicy::validate() const {
  if (!(rank_rtol > 0) || !(residual_atol > 0) || !(eig_real_tol > 0)) {
    throw Error(ErrorCode::InvalidArgument,
                "tolerances must be strictly positive");
  }
}

namespace numkit {

namespace {

std::string shape(const Eigen::Index rows, const Eigen::Index cols) {
  std::ostringstream os;
  os << rows << "x" << cols;
  return os.str();
}

}  // namespace

void require_finite(const RealMatrix& m, std::string_view name) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::NonFinite,
                std::string(name) + " has a non-finite entry");
  }
}

void require_finite(const ComplexMatrix& m, std::string_view name) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::NonFinite,
                std::string(name) + " has a non-finite entry");
  }
}

void require_square(const RealMatrix& m, std::string_view name) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(name) + " must be square, got " +
                    shape(m.rows(), m.cols()));
  }
}

RealMatrix symmetrized(const RealMatrix& m) {
  return 0.5 * (m + m.transpose());
}

RealMatrix antisymmetrized(const RealMatrix& m) {
  return 0.5 * (m - m.transpose());
}

ComplexVector eigenvalues(const RealMatrix& a) {
  require_square(a, "A");
  if (a.size() == 0) return ComplexVector(0);
  Eigen::EigenSolver<RealMatrix> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NumericalFailure, "eigenvalue iteration failed");
  }
  return solver.eigenvalues();
}

bool is_hurwitz(const RealMatrix& a, const TolerancePolicy& tol) {
  const ComplexVector lambda = eigenvalues(a);
  return std::all_of(lambda.begin(), lambda.end(), [&](const Complex& l) {
    return l.real() < -tol.eig_real_tol;
  });
}

double spectral_abscissa(const RealMatrix& a) {
  const ComplexVector lambda = eigenvalues(a);
  double best = -std::numeric_limits<double>::infinity();
  for (const Complex& l : lambda) best = std::max(best, l.real());
  return best;
}

RealMatrix lyapunov_solve(const RealMatrix& a, const RealMatrix& d,
                          const TolerancePolicy& tol) {
  require_square(a, "A");
  require_square(d, "D");
  if (a.rows() != d.rows()) {
    throw Error(ErrorCode::DimensionMismatch,
                "A is " + shape(a.rows(), a.cols()) + " but D is " +
                    shape(d.rows(), d.cols()));
  }
  require_finite(a, "A");
  require_finite(d, "D");

  const Eigen::Index n = a.rows();
  const ComplexVector lambda = eigenvalues(a);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      if (std::abs(lambda(i) + lambda(j)) <= tol.eig_real_tol) {
        std::ostringstream os;
        os << "A and -A share the eigenvalue pair " << lambda(i) << ", "
           << lambda(j);
        throw Error(ErrorCode::NoUniqueSolution, os.str());
      }
    }
  }

  // Column-major vec: vec(A V) = (I (x) A) vec V and vec(V A^T) = (A (x) I) vec V.
  const Eigen::Index n2 = n * n;
  RealMatrix kron = RealMatrix::Zero(n2, n2);
  for (Eigen::Index blk = 0; blk < n; ++blk) {
    kron.block(blk * n, blk * n, n, n) += a;
  }
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      if (a(r, c) != 0.0) {
        kron.block(r * n, c * n, n, n).diagonal().array() += a(r, c);
      }
    }
  }
  const Eigen::FullPivLU<RealMatrix> lu(kron);

  auto solve = [&](const RealMatrix& rhs) {
    const RealVector v = lu.solve(-Eigen::Map<const RealVector>(rhs.data(), n2));
    return RealMatrix(Eigen::Map<const RealMatrix>(v.data(), n, n));
  };
  auto residual = [&](const RealMatrix& v) -> RealMatrix {
    return a * v + v * a.transpose() + d;
  };

  const RealMatrix d_sym = symmetrized(d);
  RealMatrix v = symmetrized(solve(d_sym));
  const double bound = tol.residual_atol * (1.0 + d.norm());
  if (residual(v).norm() > bound) {
    v = symmetrized(v + solve(residual(v)));
  }
  const double res = residual(v).norm();
  if (!(res <= bound)) {
    std::ostringstream os;
    os << "Lyapunov residual " << res << " exceeds " << bound;
    throw Error(ErrorCode::NumericalFailure, os.str());
  }
  return v;
}

namespace {

Eigen::JacobiSVD<ComplexMatrix> full_svd(const ComplexMatrix& m) {
  return Eigen::JacobiSVD<ComplexMatrix>(m, Eigen::ComputeFullU |
                                                Eigen::ComputeFullV);
}

std::size_t rank_from_singular_values(const RealVector& sv,
                                      const TolerancePolicy& tol) {
  if (sv.size() == 0) return 0;
  const double sigma_max = sv(0);
  if (sigma_max == 0.0) return 0;
  const double threshold = tol.rank_rtol * sigma_max;
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > threshold) ++rank;
  }
  return rank;
}

}  // namespace

std::size_t numerical_rank(const ComplexMatrix& m, const TolerancePolicy& tol) {
  if (m.size() == 0) return 0;
  require_finite(m, "M");
  const Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return rank_from_singular_values(svd.singularValues(), tol);
}

ComplexMatrix kernel_basis(const ComplexMatrix& m, const TolerancePolicy& tol) {
  const Eigen::Index cols = m.cols();
  if (m.rows() == 0 || cols == 0) {
    return ComplexMatrix::Identity(cols, cols);
  }
  require_finite(m, "M");
  const auto svd = full_svd(m);
  const auto rank =
      static_cast<Eigen::Index>(rank_from_singular_values(svd.singularValues(), tol));
  return svd.matrixV().rightCols(cols - rank);
}

ComplexMatrix range_basis(const ComplexMatrix& m, const TolerancePolicy& tol) {
  const Eigen::Index rows = m.rows();
  if (rows == 0 || m.cols() == 0) return ComplexMatrix(rows, 0);
  require_finite(m, "M");
  const auto svd = full_svd(m);
  const auto rank =
      static_cast<Eigen::Index>(rank_from_singular_values(svd.singularValues(), tol));
  return svd.matrixU().leftCols(rank);
}

ComplexMatrix projector(const ComplexMatrix& m, const TolerancePolicy& tol) {
  const ComplexMatrix q = range_basis(m, tol);
  return q * q.adjoint();
}

bool subspaces_equal(const ComplexMatrix& u, const ComplexMatrix& w,
                     const TolerancePolicy& tol) {
  if (u.rows() != w.rows()) {
    throw Error(ErrorCode::DimensionMismatch,
                "subspaces live in spaces of dimension " +
                    std::to_string(u.rows()) + " and " +
                    std::to_string(w.rows()));
  }
  return (projector(u, tol) - projector(w, tol)).norm() < tol.residual_atol;
}

RealMatrix matrix_exp(const RealMatrix& a, double t) {
  require_square(a, "A");
  const Eigen::Index n = a.rows();
  const RealMatrix identity = RealMatrix::Identity(n, n);
  if (n == 0 || t == 0.0) return identity;

  // Higham (2005) degree-13 coefficients.
  static constexpr double b[] = {64764752532480000.0,
                                 32382376266240000.0,
                                 7771770303897600.0,
                                 1187353796428800.0,
                                 129060195264000.0,
                                 10559470521600.0,
                                 670442572800.0,
                                 33522128640.0,
                                 1323241920.0,
                                 40840800.0,
                                 960960.0,
                                 16380.0,
                                 182.0,
                                 1.0};
  constexpr double theta13 = 5.371920351148152;

  RealMatrix x = a * t;
  require_finite(x, "A t");
  const double norm1 = x.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
    x /= std::ldexp(1.0, squarings);
  }

  const RealMatrix x2 = x * x;
  const RealMatrix x4 = x2 * x2;
  const RealMatrix x6 = x4 * x2;
  const RealMatrix u =
      x * (x6 * (b[13] * x6 + b[11] * x4 + b[9] * x2) + b[7] * x6 +
           b[5] * x4 + b[3] * x2 + b[1] * identity);
  const RealMatrix v = x6 * (b[12] * x6 + b[10] * x4 + b[8] * x2) +
                       b[6] * x6 + b[4] * x4 + b[2] * x2 + b[0] * identity;
  RealMatrix result = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

SymmetricSpectrum::SymmetricSpectrum(const RealMatrix& symmetric) {
  require_square(symmetric, "symmetric matrix");
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(symmetrized(symmetric));
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NumericalFailure,
                "symmetric eigendecomposition failed");
  }
  values = solver.eigenvalues();
  vectors = solver.eigenvectors();
}

double min_eigenvalue_hermitian(const ComplexMatrix& h) {
  if (h.rows() == 0) return 0.0;
  const ComplexMatrix herm = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm,
                                                      Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace numkit
}  // namespace puregauss
