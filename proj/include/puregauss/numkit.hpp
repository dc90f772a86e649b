#pragma once

// Dense real/complex linear-algebra kernel used by every other module.
//
// Matrices are plain Eigen dynamic matrices. All routines are pure functions
// of their inputs; tolerances are passed explicitly through TolerancePolicy.

#include <complex>
#include <string_view>

#include <Eigen/Dense>

namespace puregauss {

using Complex = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

struct TolerancePolicy {
  /// Singular values at or below rank_rtol * sigma_max count as zero.
  double rank_rtol = 1e-10;
  /// Absolute bound for residual-type checks.
  double residual_atol = 1e-9;
  /// Margin used when deciding whether a real part (or eigenvalue sum) is zero.
  double eig_real_tol = 1e-10;

  /// Throws InvalidArgument unless every tolerance is strictly positive.
  void validate() const;
};

namespace numkit {

/// Throws NonFinite if any entry is NaN or infinite.
void require_finite(const RealMatrix& m, std::string_view name);
void require_finite(const ComplexMatrix& m, std::string_view name);

/// Throws DimensionMismatch unless m is square.
void require_square(const RealMatrix& m, std::string_view name);

RealMatrix symmetrized(const RealMatrix& m);
RealMatrix antisymmetrized(const RealMatrix& m);

/// Eigenvalues of a general real square matrix.
ComplexVector eigenvalues(const RealMatrix& a);

/// True iff every eigenvalue has real part < -eig_real_tol.
bool is_hurwitz(const RealMatrix& a, const TolerancePolicy& tol = {});

/// Largest real part among the eigenvalues of a.
double spectral_abscissa(const RealMatrix& a);

/// Solves A V + V A^T + D = 0.
///
/// The equation is vectorized as (I (x) A + A (x) I) vec(V) = -vec(D) and solved
/// with a dense LU factorization. Throws NoUniqueSolution when some pair of
/// eigenvalues of A satisfies |lambda_i + lambda_j| <= eig_real_tol, and
/// NumericalFailure when the residual bound
///   ||A V + V A^T + D||_F <= residual_atol * (1 + ||D||_F)
/// cannot be met after one round of iterative refinement. The result is
/// exactly symmetric.
RealMatrix lyapunov_solve(const RealMatrix& a, const RealMatrix& d,
                          const TolerancePolicy& tol = {});

std::size_t numerical_rank(const ComplexMatrix& m,
                           const TolerancePolicy& tol = {});
/// Orthonormal columns spanning ker(m).
ComplexMatrix kernel_basis(const ComplexMatrix& m,
                           const TolerancePolicy& tol = {});
/// Orthonormal columns spanning range(m).
ComplexMatrix range_basis(const ComplexMatrix& m,
                          const TolerancePolicy& tol = {});

/// Orthogonal projector onto the column span of m.
ComplexMatrix projector(const ComplexMatrix& m, const TolerancePolicy& tol = {});

/// True iff the column spans of u and w coincide, judged by the Frobenius
/// distance between their orthogonal projectors.
bool subspaces_equal(const ComplexMatrix& u, const ComplexMatrix& w,
                     const TolerancePolicy& tol = {});

/// Matrix exponential e^{A t}, Padé(13) with scaling and squaring.
RealMatrix matrix_exp(const RealMatrix& a, double t = 1.0);

/// Principal functions of a symmetric matrix through its eigendecomposition.
struct SymmetricSpectrum {
  RealVector values;
  RealMatrix vectors;

  explicit SymmetricSpectrum(const RealMatrix& symmetric);

  template <typename F>
  RealMatrix apply(F&& f) const {
    RealVector mapped = values.unaryExpr(std::forward<F>(f));
    return vectors * mapped.asDiagonal() * vectors.transpose();
  }
};

/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue_hermitian(const ComplexMatrix& h);

}  // namespace numkit
}  // namespace puregauss
