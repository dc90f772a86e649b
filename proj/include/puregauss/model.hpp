#pragma once

// Gaussian dissipative-system data model.
//
// Quadratures are ordered x = (q_1..q_n, p_1..p_n). With hbar = 1 the vacuum
// covariance is I/2 and the uncertainty relation reads V + i Sigma/2 >= 0.
// The Hamiltonian is H = x^T G x / 2 and channel k couples through
// L_k = c_k^T x, with c_k the k-th row of C.

#include <cstddef>

#include "puregauss/numkit.hpp"

namespace puregauss {

/// The canonical form Sigma = [[0, I_n], [-I_n, 0]].
class SymplecticForm {
 public:
  explicit SymplecticForm(std::size_t modes);

  std::size_t modes() const { return modes_; }
  const RealMatrix& matrix() const { return sigma_; }

 private:
  std::size_t modes_;
  RealMatrix sigma_;
};

RealMatrix symplectic_form(std::size_t modes);

class GaussianDynamics {
 public:
  /// G must be 2n x 2n and C must have 2n columns. G is symmetrized; an
  /// asymmetry beyond rounding throws AsymmetricMatrix.
  GaussianDynamics(RealMatrix hamiltonian, ComplexMatrix coupling);

  std::size_t modes() const { return modes_; }
  std::size_t channels() const { return static_cast<std::size_t>(c_.rows()); }
  const RealMatrix& G() const { return g_; }
  const ComplexMatrix& C() const { return c_; }

 private:
  std::size_t modes_;
  RealMatrix g_;
  ComplexMatrix c_;
};

class CovarianceMatrix {
 public:
  /// Symmetrizes v and checks V > 0 and min eig(V + i Sigma/2) >= -uncertainty_tol.
  /// Throws InvalidCovariance otherwise.
  explicit CovarianceMatrix(RealMatrix v, double uncertainty_tol = 1e-9);

  static CovarianceMatrix vacuum(std::size_t modes);

  std::size_t modes() const { return static_cast<std::size_t>(v_.rows() / 2); }
  const RealMatrix& matrix() const { return v_; }
  operator const RealMatrix&() const { return v_; }

 private:
  RealMatrix v_;
};

struct GaussianState {
  RealVector mean;
  CovarianceMatrix cov;

  GaussianState(RealVector mean, CovarianceMatrix cov);
  static GaussianState zero_mean(CovarianceMatrix cov);
};

/// Largest asymmetry |M_ij - M_ji|, used when validating user data.
double asymmetry(const RealMatrix& m);

/// Throws AsymmetricMatrix naming the worst entry when |M_ij - M_ji| exceeds
/// rtol * max(1, max|M|).
void require_symmetric(const RealMatrix& m, std::string_view name,
                       double rtol = 1e-9);

/// A = Sigma (G + Im(C^dagger C)).
RealMatrix drift_matrix(const GaussianDynamics& sys);
/// D = Sigma Re(C^dagger C) Sigma^T.
RealMatrix diffusion_matrix(const GaussianDynamics& sys);

/// Hermitian-consistent parts of C^dagger C: Re symmetrized, Im antisymmetrized.
RealMatrix coupling_gram_real(const ComplexMatrix& c);
RealMatrix coupling_gram_imag(const ComplexMatrix& c);

/// 1 / sqrt(2^{2n} det V). Throws NonPositiveDeterminant when det V <= 0.
double purity(const RealMatrix& v);

/// Residual ||Sigma V Sigma V + I/4||_F of the pure-state identity.
double purity_residual(const RealMatrix& v);

/// True iff ||Sigma V Sigma V + I/4||_F <= residual_atol.
bool is_pure(const RealMatrix& v, const TolerancePolicy& tol = {});

/// min eig(V + i Sigma/2).
double uncertainty_margin(const RealMatrix& v);

/// Permutation helpers between (q1, p1, q2, p2, ...) and (q1..qn, p1..pn).
RealMatrix from_interleaved(const RealMatrix& v);
RealMatrix to_interleaved(const RealMatrix& v);
RealVector from_interleaved(const RealVector& x);
RealVector to_interleaved(const RealVector& x);

}  // namespace puregauss
