#pragma once

// Steady-state analysis of a Gaussian dissipative system: the Lyapunov
// steady covariance, the three equivalent pure-steady-state conditions and
// the closed-form covariance they imply.

#include <optional>
#include <string>
#include <vector>

#include "puregauss/model.hpp"

namespace puregauss {

/// K = (C^T, G Sigma^T C^T, ..., (G Sigma^T)^{2n-1} C^T)^T, stored as 2n
/// stacked m x 2n blocks. Block i equals block i-1 times (Sigma G).
class KMatrix {
 public:
  KMatrix(ComplexMatrix stacked, std::size_t modes, std::size_t channels);

  const ComplexMatrix& matrix() const { return k_; }
  std::size_t block_count() const { return 2 * modes_; }
  ComplexMatrix block(std::size_t i) const;

 private:
  ComplexMatrix k_;
  std::size_t modes_;
  std::size_t channels_;
};

KMatrix build_K(const GaussianDynamics& sys);

struct ConditionIII {
  bool holds = false;
  double residual = 0.0;  // ||K Sigma C^T||_F
  double threshold = 0.0;
};

/// K Sigma C^T = 0, judged against residual_atol * (1 + ||K||_F ||C||_F).
ConditionIII condition_iii(const GaussianDynamics& sys,
                           const TolerancePolicy& tol = {});

/// The raw stacked product K Sigma C^T (2nm x m).
ComplexMatrix k_sigma_ct(const GaussianDynamics& sys);

struct ConditionII {
  bool holds = false;
  double dark_residual = 0.0;         // ||(Vs + i Sigma/2) C^T||_F
  double commutation_residual = 0.0;  // ||Sigma G Vs + Vs G Sigma^T||_F
};

/// (Vs + i Sigma/2) C^T = 0 and Sigma G Vs + Vs G Sigma^T = 0. Each residual
/// is compared with residual_atol scaled by the norms of its factors.
ConditionII condition_ii(const GaussianDynamics& sys, const RealMatrix& vs,
                         const TolerancePolicy& tol = {});

struct PureCovarianceFormula {
  CovarianceMatrix vs;
  /// 2-norm condition number of Re(K^dagger K).
  double gram_condition;
};

/// Vs = Sigma^T Im(K^dagger K) [Re(K^dagger K)]^{-1} / 2.
///
/// Throws ConditionViolated when condition (iii) fails and SingularGram when
/// Re(K^dagger K) has condition number above 1e12. Below that bound the
/// inverse is taken as a pseudo-inverse. The result is checked for symmetry
/// and purity before it is returned.
PureCovarianceFormula pure_Vs_formula(const GaussianDynamics& sys,
                                      const TolerancePolicy& tol = {});

struct Theorem1Report {
  std::size_t modes = 0;
  std::size_t channels = 0;
  ComplexVector drift_eigenvalues;
  bool unique = false;
  std::optional<CovarianceMatrix> vs;
  std::optional<double> purity;
  bool pure = false;
  std::optional<ConditionII> cond_ii;
  ConditionIII cond_iii;
  std::optional<PureCovarianceFormula> vs_formula;
  std::string vs_formula_failure;
  /// ||(Vs + i Sigma/2) K^T||_F when Vs is available.
  std::optional<double> uncertainty_k_residual;
  /// ||K Sigma K^T||_F.
  double k_sigma_kt_residual = 0.0;

  /// True when unique and the Lyapunov purity, condition (ii) and
  /// condition (iii) verdicts coincide.
  bool conditions_agree() const;
};

/// Full steady-state analysis. When the steady state is not unique only the
/// spectrum and condition (iii) are reported.
Theorem1Report analyze(const GaussianDynamics& sys,
                       const TolerancePolicy& tol = {});

/// Logarithmic negativity of the bipartition `partition | rest` (0-based
/// mode indices). Throws InvalidPartition for empty, full, duplicate or
/// out-of-range partitions.
double log_negativity(const RealMatrix& v, const std::vector<std::size_t>& partition);

/// Symplectic eigenvalues of v (n values, ascending).
RealVector symplectic_eigenvalues(const RealMatrix& v);

}  // namespace puregauss
