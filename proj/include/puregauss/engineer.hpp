#pragma once

// Synthesis of dissipative systems whose unique steady state is a given pure
// Gaussian state.
//
// A pure state is described by Z = X + iY (X symmetric, Y symmetric positive
// definite). Every system with that state as unique steady state has
//   C = P^T (-Z, I)
//   G = [[XRX + YRY - Gamma Y^-1 X - X Y^-1 Gamma^T,  -XR + Gamma Y^-1],
//        [-RX + Y^-1 Gamma^T,                          R              ]]
// for some complex P (n x m), real symmetric R and real antisymmetric Gamma
// such that (P, QP, ..., Q^{n-1}P) has rank n, where Q = -iRY - Y^-1 Gamma^T.

#include <set>
#include <utility>
#include <vector>

#include "puregauss/model.hpp"

namespace puregauss {

class PureStateSpec {
 public:
  /// Throws AsymmetricMatrix, DimensionMismatch or NonPositiveY.
  PureStateSpec(RealMatrix x, RealMatrix y);

  std::size_t modes() const { return static_cast<std::size_t>(x_.rows()); }
  const RealMatrix& X() const { return x_; }
  const RealMatrix& Y() const { return y_; }
  ComplexMatrix Z() const;

  const RealMatrix& Y_inverse() const { return y_inv_; }
  const RealMatrix& Y_sqrt() const { return y_sqrt_; }
  const RealMatrix& Y_inverse_sqrt() const { return y_inv_sqrt_; }

  /// S = [[Y^-1/2, 0], [X Y^-1/2, Y^1/2]].
  RealMatrix symplectic() const;
  /// (-Z; I): orthogonal complement basis, spans ker(V_s + i Sigma/2).
  ComplexMatrix kernel_generator() const;

 private:
  RealMatrix x_;
  RealMatrix y_;
  RealMatrix y_inv_;
  RealMatrix y_sqrt_;
  RealMatrix y_inv_sqrt_;
};

struct EngineeringParameters {
  ComplexMatrix P;
  RealMatrix R;
  RealMatrix Gamma;

  /// Symmetrizes R and antisymmetrizes Gamma after validating them.
  EngineeringParameters(ComplexMatrix p, RealMatrix r, RealMatrix gamma);

  std::size_t modes() const { return static_cast<std::size_t>(P.rows()); }
  std::size_t channels() const { return static_cast<std::size_t>(P.cols()); }
};

/// P = I_n, R = Gamma = 0.
EngineeringParameters purely_dissipative_parameters(std::size_t modes);

/// V_s = S S^T / 2.
CovarianceMatrix target_covariance(const PureStateSpec& spec,
                                   const TolerancePolicy& tol = {});

GaussianDynamics synthesize(const PureStateSpec& spec,
                            const EngineeringParameters& params);

/// synthesize(spec, purely_dissipative_parameters(n)).
GaussianDynamics purely_dissipative(const PureStateSpec& spec);

/// Q = -iRY - Y^-1 Gamma^T.
ComplexMatrix q_matrix(const PureStateSpec& spec,
                       const EngineeringParameters& params);

struct RankCondition {
  bool holds = false;
  std::size_t rank = 0;
};

/// rank(P, QP, ..., Q^{n-1}P) == n.
RankCondition rank_condition(const ComplexMatrix& p, const ComplexMatrix& q,
                             const TolerancePolicy& tol = {});

/// ker(V_s + i Sigma/2) == range(K^T) for the system's K.
bool theorem2_check(const PureStateSpec& spec, const GaussianDynamics& sys,
                    const TolerancePolicy& tol = {});

/// Which modes each channel touches and which mode pairs the Hamiltonian
/// couples. Mode indices are 0-based; edges are stored with first < second.
struct LocalityProfile {
  std::vector<std::set<std::size_t>> channel_supports;
  std::set<std::pair<std::size_t, std::size_t>> hamiltonian_edges;
};

LocalityProfile locality_profile(const GaussianDynamics& sys,
                                 const TolerancePolicy& tol = {});

}  // namespace puregauss
