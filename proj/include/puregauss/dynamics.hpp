#pragma once

// Fixed-step RK4 integration of the moment equations
//   d<x>/dt = A <x>,   dV/dt = A V + V A^T + D.

#include <optional>
#include <vector>

#include "puregauss/model.hpp"

namespace puregauss {

struct Trajectory {
  std::vector<double> times;
  std::vector<RealVector> means;
  std::vector<RealMatrix> covs;
  /// Overlap with the reference steady state; empty when there is none.
  std::vector<double> fidelity;
  std::vector<double> purity;

  std::size_t size() const { return times.size(); }
};

struct EvolveOptions {
  /// Reference covariance for the fidelity column. When absent and the drift
  /// matrix is Hurwitz the Lyapunov steady state is used.
  std::optional<RealMatrix> reference;
  /// Upper bound on stored samples (first and last step always included).
  std::size_t max_samples = 2000;
  /// A covariance eigenvalue beyond this aborts with UnstableStep.
  double divergence_bound = 1e6;
};

/// Integrates from t = 0 to t_final with ceil(t_final/dt) equal steps, so the
/// actual step never exceeds dt. V is symmetrized after every step.
Trajectory evolve(const GaussianDynamics& sys, const GaussianState& init,
                  double t_final, double dt, const EvolveOptions& options = {});

/// 1 / sqrt(det(V + Vs)); the overlap of two zero-mean Gaussian states.
double fidelity_to(const RealMatrix& v, const RealMatrix& vs);

/// Step sizes tied to the slowest decay rate |max Re lambda(A)|:
/// t_final = 40 / rate and dt = 0.01 / rate. Throws NoUniqueSolution when A
/// is not Hurwitz.
struct DefaultHorizon {
  double t_final;
  double dt;
};
DefaultHorizon default_horizon(const GaussianDynamics& sys);

}  // namespace puregauss
