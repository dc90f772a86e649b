#include "puregauss/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "puregauss/error.hpp"

namespace puregauss {

double fidelity_to(const RealMatrix& v, const RealMatrix& vs) {
  if (v.rows() != vs.rows() || v.cols() != vs.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                "fidelity needs covariances of the same size");
  }
  const double det = (v + vs).determinant();
  if (!(det > 0.0)) {
    std::ostringstream os;
    os << "det(V + Vs) = " << det;
    throw Error(ErrorCode::NonPositiveDeterminant, os.str());
  }
  return 1.0 / std::sqrt(det);
}

DefaultHorizon default_horizon(const GaussianDynamics& sys) {
  const RealMatrix a = drift_matrix(sys);
  if (!numkit::is_hurwitz(a)) {
    throw Error(ErrorCode::NoUniqueSolution,
                "no default horizon for a non-Hurwitz drift matrix");
  }
  const double rate = std::abs(numkit::spectral_abscissa(a));
  // Fast modes bound the explicit step: RK4 is stable for |lambda| h < 2.78.
  const double radius = numkit::eigenvalues(a).cwiseAbs().maxCoeff();
  return DefaultHorizon{40.0 / rate, std::min(0.01 / rate, 1.0 / radius)};
}

Trajectory evolve(const GaussianDynamics& sys, const GaussianState& init,
                  double t_final, double dt, const EvolveOptions& options) {
  if (!(t_final > 0.0) || !(dt > 0.0) || dt > t_final || !std::isfinite(t_final)) {
    std::ostringstream os;
    os << "need 0 < dt <= t_final, got dt=" << dt << " t_final=" << t_final;
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
  const auto dim = static_cast<Eigen::Index>(2 * sys.modes());
  if (init.mean.size() != dim) {
    throw Error(ErrorCode::DimensionMismatch,
                "initial state has the wrong number of modes");
  }
  if (options.max_samples < 2) {
    throw Error(ErrorCode::InvalidArgument, "max_samples must be at least 2");
  }

  const RealMatrix a = drift_matrix(sys);
  const RealMatrix at = a.transpose();
  const RealMatrix d = diffusion_matrix(sys);

  std::optional<RealMatrix> reference = options.reference;
  if (!reference && numkit::is_hurwitz(a)) {
    reference = numkit::lyapunov_solve(a, d);
  }
  if (reference && (reference->rows() != dim || reference->cols() != dim)) {
    throw Error(ErrorCode::DimensionMismatch, "reference covariance has the wrong size");
  }

  const auto steps = static_cast<std::size_t>(std::ceil(t_final / dt - 1e-9));
  const double h = t_final / static_cast<double>(steps);
  const std::size_t stride = (steps + options.max_samples - 2) / (options.max_samples - 1);

  Trajectory out;
  auto record = [&](double t, const RealVector& mean, const RealMatrix& v) {
    out.times.push_back(t);
    out.means.push_back(mean);
    out.covs.push_back(v);
    out.purity.push_back(purity(v));
    if (reference) out.fidelity.push_back(fidelity_to(v, *reference));
  };

  auto cov_rate = [&](const RealMatrix& v) -> RealMatrix {
    return a * v + v * at + d;
  };

  RealVector mean = init.mean;
  RealMatrix v = init.cov.matrix();
  record(0.0, mean, v);

  for (std::size_t step = 1; step <= steps; ++step) {
    const RealVector m1 = a * mean;
    const RealVector m2 = a * (mean + 0.5 * h * m1);
    const RealVector m3 = a * (mean + 0.5 * h * m2);
    const RealVector m4 = a * (mean + h * m3);
    mean += (h / 6.0) * (m1 + 2.0 * m2 + 2.0 * m3 + m4);

    const RealMatrix k1 = cov_rate(v);
    const RealMatrix k2 = cov_rate(v + 0.5 * h * k1);
    const RealMatrix k3 = cov_rate(v + 0.5 * h * k2);
    const RealMatrix k4 = cov_rate(v + h * k3);
    v = numkit::symmetrized(v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));

    const double t = h * static_cast<double>(step);
    if (!v.allFinite() || !mean.allFinite() ||
        numkit::SymmetricSpectrum(v).values.maxCoeff() > options.divergence_bound) {
      std::ostringstream os;
      os << "covariance diverged at t=" << t;
      throw Error(ErrorCode::UnstableStep, os.str());
    }
    if (step % stride == 0 || step == steps) record(t, mean, v);
  }
  return out;
}

}  // namespace puregauss
