#include "puregauss/catalog.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "puregauss/error.hpp"

namespace puregauss::catalog {

namespace {

void require_rate(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    std::ostringstream os;
    os << "kappa must be a positive rate, got " << kappa;
    throw Error(ErrorCode::NonPositiveRate, os.str());
  }
}

// Maps a phase-space index of a `block_modes`-mode subsystem that starts at
// mode `offset` into a system of `total` modes.
Eigen::Index embed_index(Eigen::Index idx, Eigen::Index block_modes,
                         Eigen::Index offset, Eigen::Index total) {
  return idx < block_modes ? offset + idx : total + offset + (idx - block_modes);
}

RealMatrix embed(const RealMatrix& g, Eigen::Index offset, Eigen::Index total) {
  const Eigen::Index k = g.rows() / 2;
  RealMatrix out = RealMatrix::Zero(2 * total, 2 * total);
  for (Eigen::Index r = 0; r < g.rows(); ++r) {
    for (Eigen::Index c = 0; c < g.cols(); ++c) {
      out(embed_index(r, k, offset, total), embed_index(c, k, offset, total)) =
          g(r, c);
    }
  }
  return out;
}

ComplexVector embed(const ComplexVector& v, Eigen::Index offset,
                    Eigen::Index total) {
  const Eigen::Index k = v.size() / 2;
  ComplexVector out = ComplexVector::Zero(2 * total);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out(embed_index(i, k, offset, total)) = v(i);
  }
  return out;
}

std::size_t mode_count(double value, std::size_t minimum) {
  if (!(value >= static_cast<double>(minimum)) || value != std::floor(value) ||
      value > 64) {
    std::ostringstream os;
    os << "n must be an integer in [" << minimum << ", 64], got " << value;
    throw Error(ErrorCode::TooFewModes, os.str());
  }
  return static_cast<std::size_t>(value);
}

}  // namespace

GaussianDynamics single_opo(double kappa, Complex eps) {
  require_rate(kappa);
  RealMatrix g(2, 2);
  g << eps.real(), eps.imag(), eps.imag(), -eps.real();
  ComplexMatrix c(1, 2);
  c << Complex(1.0, 0.0), Complex(0.0, 1.0);
  return GaussianDynamics(g, std::sqrt(kappa / 2.0) * c);
}

GaussianDynamics opo_cavity(double kappa, double eps) {
  require_rate(kappa);
  RealMatrix g(2, 2);
  g << 0.0, eps / 2.0, eps / 2.0, 0.0;
  ComplexMatrix c(1, 2);
  c << Complex(1.0, 0.0), Complex(0.0, 1.0);
  return GaussianDynamics(g, std::sqrt(kappa / 2.0) * c);
}

GaussianDynamics cascade(const GaussianDynamics& first,
                         const GaussianDynamics& second) {
  if (first.channels() != 1 || second.channels() != 1) {
    throw Error(ErrorCode::InvalidArgument,
                "cascade composes single-channel systems only");
  }
  const auto n1 = static_cast<Eigen::Index>(first.modes());
  const auto total = n1 + static_cast<Eigen::Index>(second.modes());

  const ComplexVector c1 = embed(ComplexVector(first.C().row(0).transpose()), 0, total);
  const ComplexVector c2 = embed(ComplexVector(second.C().row(0).transpose()), n1, total);

  // (L2^dagger L1 - L1^dagger L2) / 2i = x^T M x / 2i with
  // M = conj(c2) c1^T - conj(c1) c2^T anti-Hermitian; its quadratic part is
  // x^T Im(M) x / 2 and the antisymmetric remainder only shifts energy.
  const ComplexMatrix m =
      c2.conjugate() * c1.transpose() - c1.conjugate() * c2.transpose();
  RealMatrix g = embed(first.G(), 0, total) + embed(second.G(), n1, total) +
                 numkit::symmetrized(m.imag());
  ComplexMatrix c = (c1 + c2).transpose();
  return GaussianDynamics(std::move(g), std::move(c));
}

GaussianDynamics cascaded_opos(double kappa, double eps1, double eps2) {
  return cascade(opo_cavity(kappa, eps1), opo_cavity(kappa, eps2));
}

PureStateSpec cv_cluster(const RealMatrix& adjacency, double r) {
  require_symmetric(adjacency, "X");
  const auto n = adjacency.rows();
  return PureStateSpec(adjacency, std::exp(-2.0 * r) * RealMatrix::Identity(n, n));
}

PureStateSpec h_graph(const RealMatrix& w, double alpha) {
  require_symmetric(w, "W");
  const auto n = w.rows();
  const numkit::SymmetricSpectrum spectrum(w);
  RealMatrix y = spectrum.apply([alpha](double l) { return std::exp(-2.0 * alpha * l); });
  return PureStateSpec(RealMatrix::Zero(n, n), std::move(y));
}

PureStateSpec two_mode_squeezed(double alpha) {
  return h_graph(chain_adjacency(2), alpha);
}

RealMatrix chain_adjacency(std::size_t n) {
  const auto size = static_cast<Eigen::Index>(n);
  RealMatrix x = RealMatrix::Zero(size, size);
  for (Eigen::Index i = 0; i + 1 < size; ++i) {
    x(i, i + 1) = 1.0;
    x(i + 1, i) = 1.0;
  }
  return x;
}

RealMatrix ring_adjacency(std::size_t n) {
  RealMatrix x = chain_adjacency(n);
  const auto size = static_cast<Eigen::Index>(n);
  if (size >= 3) {
    x(0, size - 1) = 1.0;
    x(size - 1, 0) = 1.0;
  }
  return x;
}

PureStateSpec harmonic_chain(std::size_t n, double r) {
  if (n < 2) {
    throw Error(ErrorCode::TooFewModes,
                "a harmonic chain needs at least 2 modes, got " + std::to_string(n));
  }
  return cv_cluster(chain_adjacency(n), r);
}

Payload CatalogEntry::instantiate(const ParameterValues& overrides) const {
  ParameterValues values;
  for (const ParameterInfo& p : parameters) values[p.name] = p.default_value;
  for (const auto& [key, value] : overrides) {
    if (!values.count(key)) {
      throw Error(ErrorCode::InvalidArgument,
                  "entry '" + name + "' has no parameter '" + key + "'");
    }
    values[key] = value;
  }
  return build(values);
}

const std::vector<CatalogEntry>& entries() {
  static const std::vector<CatalogEntry> all = [] {
    const double unset = std::numeric_limits<double>::quiet_NaN();
    std::vector<CatalogEntry> list;
    list.push_back(
        {"single_opo",
         EntryKind::System,
         "ideal single-mode OPO damped into vacuum",
         {{"kappa", 6.0, "cavity damping rate (> 0)"},
          {"eps", 0.0, "real part of the pump"},
          {"eps_im", 0.0, "imaginary part of the pump"}},
         [](const ParameterValues& v) -> Payload {
           return single_opo(v.at("kappa"), Complex(v.at("eps"), v.at("eps_im")));
         }});
    list.push_back(
        {"cascaded_opos",
         EntryKind::System,
         "two OPOs connected by a unidirectional field",
         {{"kappa", 6.0, "damping rate of both cavities (> 0)"},
          {"eps", 4.8, "pump of the first OPO"},
          {"eps2", unset, "pump of the second OPO (default: -eps)"}},
         [](const ParameterValues& v) -> Payload {
           const double eps = v.at("eps");
           const double eps2 = std::isnan(v.at("eps2")) ? -eps : v.at("eps2");
           return cascaded_opos(v.at("kappa"), eps, eps2);
         }});
    list.push_back(
        {"cv_cluster",
         EntryKind::StateSpec,
         "canonical CV cluster state on a ring graph, Z = X + i e^{-2r} I",
         {{"n", 4.0, "number of modes (>= 3)"},
          {"r", 1.0, "squeezing parameter"}},
         [](const ParameterValues& v) -> Payload {
           return cv_cluster(ring_adjacency(mode_count(v.at("n"), 3)), v.at("r"));
         }});
    list.push_back(
        {"h_graph",
         EntryKind::StateSpec,
         "H-graph state on an open chain graph W, Z = i e^{-2 alpha W}",
         {{"n", 3.0, "number of modes (>= 2)"},
          {"alpha", 0.5, "squeezing time alpha = 2 kappa t"}},
         [](const ParameterValues& v) -> Payload {
           return h_graph(chain_adjacency(mode_count(v.at("n"), 2)), v.at("alpha"));
         }});
    list.push_back(
        {"harmonic_chain",
         EntryKind::StateSpec,
         "1-D equally weighted harmonic chain cluster state",
         {{"n", 4.0, "number of modes (>= 2)"},
          {"r", 1.0, "squeezing parameter"}},
         [](const ParameterValues& v) -> Payload {
           return harmonic_chain(mode_count(v.at("n"), 2), v.at("r"));
         }});
    list.push_back(
        {"two_mode_squeezed",
         EntryKind::StateSpec,
         "two-mode squeezed (EPR-like) state",
         {{"alpha", 0.5, "squeezing parameter"}},
         [](const ParameterValues& v) -> Payload {
           return two_mode_squeezed(v.at("alpha"));
         }});
    return list;
  }();
  return all;
}

const CatalogEntry& find(const std::string& name) {
  for (const CatalogEntry& e : entries()) {
    if (e.name == name) return e;
  }
  throw Error(ErrorCode::UnknownEntry, "no catalog entry named '" + name + "'");
}

}  // namespace puregauss::catalog
