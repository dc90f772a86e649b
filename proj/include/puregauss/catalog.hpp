#pragma once

// Named systems and target states. Rates and pump strengths are plain numbers;
// any physical unit (e.g. MHz) is a label only.

#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "puregauss/engineer.hpp"
#include "puregauss/model.hpp"

namespace puregauss::catalog {

/// Single-mode OPO with the Hamiltonian matrix written in the form
/// G = [[Re eps, Im eps], [Im eps, -Re eps]] and C = sqrt(kappa/2) (1, i).
/// Drift eigenvalues are -kappa/2 +- |eps|. Throws NonPositiveRate.
GaussianDynamics single_opo(double kappa, Complex eps);

/// Single-mode OPO cavity with H = i eps (a^dagger^2 - a^2) / 4, real eps,
/// and L = sqrt(kappa) a: G = (eps/2) [[0, 1], [1, 0]]. This is the form the
/// cascaded setup is assembled from; drift eigenvalues are -(kappa +- eps)/2.
GaussianDynamics opo_cavity(double kappa, double eps);

/// Series (cascade) product of two single-channel systems: the output of
/// `first` drives `second`. Modes of `first` come before modes of `second`.
///   H = H1 + H2 + (L2^dagger L1 - L1^dagger L2) / 2i,   L = L1 + L2.
GaussianDynamics cascade(const GaussianDynamics& first,
                         const GaussianDynamics& second);

/// Two OPO cavities in cascade, n = 2, m = 1.
GaussianDynamics cascaded_opos(double kappa, double eps1, double eps2);

/// Canonical CV cluster state Z = X + i e^{-2r} I. Throws AsymmetricMatrix.
PureStateSpec cv_cluster(const RealMatrix& adjacency, double r);

/// H-graph state Z = i e^{-2 alpha W}. Throws AsymmetricMatrix.
PureStateSpec h_graph(const RealMatrix& w, double alpha);

/// Two-mode squeezed state, the H-graph state of W = [[0, 1], [1, 0]].
PureStateSpec two_mode_squeezed(double alpha);

/// 0/1 adjacency of an open chain and of a ring of n nodes.
RealMatrix chain_adjacency(std::size_t n);
RealMatrix ring_adjacency(std::size_t n);

/// cv_cluster on the open chain of n >= 2 nodes. Throws TooFewModes.
PureStateSpec harmonic_chain(std::size_t n, double r);

// ---------------------------------------------------------------------------
// Registry used by the command-line front end.

enum class EntryKind { System, StateSpec };

struct ParameterInfo {
  std::string name;
  double default_value;
  std::string description;
};

using Payload = std::variant<GaussianDynamics, PureStateSpec>;
using ParameterValues = std::map<std::string, double>;

struct CatalogEntry {
  std::string name;
  EntryKind kind;
  std::string summary;
  std::vector<ParameterInfo> parameters;
  std::function<Payload(const ParameterValues&)> build;

  /// Fills defaults, rejects unknown names, then builds the payload.
  Payload instantiate(const ParameterValues& overrides) const;
};

const std::vector<CatalogEntry>& entries();

/// Throws UnknownEntry.
const CatalogEntry& find(const std::string& name);

}  // namespace puregauss::catalog
