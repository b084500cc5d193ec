#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "oscsync/coupling.hpp"
#include "oscsync/graph.hpp"

namespace oscsync {

/// Weakly coupled phase model in the co-rotating frame:
///   phi_i' = eps * sum_{ij in E} f_ij(phi_j - phi_i - psi_ij).
/// Couplings and lags are stored per (undirected) edge, so f_ij = f_ji and
/// psi_ij = psi_ji hold by construction.
struct PhaseModel {
  Graph graph;
  std::vector<CouplingFunction> coupling;  // one per edge
  std::vector<double> lags;                // one per edge, radians >= 0
  double epsilon = 1.0;
  double omega = kTwoPi;

  /// Same f on every edge, zero lags.
  static PhaseModel uniform(Graph g, CouplingFunction f, double epsilon, double omega = kTwoPi);
  /// Same f on every edge, per-edge lags.
  static PhaseModel lagged(Graph g, CouplingFunction f, std::vector<double> lags, double epsilon,
                           double omega = kTwoPi);

  std::size_t size() const { return graph.num_vertices(); }
  bool has_lags() const;
  /// Zero lags and odd couplings: the dynamics is a gradient flow.
  bool potential_form() const;
  /// Throws Error{BadShape} on inconsistent sizes, negative lags or eps <= 0.
  void validate() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<PhaseVector> states;
  std::vector<double> potential;  // empty unless the model has potential form
};

struct IntegrateOptions {
  std::size_t record_every = 1;  // keep every k-th step (the final step is always kept)
  bool record_potential = true;
};

/// Right-hand side of the phase model (no omega term).
PhaseVector phase_rhs(const PhaseModel& m, const PhaseVector& phi);
void phase_rhs(const PhaseModel& m, const PhaseVector& phi, PhaseVector& out);

/// Fixed-step classical RK4 from phi0 over [0, T]. The last step is shortened
/// to land on T. States are wrapped to [0, 2pi). Throws Error{NonFinite}.
Trajectory integrate(const PhaseModel& m, const PhaseVector& phi0, double h, double T,
                     const IntegrateOptions& opts = {});

/// V(phi) = sum over edges of int_0^{(B^T phi)_e} f_e. Throws Error{NotPotentialForm}.
double potential(const PhaseModel& m, const PhaseVector& phi);

struct OrderParameter {
  double r;
  double theta;  // in [0, 2pi)
};

OrderParameter order_parameter(const PhaseVector& phi);

}  // namespace oscsync
