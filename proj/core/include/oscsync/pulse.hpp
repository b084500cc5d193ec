#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "oscsync/coupling.hpp"
#include "oscsync/dynamics.hpp"
#include "oscsync/graph.hpp"

namespace oscsync {

/// Pulse-coupled oscillators: each phase advances at rate omega; when
/// theta_j crosses 0 it fires, and after delay eta_ij the pulse arrives at
/// neighbour i, which jumps by eps * kappa_ij(theta_i).
struct PulseModel {
  Graph graph;
  std::vector<CouplingFunction> kappa;  // one per edge
  std::vector<double> delays;           // one per edge, seconds >= 0
  double epsilon = 1e-2;
  double omega = kTwoPi;
  /// A jump that carries theta past 2pi fires immediately.
  bool jump_fires = true;
  std::uint64_t max_events = 500'000'000;

  static PulseModel uniform(Graph g, CouplingFunction kappa, double epsilon, double omega = kTwoPi);
  static PulseModel delayed(Graph g, CouplingFunction kappa, std::vector<double> delays, double epsilon,
                            double omega = kTwoPi);

  std::size_t size() const { return graph.num_vertices(); }
  /// Throws Error{BadShape}: sizes, negative delays, eps * max|kappa| >= 2pi.
  void validate() const;
};

struct Firing {
  double t;
  std::size_t oscillator;
};

struct PulseRun {
  Trajectory trajectory;  // absolute phases in [0, 2pi) at the sample times
  std::vector<Firing> firings;
  std::uint64_t events = 0;
};

/// Event-driven simulation over [0, T], sampling phases every `sample_dt`
/// seconds. Ties are resolved by (time, arrival before firing, oscillator,
/// source). Throws Error{EventOverflow}.
PulseRun simulate_pulse(const PulseModel& m, const PhaseVector& theta0, double T, double sample_dt);

/// The phase model with f_e = f_from_kappa(kappa_e) and psi_e = omega * eta_e.
PhaseModel averaged_phase_model(const PulseModel& m);

}  // namespace oscsync
