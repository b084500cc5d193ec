#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "oscsync/dynamics.hpp"

namespace oscsync {

struct EquilibriumReport {
  PhaseVector phi_star;  // canonical: phi_star[0] == 0
  double omega_star = 0.0;
  double residual = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
};

struct NewtonOptions {
  double tol = 1e-12;
  std::size_t max_iterations = 200;
};

/// max_i |omega* - eps * sum_j f_ij(phi_j - phi_i - psi_ij)|.
double residual(const PhaseModel& m, const PhaseVector& phi, double omega_star);

/// Damped Gauss-Newton in the chart phi_0 = 0. omega* is an unknown unless
/// the model has potential form (then omega* = 0). Falls back to a
/// gradient step on |R|^2 when the Newton direction does not descend.
EquilibriumReport find_equilibrium(const PhaseModel& m, const PhaseVector& phi0, const NewtonOptions& opts = {});

/// Complete-graph symmetric state: l_B constellations of m evenly spaced
/// blocks, k_l oscillators per block of constellation l, shifted by delta_l.
struct IsotropySpec {
  std::size_t m = 1;
  std::vector<std::size_t> block_sizes;
  std::vector<double> shifts;  // shifts[0] == 0, all in [0, 2pi/m), distinct

  std::size_t total() const;
  /// Throws Error{BadSpec}.
  void validate() const;
  /// First vertex of constellation l, block j (constellation-major order).
  std::size_t first_vertex(std::size_t l, std::size_t j) const;
};

/// Phases delta_l + 2pi j/m, each repeated k_l times; constellation-major,
/// block-minor vertex order. Throws Error{BadSpec}.
PhaseVector symmetric_equilibrium(const IsotropySpec& spec);

/// Length of the shortest closed arc containing {phi_i : i in S}.
/// Throws Error{EmptySet}.
double arc_diameter(const PhaseVector& phi, std::span<const std::size_t> subset);
double arc_diameter(const PhaseVector& phi);

/// Rotates so that phi_0 = 0, then wraps to [0, 2pi).
PhaseVector canonicalize(const PhaseVector& phi);

/// Componentwise circular distance < tol after canonicalisation.
bool same_equilibrium_class(const PhaseVector& a, const PhaseVector& b, double tol = 1e-8);

/// phi*_k = k pi / 3 on the six-node network.
PhaseVector example4_equilibrium();
/// [e1, pi/3 + e2, 2pi/3 + e3, pi + e1, 4pi/3 + e2, 5pi/3 + e3].
PhaseVector example4_family(double e1, double e2, double e3);
/// The same family in the chart e1 = 0: lambda1 = e2 - e1, lambda2 = e3 - e1.
PhaseVector example4_family2(double lambda1, double lambda2);

}  // namespace oscsync
