#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "oscsync/coupling.hpp"
#include "oscsync/dynamics.hpp"
#include "oscsync/equilibria.hpp"
#include "oscsync/graph.hpp"

namespace oscsync {

/// A = -eps B diag(w) B^T with w_e = f_e'(phi_head - phi_tail - psi_e).
struct Linearization {
  Graph graph;
  Eigen::MatrixXd matrix;
  Eigen::VectorXd edge_weights;
  double epsilon = 1.0;
  /// False for lagged or non-odd models, where A is not the Jacobian of a
  /// gradient flow and classify() refuses it.
  bool symmetric_model = true;
};

Linearization linearize(const PhaseModel& m, const PhaseVector& phi_star);

enum class StabilityClass { Stable, Unstable, Marginal };
const char* to_string(StabilityClass c);

struct CutCertificate {
  Partition partition;
  double value = 0.0;
};

struct StabilityVerdict {
  StabilityClass cls = StabilityClass::Marginal;
  double max_nonflow_eigenvalue = 0.0;
  Eigen::VectorXd nonflow_eigenvalues;  // ascending, the 1 direction deflated
  double tol = 0.0;
  std::optional<CutCertificate> certificate;
};

/// Spectrum of A restricted to the complement of 1. Unstable if the largest
/// eigenvalue exceeds tol, Stable if it is below -tol, Marginal otherwise.
/// tol < 0 selects 1e-9 |A|_F. Throws Error{PreconditionFailed} for lagged
/// or non-odd models and for N < 2.
StabilityVerdict classify(const Linearization& lin, double tol = -1.0);

/// Sum of edge weights over the cut edges; equals -(1/eps) x_P^T A x_P.
/// Throws Error{EmptySide}.
double cut_sum(const Linearization& lin, const Partition& p);

struct CutScanOptions {
  enum class Mode { Exhaustive, Heuristic } mode = Mode::Exhaustive;
  std::size_t restarts = 32;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

/// Minimum cut sum. Exhaustive requires N <= 25 (Error{TooLarge}); ties go
/// to the smallest mask. Heuristic runs best-improvement single-vertex flips
/// from seeded random partitions and returns the best local minimum found.
CutCertificate min_cut_scan(const Linearization& lin, const CutScanOptions& opts = {});

/// C*(lambda1, lambda2) on a grid x grid lattice over [-pi, pi]^2 for the
/// six-node network with the given coupling; row index runs over lambda1.
Eigen::MatrixXd min_cut_surface(const CouplingFunction& f, std::size_t grid, std::size_t threads = 1);

/// g_m(delta) = sum_{j<m} f(2 pi j/m + delta), and the same sum of f'.
double g_m(const CouplingFunction& f, std::size_t m, double delta);
double g_m_deriv(const CouplingFunction& f, std::size_t m, double delta);

struct StructureReport {
  bool odd = false;
  bool even_about_half_pi = false;
  bool concave_on_0_pi = false;
  bool fprime_concave_on_half_band = false;
  /// f'(pi/m) >= f'(0)/2 for m = 4..64; only evaluated when both concavity
  /// flags hold, true otherwise.
  bool half_slope_bound = true;
};

StructureReport check_structure(const CouplingFunction& f, std::size_t grid = 2048);

/// Sign pattern of the family F_b on a grid: f' > 0 on (0,b) and
/// (2pi-b, 2pi), f' < 0 on (b, 2pi-b), f odd.
bool in_family(const CouplingFunction& f, double b, std::size_t grid = 2048);

struct EvenCertificate {
  Partition partition;
  double value = 0.0;
  double expected = 0.0;  // -k_0^2 f'(0)
};

/// Cut isolating block 0 of constellation 0 in the complete-graph symmetric
/// state. Requires m even and f odd, even about pi/2, in F_{pi/2}
/// (Error{PreconditionFailed}).
EvenCertificate even_m_certificate(const IsotropySpec& spec, const CouplingFunction& f);

struct PairBound {
  std::size_t l1;
  std::size_t l2;
  double delta;  // |delta_l2 - delta_l1|
  double value;  // 2g_m'(d) - f'(d + 2pi/m) - 2f'(d) - f'(d - 2pi/m)
};

struct OddCertificate {
  Partition partition;
  double value = 0.0;
  std::vector<PairBound> pairs;
  double grid_max = 0.0;   // max of the pair expression over d in [0, 2pi/m]
  double terminal = 0.0;   // f'(0) - 2 f'(pi/m)
};

/// The pair expression at separation d.
double odd_pair_bound(const CouplingFunction& f, std::size_t m, double d);

/// Cut separating two consecutive blocks of every constellation from the
/// rest. Requires m odd >= 7 and f concave on [0,pi], f' concave on
/// [-pi/2, pi/2], f in F_{pi/2} (Error{PreconditionFailed}).
OddCertificate odd_m_certificate(const IsotropySpec& spec, const CouplingFunction& f, std::size_t grid = 257);

}  // namespace oscsync
