#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "oscsync/coupling.hpp"
#include "oscsync/delay.hpp"
#include "oscsync/dynamics.hpp"
#include "oscsync/graph.hpp"
#include "oscsync/stability.hpp"

namespace oscsync {

/// Shared knobs. Times are in seconds; zero selects the per-experiment default.
struct ExperimentConfig {
  std::uint64_t seed = 0;
  std::size_t trials = 100;
  double horizon = 0.0;
  double step = 0.0;
  double sync_threshold = 0.99;
  std::size_t threads = 1;
};

/// r > threshold at every recorded sample in the final 10% of the run.
bool sustained_sync(const std::vector<double>& times, const std::vector<double>& r, double threshold);

// ---------------------------------------------------------------- basin_mc

struct BasinOptions {
  double epsilon = 1.0;
  /// Starting points: uniform on the torus, or the splay state plus
  /// uniform noise of this half-width when positive.
  double splay_jitter = 0.0;
};

struct BasinResult {
  double fraction = 0.0;
  std::size_t synced = 0;
  std::size_t trials = 0;
  /// b <= pi/(N-1) for an F_b coupling (false for other kinds).
  bool hypothesis_holds = false;
  std::vector<double> final_r;
};

/// Defaults: T = 500/(eps N), h = 0.01/(eps N). Throws Error{Disconnected}.
BasinResult basin_mc(const Graph& g, const CouplingFunction& f, const ExperimentConfig& cfg,
                     const BasinOptions& opts = {});

// ------------------------------------------------------------ meanfield

struct MeanfieldOptions {
  double eps_bar = 1.0;  // eps = eps_bar / N
  std::size_t grid = 4096;
  std::size_t record_every = 1;
};

struct MeanfieldResult {
  std::vector<double> times;
  std::vector<double> r_lagged;
  std::vector<double> r_convolved;
  double sup_distance = 0.0;
};

/// Complete graph on N vertices. Lags psi_ij ~ g once per pair; the
/// comparison system uses H = f * g without lags. Both start from the same
/// uniform random phases. Defaults: T = 30/eps_bar, h = 0.05/eps_bar.
MeanfieldResult meanfield_compare(const CouplingFunction& f, const DelayDistribution& g, std::size_t n,
                                  const ExperimentConfig& cfg, const MeanfieldOptions& opts = {});

struct MeanfieldStudy {
  std::vector<std::size_t> sizes;
  std::vector<std::vector<double>> sup_distance;  // [size][trial]
  std::vector<double> median;
  std::vector<std::vector<double>> final_r_lagged;
  std::vector<std::vector<double>> final_r_convolved;
};

/// meanfield_compare for every size, cfg.trials seeds each (seed of trial t
/// is trial_seed(cfg.seed, t)).
MeanfieldStudy meanfield_study(const CouplingFunction& f, const DelayDistribution& g,
                               const std::vector<std::size_t>& sizes, const ExperimentConfig& cfg,
                               const MeanfieldOptions& opts = {});

// ------------------------------------------------------------- clusters

enum class Engine { Pulse, Phase };
enum class ClusterOutcome { ClustersPersist, InPhase };
const char* to_string(ClusterOutcome o);
const char* to_string(Engine e);

struct ClusterOptions {
  Engine engine = Engine::Pulse;
  double eps_bar = 1.0;  // eps = eps_bar / N
  double omega = kTwoPi;
  double jitter = 0.01;
  std::size_t grid = 4096;
};

struct ClusterDiagnostics {
  double h_slope_0 = 0.0;
  double h_slope_2pi_3 = 0.0;
  double h_slope_4pi_3 = 0.0;
  StabilityVerdict verdict;  // H-system, three-cluster state
  bool h_is_odd = false;
};

/// Diagnostics of the H-system three-cluster state on the complete graph.
ClusterDiagnostics cluster_diagnostics(const CouplingFunction& f, const DelayDistribution& g, std::size_t n,
                                       std::size_t grid = 4096);

struct ClusterRun {
  ClusterOutcome outcome = ClusterOutcome::ClustersPersist;
  double final_r = 0.0;
  std::vector<double> times;
  std::vector<double> r;
};

struct ClusterResult {
  ClusterRun run;
  ClusterDiagnostics diagnostics;
  Engine engine = Engine::Pulse;
};

/// One trial from the three-cluster state plus jitter with lags drawn from
/// g, seeded by `seed`. Defaults: T = 200/eps_bar, h = 0.05/eps_bar.
/// Throws Error{BadN} unless N is a positive multiple of 3.
ClusterRun cluster_trial(const CouplingFunction& f, const DelayDistribution& g, std::size_t n, std::uint64_t seed,
                         const ExperimentConfig& cfg, const ClusterOptions& opts = {});

ClusterResult cluster_destab(const CouplingFunction& f, const DelayDistribution& g, std::size_t n,
                             const ExperimentConfig& cfg, const ClusterOptions& opts = {});

// ---------------------------------------------------------------- sweep

/// Lag law of the sweep: gaussian(mu, sigma), point(mu) at sigma = 0.
DelayDistribution sweep_delay(double mu, double sigma);

struct SweepResult {
  std::vector<std::size_t> sizes;
  std::vector<double> sigmas;
  std::vector<std::vector<double>> probability;  // [size][sigma]
  std::vector<std::vector<std::size_t>> successes;
  std::size_t trials = 0;
  /// Smallest sigma with an Unstable H-system three-cluster state, found by
  /// bisection to 1e-6; empty if the sigma range does not bracket it.
  std::optional<double> sigma_star;
};

SweepResult sync_probability_sweep(const CouplingFunction& f, double mu, const std::vector<std::size_t>& sizes,
                                   const std::vector<double>& sigmas, const ExperimentConfig& cfg,
                                   const ClusterOptions& opts = {});

/// Bisection for the critical sigma on [lo, min(hi, mu/4)].
std::optional<double> critical_sigma(const CouplingFunction& f, double mu, double lo, double hi,
                                     std::size_t grid = 4096, double tol = 1e-6);

}  // namespace oscsync
