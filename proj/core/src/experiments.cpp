#include "oscsync/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "oscsync/equilibria.hpp"
#include "oscsync/parallel.hpp"
#include "oscsync/pulse.hpp"

namespace oscsync {

namespace {

std::vector<double> r_series(const std::vector<PhaseVector>& states) {
  std::vector<double> r;
  r.reserve(states.size());
  for (const auto& s : states) r.push_back(order_parameter(s).r);
  return r;
}

PhaseVector uniform_phases(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  PhaseVector phi(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < phi.size(); ++i) phi[i] = u(rng);
  return phi;
}

std::size_t stride_for(double T, double h, std::size_t samples) {
  const auto steps = static_cast<std::size_t>(std::ceil(T / h - 1e-9));
  return std::max<std::size_t>(1, steps / samples);
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  return v.size() % 2 == 1 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

}  // namespace

bool sustained_sync(const std::vector<double>& times, const std::vector<double>& r, double threshold) {
  if (times.empty() || times.size() != r.size()) return false;
  const double start = times.front() + 0.9 * (times.back() - times.front());
  bool any = false;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] < start) continue;
    any = true;
    if (!(r[k] > threshold)) return false;
  }
  return any;
}

BasinResult basin_mc(const Graph& g, const CouplingFunction& f, const ExperimentConfig& cfg, const BasinOptions& opts) {
  if (!is_connected(g)) throw Error(ErrorCode::Disconnected, "basin experiment needs a connected graph");
  const std::size_t n = g.num_vertices();
  const double en = opts.epsilon * static_cast<double>(n);
  const double T = cfg.horizon > 0.0 ? cfg.horizon : 500.0 / en;
  const double h = cfg.step > 0.0 ? cfg.step : 0.01 / en;
  const PhaseModel model = PhaseModel::uniform(g, f, opts.epsilon);

  BasinResult res;
  res.trials = cfg.trials;
  if (const auto* fb = f.as_fb(); fb != nullptr && n >= 2) {
    res.hypothesis_holds = fb->b <= kPi / static_cast<double>(n - 1) + 1e-12;
  }
  res.final_r.assign(cfg.trials, 0.0);
  std::vector<char> ok(cfg.trials, 0);
  const std::size_t every = stride_for(T, h, 1000);

  parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
    std::mt19937_64 rng(trial_seed(cfg.seed, t));
    PhaseVector phi0;
    if (opts.splay_jitter > 0.0) {
      std::uniform_real_distribution<double> u(-opts.splay_jitter, opts.splay_jitter);
      phi0.resize(static_cast<Eigen::Index>(n));
      for (std::size_t i = 0; i < n; ++i) phi0[static_cast<Eigen::Index>(i)] = kTwoPi * static_cast<double>(i) / static_cast<double>(n) + u(rng);
    } else {
      phi0 = uniform_phases(n, rng);
    }
    const Trajectory tr = integrate(model, phi0, h, T, {every, false});
    const auto r = r_series(tr.states);
    res.final_r[t] = r.back();
    ok[t] = sustained_sync(tr.times, r, cfg.sync_threshold) ? 1 : 0;
  });
  res.synced = static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 1));
  res.fraction = cfg.trials == 0 ? 0.0 : static_cast<double>(res.synced) / static_cast<double>(cfg.trials);
  return res;
}

MeanfieldResult meanfield_compare(const CouplingFunction& f, const DelayDistribution& g, std::size_t n,
                                  const ExperimentConfig& cfg, const MeanfieldOptions& opts) {
  if (n < 2) throw Error(ErrorCode::BadN, "mean-field comparison needs N >= 2");
  const double eps = opts.eps_bar / static_cast<double>(n);
  const double T = cfg.horizon > 0.0 ? cfg.horizon : 30.0 / opts.eps_bar;
  const double h = cfg.step > 0.0 ? cfg.step : 0.05 / opts.eps_bar;
  Graph kn = complete_graph(n);

  std::mt19937_64 rng(cfg.seed);
  std::vector<double> lags(kn.num_edges());
  for (double& l : lags) l = g.sample(rng);
  const PhaseVector phi0 = uniform_phases(n, rng);

  const PhaseModel lagged = PhaseModel::lagged(kn, f, std::move(lags), eps);
  const PhaseModel conv = PhaseModel::uniform(std::move(kn), convolve_delay(f, g, opts.grid), eps);
  const IntegrateOptions io{opts.record_every, false};
  const Trajectory a = integrate(lagged, phi0, h, T, io);
  const Trajectory b = integrate(conv, phi0, h, T, io);

  MeanfieldResult res;
  res.times = a.times;
  res.r_lagged = r_series(a.states);
  res.r_convolved = r_series(b.states);
  for (std::size_t k = 0; k < res.times.size(); ++k) {
    res.sup_distance = std::max(res.sup_distance, std::abs(res.r_lagged[k] - res.r_convolved[k]));
  }
  return res;
}

MeanfieldStudy meanfield_study(const CouplingFunction& f, const DelayDistribution& g,
                               const std::vector<std::size_t>& sizes, const ExperimentConfig& cfg,
                               const MeanfieldOptions& opts) {
  MeanfieldStudy st;
  st.sizes = sizes;
  const std::size_t trials = cfg.trials;
  st.sup_distance.assign(sizes.size(), std::vector<double>(trials, 0.0));
  st.final_r_lagged = st.sup_distance;
  st.final_r_convolved = st.sup_distance;
  parallel_for(sizes.size() * trials, cfg.threads, [&](std::size_t job) {
    const std::size_t s = job / trials;
    const std::size_t t = job % trials;
    ExperimentConfig c = cfg;
    c.seed = trial_seed(cfg.seed, t);
    const auto res = meanfield_compare(f, g, sizes[s], c, opts);
    st.sup_distance[s][t] = res.sup_distance;
    st.final_r_lagged[s][t] = res.r_lagged.back();
    st.final_r_convolved[s][t] = res.r_convolved.back();
  });
  for (const auto& row : st.sup_distance) st.median.push_back(median(row));
  return st;
}

const char* to_string(ClusterOutcome o) {
  return o == ClusterOutcome::InPhase ? "InPhase" : "ClustersPersist";
}

const char* to_string(Engine e) { return e == Engine::Pulse ? "pulse" : "phase"; }

ClusterDiagnostics cluster_diagnostics(const CouplingFunction& f, const DelayDistribution& g, std::size_t n,
                                       std::size_t grid) {
  if (n == 0 || n % 3 != 0) throw Error(ErrorCode::BadN, "cluster experiments need N to be a multiple of 3");
  const CouplingFunction h = convolve_delay(f, g, grid);
  ClusterDiagnostics d;
  d.h_slope_0 = h.deriv(0.0);
  d.h_slope_2pi_3 = h.deriv(kTwoPi / 3.0);
  d.h_slope_4pi_3 = h.deriv(2.0 * kTwoPi / 3.0);
  d.h_is_odd = h.is_odd();
  const PhaseModel model = PhaseModel::uniform(complete_graph(n), h, 1.0 / static_cast<double>(n));
  IsotropySpec spec{3, {n / 3}, {0.0}};
  d.verdict = classify(linearize(model, symmetric_equilibrium(spec)));
  return d;
}

ClusterRun cluster_trial(const CouplingFunction& f, const DelayDistribution& g, std::size_t n, std::uint64_t seed,
                         const ExperimentConfig& cfg, const ClusterOptions& opts) {
  if (n == 0 || n % 3 != 0) throw Error(ErrorCode::BadN, "cluster experiments need N to be a multiple of 3");
  const double eps = opts.eps_bar / static_cast<double>(n);
  const double T = cfg.horizon > 0.0 ? cfg.horizon : 200.0 / opts.eps_bar;
  const double h = cfg.step > 0.0 ? cfg.step : 0.05 / opts.eps_bar;
  Graph kn = complete_graph(n);

  std::mt19937_64 rng(seed);
  std::vector<double> lags(kn.num_edges());
  for (double& l : lags) l = g.sample(rng);
  PhaseVector phi0 = symmetric_equilibrium(IsotropySpec{3, {n / 3}, {0.0}});
  if (opts.jitter > 0.0) {
    std::uniform_real_distribution<double> u(-opts.jitter, opts.jitter);
    for (Eigen::Index i = 0; i < phi0.size(); ++i) phi0[i] += u(rng);
  }

  ClusterRun run;
  if (opts.engine == Engine::Phase) {
    const PhaseModel model = PhaseModel::lagged(std::move(kn), f, std::move(lags), eps, opts.omega);
    const Trajectory tr = integrate(model, phi0, h, T, {stride_for(T, h, 400), false});
    run.times = tr.times;
    run.r = r_series(tr.states);
  } else {
    for (double& l : lags) l /= opts.omega;
    const PulseResponse k = kappa_from_f(f, opts.omega);
    const PulseModel model = PulseModel::delayed(std::move(kn), k.kappa, std::move(lags), eps, opts.omega);
    const PulseRun pr = simulate_pulse(model, wrap_phases(phi0), T, T / 400.0);
    run.times = pr.trajectory.times;
    run.r = r_series(pr.trajectory.states);
  }
  run.final_r = run.r.back();
  run.outcome = sustained_sync(run.times, run.r, cfg.sync_threshold) ? ClusterOutcome::InPhase
                                                                      : ClusterOutcome::ClustersPersist;
  return run;
}

ClusterResult cluster_destab(const CouplingFunction& f, const DelayDistribution& g, std::size_t n,
                             const ExperimentConfig& cfg, const ClusterOptions& opts) {
  ClusterResult res;
  res.engine = opts.engine;
  res.diagnostics = cluster_diagnostics(f, g, n, opts.grid);
  res.run = cluster_trial(f, g, n, cfg.seed, cfg, opts);
  return res;
}

DelayDistribution sweep_delay(double mu, double sigma) {
  return sigma == 0.0 ? DelayDistribution::point(mu) : DelayDistribution::gaussian(mu, sigma);
}

std::optional<double> critical_sigma(const CouplingFunction& f, double mu, double lo, double hi, std::size_t grid,
                                     double tol) {
  // The sign pattern of the three-cluster spectrum does not depend on the
  // cluster size; two oscillators per cluster keep both eigen-directions.
  auto unstable = [&](double s) {
    return cluster_diagnostics(f, sweep_delay(mu, s), 6, grid).verdict.cls == StabilityClass::Unstable;
  };
  // Past mu/4 the truncated law makes H lose its oddness and the
  // three-cluster state has no cut classification.
  hi = std::min(hi, mu / 4.0);
  if (!(hi > lo)) return std::nullopt;
  if (unstable(lo)) return lo;
  if (!unstable(hi)) return std::nullopt;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (unstable(mid) ? hi : lo) = mid;
  }
  return hi;
}

SweepResult sync_probability_sweep(const CouplingFunction& f, double mu, const std::vector<std::size_t>& sizes,
                                   const std::vector<double>& sigmas, const ExperimentConfig& cfg,
                                   const ClusterOptions& opts) {
  for (std::size_t n : sizes)
    if (n == 0 || n % 3 != 0) throw Error(ErrorCode::BadN, "cluster experiments need N to be a multiple of 3");
  SweepResult res;
  res.sizes = sizes;
  res.sigmas = sigmas;
  res.trials = cfg.trials;
  const std::size_t cells = sizes.size() * sigmas.size();
  std::vector<char> ok(cells * cfg.trials, 0);
  std::vector<DelayDistribution> laws;
  laws.reserve(sigmas.size());
  for (double s : sigmas) laws.push_back(sweep_delay(mu, s));

  parallel_for(cells * cfg.trials, cfg.threads, [&](std::size_t job) {
    const std::size_t cell = job / cfg.trials;
    const std::size_t t = job % cfg.trials;
    const std::size_t n = sizes[cell / sigmas.size()];
    const std::uint64_t seed = trial_seed(trial_seed(cfg.seed, cell), t);
    const auto run = cluster_trial(f, laws[cell % sigmas.size()], n, seed, cfg, opts);
    ok[job] = run.outcome == ClusterOutcome::InPhase ? 1 : 0;
  });

  res.probability.assign(sizes.size(), std::vector<double>(sigmas.size(), 0.0));
  res.successes.assign(sizes.size(), std::vector<std::size_t>(sigmas.size(), 0));
  for (std::size_t cell = 0; cell < cells; ++cell) {
    std::size_t s = 0;
    for (std::size_t t = 0; t < cfg.trials; ++t) s += static_cast<std::size_t>(ok[cell * cfg.trials + t]);
    res.successes[cell / sigmas.size()][cell % sigmas.size()] = s;
    res.probability[cell / sigmas.size()][cell % sigmas.size()] =
        cfg.trials == 0 ? 0.0 : static_cast<double>(s) / static_cast<double>(cfg.trials);
  }
  if (!sigmas.empty()) {
    const auto [lo, hi] = std::minmax_element(sigmas.begin(), sigmas.end());
    res.sigma_star = critical_sigma(f, mu, *lo, *hi, opts.grid);
  }
  return res;
}

}  // namespace oscsync
