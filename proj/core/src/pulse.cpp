#include "oscsync/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>
#include <tuple>

namespace oscsync {

PulseModel PulseModel::uniform(Graph g, CouplingFunction kappa, double epsilon, double omega) {
  const std::size_t e = g.num_edges();
  return delayed(std::move(g), std::move(kappa), std::vector<double>(e, 0.0), epsilon, omega);
}

PulseModel PulseModel::delayed(Graph g, CouplingFunction kappa, std::vector<double> delays, double epsilon,
                               double omega) {
  PulseModel m;
  m.kappa.assign(g.num_edges(), kappa);
  m.graph = std::move(g);
  m.delays = std::move(delays);
  m.epsilon = epsilon;
  m.omega = omega;
  m.validate();
  return m;
}

void PulseModel::validate() const {
  if (kappa.size() != graph.num_edges() || delays.size() != graph.num_edges()) {
    throw Error(ErrorCode::BadShape, "one response and one delay per edge required");
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw Error(ErrorCode::BadShape, "epsilon must be positive");
  if (!(omega > 0.0) || !std::isfinite(omega)) throw Error(ErrorCode::BadShape, "omega must be positive");
  for (double d : delays)
    if (!(d >= 0.0) || !std::isfinite(d)) throw Error(ErrorCode::BadShape, "delays must be finite and >= 0");
  for (std::size_t e = 0; e < kappa.size(); ++e) {
    if (e > 0 && kappa[e].same_representation(kappa[e - 1])) continue;
    double peak = 0.0;
    for (double v : kappa[e].sample(1024)) peak = std::max(peak, std::abs(v));
    if (epsilon * peak >= kTwoPi) throw Error(ErrorCode::BadShape, "jump eps*|kappa| must stay below 2pi");
  }
}

namespace {

struct Event {
  double t;
  int type;  // 0 arrival, 1 firing
  std::size_t osc;
  std::size_t src;
  std::size_t edge;
  std::uint64_t version;

  auto key() const { return std::tie(t, type, osc, src); }
};

struct Later {
  bool operator()(const Event& a, const Event& b) const { return a.key() > b.key(); }
};

}  // namespace

PulseRun simulate_pulse(const PulseModel& m, const PhaseVector& theta0, double T, double sample_dt) {
  m.validate();
  const std::size_t n = m.size();
  if (static_cast<std::size_t>(theta0.size()) != n) throw Error(ErrorCode::BadShape, "phase vector size mismatch");
  if (!(T > 0.0) || !(sample_dt > 0.0)) throw Error(ErrorCode::BadShape, "need T > 0 and sample_dt > 0");

  const double period = kTwoPi / m.omega;
  const double t_end = T * (1.0 + 1e-12);
  std::vector<double> tau(n);
  std::vector<std::uint64_t> version(n, 0);
  std::priority_queue<Event, std::vector<Event>, Later> queue;
  for (std::size_t i = 0; i < n; ++i) {
    tau[i] = -wrap_phase(theta0[i]) / m.omega;
    queue.push({tau[i] + period, 1, i, i, 0, 0});
  }

  PulseRun run;
  const auto samples = static_cast<std::size_t>(std::floor(T / sample_dt + 1e-9));
  std::size_t next_sample = 0;
  auto record_until = [&](double t, bool inclusive) {
    while (next_sample <= samples) {
      const double ts = static_cast<double>(next_sample) * sample_dt;
      if (inclusive ? ts > t : ts >= t) break;
      PhaseVector th(n);
      for (std::size_t i = 0; i < n; ++i) th[i] = wrap_phase(m.omega * (ts - tau[i]));
      run.trajectory.times.push_back(ts);
      run.trajectory.states.push_back(std::move(th));
      ++next_sample;
    }
  };

  auto fire = [&](std::size_t i, double t) {
    run.firings.push_back({t, i});
    for (std::size_t e : m.graph.incident(i)) {
      const Edge& ed = m.graph.edge(e);
      const std::size_t k = ed.tail == i ? ed.head : ed.tail;
      queue.push({t + m.delays[e], 0, k, i, e, 0});
    }
  };

  while (!queue.empty() && queue.top().t <= t_end) {
    const Event ev = queue.top();
    queue.pop();
    record_until(ev.t, false);
    if (ev.type == 1) {
      if (ev.version != version[ev.osc]) continue;
      if (++run.events > m.max_events) throw Error(ErrorCode::EventOverflow, "event cap reached");
      tau[ev.osc] = ev.t;
      queue.push({ev.t + period, 1, ev.osc, ev.osc, 0, version[ev.osc]});
      fire(ev.osc, ev.t);
      continue;
    }
    if (++run.events > m.max_events) throw Error(ErrorCode::EventOverflow, "event cap reached");
    const std::size_t i = ev.osc;
    const double theta = std::clamp(m.omega * (ev.t - tau[i]), 0.0, kTwoPi);
    double next = theta + m.epsilon * m.kappa[ev.edge].eval(theta);
    if (next >= kTwoPi) {
      next -= kTwoPi;
      if (m.jump_fires) fire(i, ev.t);
    }
    // A backward jump past zero would undo a firing; it stops at zero instead.
    next = std::max(next, 0.0);
    tau[i] = ev.t - next / m.omega;
    ++version[i];
    queue.push({tau[i] + period, 1, i, i, 0, version[i]});
  }
  record_until(T, true);
  return run;
}

PhaseModel averaged_phase_model(const PulseModel& m) {
  m.validate();
  PhaseModel p;
  p.graph = m.graph;
  p.epsilon = m.epsilon;
  p.omega = m.omega;
  p.coupling.reserve(m.kappa.size());
  p.lags.reserve(m.delays.size());
  for (std::size_t e = 0; e < m.kappa.size(); ++e) {
    if (e > 0 && m.kappa[e].same_representation(m.kappa[e - 1])) {
      p.coupling.push_back(p.coupling.back());
    } else {
      p.coupling.push_back(f_from_kappa(PulseResponse{m.kappa[e], m.omega}));
    }
  }
  for (double d : m.delays) p.lags.push_back(m.omega * d);
  p.validate();
  return p;
}

}  // namespace oscsync
