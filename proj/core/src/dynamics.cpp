#include "oscsync/dynamics.hpp"

#include <cmath>
#include <complex>
#include <string>

namespace oscsync {

PhaseModel PhaseModel::uniform(Graph g, CouplingFunction f, double epsilon, double omega) {
  const std::size_t e = g.num_edges();
  return lagged(std::move(g), std::move(f), std::vector<double>(e, 0.0), epsilon, omega);
}

PhaseModel PhaseModel::lagged(Graph g, CouplingFunction f, std::vector<double> lags, double epsilon, double omega) {
  PhaseModel m;
  m.coupling.assign(g.num_edges(), f);
  m.graph = std::move(g);
  m.lags = std::move(lags);
  m.epsilon = epsilon;
  m.omega = omega;
  m.validate();
  return m;
}

bool PhaseModel::has_lags() const {
  for (double l : lags)
    if (l != 0.0) return true;
  return false;
}

bool PhaseModel::potential_form() const {
  if (has_lags()) return false;
  for (const auto& f : coupling)
    if (!f.is_odd()) return false;
  return true;
}

void PhaseModel::validate() const {
  if (coupling.size() != graph.num_edges() || lags.size() != graph.num_edges()) {
    throw Error(ErrorCode::BadShape, "one coupling and one lag per edge required");
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw Error(ErrorCode::BadShape, "epsilon must be positive");
  for (double l : lags)
    if (!(l >= 0.0) || !std::isfinite(l)) throw Error(ErrorCode::BadShape, "lags must be finite and >= 0");
}

void phase_rhs(const PhaseModel& m, const PhaseVector& phi, PhaseVector& out) {
  out.setZero(phi.size());
  const auto edges = m.graph.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const std::size_t i = edges[e].tail;
    const std::size_t j = edges[e].head;
    const double d = phi[j] - phi[i];
    const double psi = m.lags[e];
    out[i] += m.coupling[e].eval(d - psi);
    out[j] += m.coupling[e].eval(-d - psi);
  }
  out *= m.epsilon;
}

PhaseVector phase_rhs(const PhaseModel& m, const PhaseVector& phi) {
  PhaseVector out;
  phase_rhs(m, phi, out);
  return out;
}

Trajectory integrate(const PhaseModel& m, const PhaseVector& phi0, double h, double T, const IntegrateOptions& opts) {
  if (!(h > 0.0) || !(T >= h)) throw Error(ErrorCode::BadShape, "need h > 0 and T >= h");
  if (static_cast<std::size_t>(phi0.size()) != m.size()) throw Error(ErrorCode::BadShape, "phase vector size mismatch");
  const bool with_v = opts.record_potential && m.potential_form();
  const std::size_t every = std::max<std::size_t>(1, opts.record_every);
  const auto steps = static_cast<std::size_t>(std::ceil(T / h - 1e-9));

  Trajectory tr;
  tr.times.reserve(steps / every + 2);
  tr.states.reserve(steps / every + 2);
  PhaseVector x = phi0;
  auto record = [&](double t) {
    tr.times.push_back(t);
    tr.states.push_back(wrap_phases(x));
    if (with_v) tr.potential.push_back(potential(m, x));
  };
  record(0.0);

  const std::size_t n = m.size();
  PhaseVector k1(n), k2(n), k3(n), k4(n), tmp(n);
  for (std::size_t s = 1; s <= steps; ++s) {
    const double t0 = static_cast<double>(s - 1) * h;
    const double t1 = s == steps ? T : static_cast<double>(s) * h;
    const double dt = t1 - t0;
    phase_rhs(m, x, k1);
    tmp = x + 0.5 * dt * k1;
    phase_rhs(m, tmp, k2);
    tmp = x + 0.5 * dt * k2;
    phase_rhs(m, tmp, k3);
    tmp = x + dt * k3;
    phase_rhs(m, tmp, k4);
    x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!x.allFinite()) throw Error(ErrorCode::NonFinite, "state became non-finite at t = " + std::to_string(t1));
    // Keep the unwrapped state bounded; the dynamics only sees differences mod 2pi.
    if (s % 64 == 0) x = wrap_phases(x);
    if (s % every == 0 || s == steps) record(t1);
  }
  return tr;
}

double potential(const PhaseModel& m, const PhaseVector& phi) {
  if (!m.potential_form()) throw Error(ErrorCode::NotPotentialForm, "model has lags or non-odd couplings");
  double v = 0.0;
  const auto edges = m.graph.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    v += m.coupling[e].primitive(phi[edges[e].head] - phi[edges[e].tail]);
  }
  return v;
}

OrderParameter order_parameter(const PhaseVector& phi) {
  if (phi.size() == 0) throw Error(ErrorCode::BadShape, "order parameter of an empty vector");
  std::complex<double> z{0.0, 0.0};
  for (Eigen::Index i = 0; i < phi.size(); ++i) z += std::polar(1.0, phi[i]);
  z /= static_cast<double>(phi.size());
  return {std::abs(z), wrap_phase(std::arg(z))};
}

}  // namespace oscsync
