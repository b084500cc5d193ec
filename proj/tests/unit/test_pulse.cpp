#include <doctest.h>

#include <cmath>
#include <random>

#include <oscsync/delay.hpp>
#include <oscsync/equilibria.hpp>
#include <oscsync/pulse.hpp>

using namespace oscsync;
using doctest::Approx;

namespace {

std::vector<double> firing_times(const PulseRun& run, std::size_t osc) {
  std::vector<double> t;
  for (const auto& f : run.firings)
    if (f.oscillator == osc) t.push_back(f.t);
  return t;
}

double sup_r_distance(const std::vector<PhaseVector>& a, const std::vector<PhaseVector>& b) {
  REQUIRE(a.size() == b.size());
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(order_parameter(a[k]).r - order_parameter(b[k]).r));
  return d;
}

}  // namespace

TEST_CASE("uncoupled oscillator fires once per period") {
  const auto m = PulseModel::uniform(path_graph(1), CouplingFunction::sine(1.0), 0.01);
  const PulseRun run = simulate_pulse(m, PhaseVector::Zero(1), 2.0, 0.5);
  REQUIRE(run.firings.size() == 2);
  CHECK(run.firings[0].t == Approx(1.0));
  CHECK(run.firings[1].t == Approx(2.0));
  CHECK(run.trajectory.times.back() == Approx(2.0));
  CHECK(run.trajectory.states[1][0] == Approx(kPi));  // t = 0.5
}

TEST_CASE("attractive pulse coupling shrinks the firing gap") {
  const auto kappa = kappa_from_f(CouplingFunction::sine(1.0), kTwoPi).kappa;
  const auto m = PulseModel::uniform(path_graph(2), kappa, 0.05);
  PhaseVector theta0(2);
  theta0 << 0.0, 0.5;
  const PulseRun run = simulate_pulse(m, theta0, 30.0, 1.0);
  const auto a = firing_times(run, 0);
  const auto b = firing_times(run, 1);
  const std::size_t n = std::min(a.size(), b.size());
  REQUIRE(n > 10);
  double prev = HUGE_VAL;
  for (std::size_t k = 0; k < 10; ++k) {
    const double gap = std::abs(a[k] - b[k]);
    CHECK(gap < prev);
    prev = gap;
  }
}

TEST_CASE("firing counts are conserved under weak coupling") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  const auto kappa = kappa_from_f(make_fb(1.0), kTwoPi).kappa;
  std::vector<double> delays(ring_graph(6).num_edges());
  for (double& d : delays) d = 0.3 * u(rng) / kTwoPi;
  const auto m = PulseModel::delayed(ring_graph(6), kappa, delays, 1e-2);
  PhaseVector theta0(6);
  for (auto& x : theta0) x = u(rng);
  const double T = 50.0;
  const PulseRun run = simulate_pulse(m, theta0, T, 1.0);
  for (std::size_t i = 0; i < 6; ++i) {
    const double count = static_cast<double>(firing_times(run, i).size());
    CHECK(std::abs(count - std::floor(T)) <= 1.0);
  }
}

TEST_CASE("weak-coupling agreement with the averaged phase model") {
  const std::size_t n = 45;
  const double eps = 1e-3;
  const std::vector<double> s3{1.0, 0.0, 0.3};
  const auto f = CouplingFunction::harmonics(s3);
  const Graph kn = complete_graph(n);
  std::mt19937_64 rng(11);
  const auto law = DelayDistribution::gaussian(kTwoPi, 0.1);
  std::vector<double> delays(kn.num_edges());
  for (double& d : delays) d = law.sample(rng) / kTwoPi;
  const auto pm = PulseModel::delayed(kn, kappa_from_f(f, kTwoPi).kappa, delays, eps);
  const PhaseModel avg = averaged_phase_model(pm);
  CHECK(avg.lags[3] == Approx(kTwoPi * delays[3]));
  CHECK(avg.coupling[0].eval(0.7) == Approx(f.eval(0.7)).epsilon(1e-12));

  const double T = 300.0;
  std::uniform_real_distribution<double> jit(-0.05, 0.05);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);

  SUBCASE("three-cluster start") {
    PhaseVector phi0 = symmetric_equilibrium({3, {n / 3}, {0.0}});
    for (auto& x : phi0) x = wrap_phase(x + jit(rng));
    const PulseRun pr = simulate_pulse(pm, phi0, T, 1.0);
    const Trajectory tr = integrate(avg, phi0, 0.1, T, {10, false});
    CHECK(sup_r_distance(pr.trajectory.states, tr.states) < 0.05);
  }
  SUBCASE("uniform random start") {
    PhaseVector phi0(static_cast<Eigen::Index>(n));
    for (auto& x : phi0) x = u(rng);
    const PulseRun pr = simulate_pulse(pm, phi0, T, 1.0);
    const Trajectory tr = integrate(avg, phi0, 0.1, T, {10, false});
    CHECK(order_parameter(tr.states.back()).r > 0.9);
    CHECK(sup_r_distance(pr.trajectory.states, tr.states) < 0.05);
  }
}

TEST_CASE("event cap, validation and determinism") {
  const auto kappa = kappa_from_f(CouplingFunction::sine(1.0), kTwoPi).kappa;
  auto m = PulseModel::uniform(complete_graph(4), kappa, 0.01);
  PhaseVector theta0(4);
  theta0 << 0.1, 1.0, 2.0, 3.0;
  m.max_events = 50;
  try {
    simulate_pulse(m, theta0, 100.0, 1.0);
    FAIL("expected EventOverflow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EventOverflow);
    CHECK(e.numerical());
  }
  m.max_events = 500'000'000;
  const PulseRun a = simulate_pulse(m, theta0, 20.0, 0.25);
  const PulseRun b = simulate_pulse(m, theta0, 20.0, 0.25);
  REQUIRE(a.firings.size() == b.firings.size());
  for (std::size_t k = 0; k < a.firings.size(); ++k) {
    CHECK(a.firings[k].t == b.firings[k].t);
    CHECK(a.firings[k].oscillator == b.firings[k].oscillator);
  }

  CHECK_THROWS_AS(PulseModel::uniform(complete_graph(3), kappa.scaled(100.0), 1.0), Error);
  CHECK_THROWS_AS(PulseModel::delayed(path_graph(2), kappa, {-0.1}, 0.01), Error);
  auto bad = m;
  bad.delays.pop_back();
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("simultaneous firings are ordered deterministically") {
  // Identical phases: every oscillator fires at the same instant.
  const auto kappa = kappa_from_f(CouplingFunction::sine(1.0), kTwoPi).kappa;
  const auto m = PulseModel::uniform(complete_graph(3), kappa, 0.01);
  const PulseRun run = simulate_pulse(m, PhaseVector::Constant(3, 0.5), 1.0, 0.5);
  REQUIRE(run.firings.size() >= 3);
  for (std::size_t k = 0; k < 3; ++k) CHECK(run.firings[k].oscillator == k);
}
