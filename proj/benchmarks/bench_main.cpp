#include <random>

#include <benchmark/benchmark.h>

#include <oscsync/delay.hpp>
#include <oscsync/dynamics.hpp>
#include <oscsync/pulse.hpp>
#include <oscsync/stability.hpp>

using namespace oscsync;

namespace {

PhaseVector random_phases(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  PhaseVector p(static_cast<Eigen::Index>(n));
  for (auto& x : p) x = u(rng);
  return p;
}

void BM_PhaseRhs(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = PhaseModel::uniform(complete_graph(n), make_fb(kPi / 4), 1.0 / double(n));
  const PhaseVector phi = random_phases(n, 1);
  PhaseVector out(phi.size());
  for (auto _ : state) {
    phase_rhs(m, phi, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m.graph.num_edges()));
}
BENCHMARK(BM_PhaseRhs)->Arg(6)->Arg(45)->Arg(200);

void BM_MinCutExhaustive(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = PhaseModel::uniform(complete_graph(n), CouplingFunction::sine(1.0), 1.0);
  const auto lin = linearize(m, random_phases(n, 2));
  for (auto _ : state) benchmark::DoNotOptimize(min_cut_scan(lin).value);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(partition_count(m.graph)));
}
BENCHMARK(BM_MinCutExhaustive)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_ConvolveDelay(benchmark::State& state) {
  const auto grid = static_cast<std::size_t>(state.range(0));
  const auto f = make_fb(1.0);
  const auto g = DelayDistribution::gaussian(kPi, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(convolve_delay(f, g, grid).eval(0.3));
}
BENCHMARK(BM_ConvolveDelay)->Arg(1024)->Arg(4096)->Arg(16384)->Unit(benchmark::kMicrosecond);

void BM_PulseSimulate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const double eps = 1.0 / double(n);
  const auto pm = PulseModel::uniform(complete_graph(n), CouplingFunction::sine(-1.0), eps);
  const PhaseVector theta0 = random_phases(n, 3);
  std::uint64_t events = 0;
  for (auto _ : state) {
    const auto run = simulate_pulse(pm, theta0, 20.0, 1.0);
    events += run.events;
    benchmark::DoNotOptimize(run.events);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(events));
}
BENCHMARK(BM_PulseSimulate)->Arg(9)->Arg(45)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
