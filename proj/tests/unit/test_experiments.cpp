#include <doctest.h>

#include <cmath>

#include <oscsync/experiments.hpp>

using namespace oscsync;
using doctest::Approx;

namespace {

CouplingFunction cluster_f() {
  const std::vector<double> sin_coeffs{1.0, 0.0, 0.3};
  return CouplingFunction::harmonics(sin_coeffs);
}

}  // namespace

TEST_CASE("sustained_sync") {
  std::vector<double> t, r;
  for (int i = 0; i <= 100; ++i) {
    t.push_back(i);
    r.push_back(i < 85 ? 0.2 : 0.999);
  }
  CHECK(sustained_sync(t, r, 0.99));
  r[95] = 0.98;  // one dip inside the final 10%
  CHECK_FALSE(sustained_sync(t, r, 0.99));
  r[95] = 0.999;
  r[100] = 0.5;
  CHECK_FALSE(sustained_sync(t, r, 0.99));
  CHECK_FALSE(sustained_sync({}, {}, 0.99));
}

TEST_CASE("basin_mc") {
  ExperimentConfig cfg;
  cfg.seed = 3;
  cfg.trials = 100;
  const auto two = basin_mc(path_graph(2), make_fb(kPi - 0.01), cfg);
  CHECK(two.fraction == 1.0);
  CHECK(two.synced == 100);
  CHECK(two.hypothesis_holds);

  cfg.trials = 10;
  cfg.horizon = 200.0;
  const auto ex4 = basin_mc(example4_graph(), make_fb(kPi / 5), cfg);
  CHECK(ex4.fraction == 1.0);
  CHECK(ex4.hypothesis_holds);

  BasinOptions near_splay;
  near_splay.splay_jitter = 0.1;
  cfg.horizon = 0.0;
  const auto ring = basin_mc(ring_graph(6), CouplingFunction::sine(1.0), cfg, near_splay);
  CHECK(ring.fraction < 1.0);
  CHECK_FALSE(ring.hypothesis_holds);

  try {
    (void)basin_mc(build_graph(4, {{0, 1}, {2, 3}}), CouplingFunction::sine(1.0), cfg);
    FAIL("disconnected graph accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Disconnected);
  }
}

TEST_CASE("basin_mc does not depend on the thread count") {
  ExperimentConfig cfg;
  cfg.seed = 5;
  cfg.trials = 12;
  cfg.horizon = 50.0;
  const auto a = basin_mc(example4_graph(), CouplingFunction::sine(1.0), cfg);
  cfg.threads = 3;
  const auto b = basin_mc(example4_graph(), CouplingFunction::sine(1.0), cfg);
  CHECK(a.final_r == b.final_r);
  CHECK(a.synced == b.synced);
}

TEST_CASE("meanfield_compare") {
  ExperimentConfig cfg;
  cfg.seed = 9;
  const auto same = meanfield_compare(CouplingFunction::sine(-1.0), DelayDistribution::point(0.0), 6, cfg);
  CHECK(same.sup_distance < 1e-8);
  CHECK(same.times.size() == same.r_lagged.size());
  CHECK(same.r_lagged.size() == same.r_convolved.size());

  const auto wide = meanfield_compare(CouplingFunction::sine(-1.0), DelayDistribution::gaussian(kPi, 1.0), 10, cfg);
  CHECK(wide.sup_distance > 0.0);
  CHECK(wide.r_convolved.back() > 0.95);

  cfg.trials = 2;
  const auto study = meanfield_study(CouplingFunction::sine(-1.0), DelayDistribution::gaussian(kPi, 1.0), {4, 8}, cfg);
  REQUIRE(study.sup_distance.size() == 2);
  CHECK(study.sup_distance[0].size() == 2);
  CHECK(study.median.size() == 2);
}

TEST_CASE("cluster experiments") {
  ExperimentConfig cfg;
  cfg.seed = 1;
  ClusterOptions opts;
  opts.engine = Engine::Phase;
  opts.jitter = 0.0;
  const auto exact = cluster_trial(cluster_f(), DelayDistribution::point(0.0), 9, 1, cfg, opts);
  CHECK(exact.outcome == ClusterOutcome::ClustersPersist);
  CHECK(exact.final_r < 1e-8);

  CHECK_THROWS_AS(cluster_trial(cluster_f(), DelayDistribution::point(0.0), 10, 1, cfg, opts), Error);
  CHECK_THROWS_AS(cluster_diagnostics(cluster_f(), DelayDistribution::point(0.0), 0), Error);

  const auto d = cluster_diagnostics(CouplingFunction::sine(1.0), DelayDistribution::point(0.0), 9);
  CHECK(d.h_is_odd);
  CHECK(d.h_slope_0 == Approx(1.0).epsilon(1e-6));
  CHECK(d.h_slope_2pi_3 == Approx(-0.5).epsilon(1e-6));
  CHECK(d.verdict.cls == StabilityClass::Unstable);
  const auto s = cluster_diagnostics(cluster_f(), DelayDistribution::point(0.0), 9);
  CHECK(s.verdict.cls == StabilityClass::Stable);
}

TEST_CASE("sync_probability_sweep") {
  ExperimentConfig cfg;
  cfg.seed = 2;
  cfg.trials = 4;
  ClusterOptions opts;
  opts.engine = Engine::Phase;
  const auto r = sync_probability_sweep(cluster_f(), kTwoPi, {9}, {0.0}, cfg, opts);
  REQUIRE(r.probability.size() == 1);
  CHECK(r.probability[0][0] == 0.0);
  CHECK(r.successes[0][0] == 0);
  CHECK_FALSE(r.sigma_star.has_value());
  CHECK(sweep_delay(1.0, 0.0).kind() == DelayDistribution::Kind::Point);

  cfg.threads = 2;
  const auto again = sync_probability_sweep(cluster_f(), kTwoPi, {9}, {0.0}, cfg, opts);
  CHECK(again.successes == r.successes);
}
