#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <oscsync/linalg.hpp>
#include <oscsync/stability.hpp>

using namespace oscsync;
using doctest::Approx;

namespace {

PhaseVector random_phases(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  PhaseVector p(static_cast<Eigen::Index>(n));
  for (auto& x : p) x = u(rng);
  return p;
}

Graph random_connected(std::size_t n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (j == i + 1 || coin(rng)) pairs.emplace_back(i, j);
  return build_graph(n, pairs);
}

// Linearization with prescribed edge weights.
Linearization weighted(const Graph& g, const Eigen::VectorXd& w, double eps = 1.0) {
  Linearization lin;
  lin.graph = g;
  lin.edge_weights = w;
  lin.epsilon = eps;
  const Eigen::MatrixXd b = incidence(g);
  lin.matrix = -eps * b * w.asDiagonal() * b.transpose();
  return lin;
}

Linearization isotropy_lin(const IsotropySpec& spec, const CouplingFunction& f) {
  const auto m = PhaseModel::uniform(complete_graph(spec.total()), f, 1.0);
  return linearize(m, symmetric_equilibrium(spec));
}

CouplingFunction s3() {
  const std::vector<double> sin_coeffs{1.0, 0.0, -0.15};
  return CouplingFunction::harmonics(sin_coeffs);
}

}  // namespace

TEST_CASE("linearize") {
  const auto two = PhaseModel::uniform(path_graph(2), CouplingFunction::sine(1.0), 1.0);
  const auto lin = linearize(two, PhaseVector::Zero(2));
  Eigen::Matrix2d expect;
  expect << -1, 1, 1, -1;
  CHECK((lin.matrix - expect).cwiseAbs().maxCoeff() < 1e-15);

  const auto ex4 = PhaseModel::uniform(example4_graph(), CouplingFunction::sine(1.0), 1.0);
  const auto l4 = linearize(ex4, example4_equilibrium());
  for (double w : l4.edge_weights) CHECK(std::abs(std::abs(w) - 0.5) < 1e-12);
  CHECK((l4.matrix * Eigen::VectorXd::Ones(6)).cwiseAbs().maxCoeff() < 1e-14);

  const auto lag = PhaseModel::lagged(path_graph(2), CouplingFunction::sine(1.0), {0.3}, 1.0);
  CHECK_FALSE(linearize(lag, PhaseVector::Zero(2)).symmetric_model);
}

TEST_CASE("symmetric eigenvalues") {
  const auto id = symmetric_eigenvalues(Eigen::Matrix3d::Identity());
  for (double v : id) CHECK(v == Approx(1.0));
  Eigen::Matrix2d m;
  m << -1, 1, 1, -1;
  const auto v = symmetric_eigenvalues(m);
  CHECK(v[0] == Approx(-2.0));
  CHECK(std::abs(v[1]) < 1e-14);

  std::mt19937_64 rng(8);
  std::normal_distribution<double> n01;
  for (int t = 0; t < 20; ++t) {
    Eigen::MatrixXd a(8, 8);
    for (auto i = 0; i < 8; ++i)
      for (auto j = 0; j <= i; ++j) a(i, j) = a(j, i) = n01(rng);
    const auto e = jacobi_eigen(a);
    const Eigen::MatrixXd rebuilt = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
    CHECK((rebuilt - a).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(std::is_sorted(e.values.begin(), e.values.end()));
    const auto again = symmetric_eigenvalues(rebuilt);
    CHECK((again - e.values).cwiseAbs().maxCoeff() < 1e-8);
  }
  Eigen::Matrix2d bad;
  bad << 0, 1, 0, 0;
  CHECK_THROWS_AS(symmetric_eigenvalues(bad), Error);
}

TEST_CASE("classify") {
  const double eps = 0.5;
  const auto k4 = PhaseModel::uniform(complete_graph(4), CouplingFunction::sine(1.0), eps);
  auto v = classify(linearize(k4, PhaseVector::Constant(4, 0.7)));
  CHECK(v.cls == StabilityClass::Stable);
  REQUIRE(v.nonflow_eigenvalues.size() == 3);
  for (double x : v.nonflow_eigenvalues) CHECK(x == Approx(-eps * 4));

  const auto ex4 = PhaseModel::uniform(example4_graph(), CouplingFunction::sine(1.0), 1.0);
  CHECK(classify(linearize(ex4, example4_equilibrium())).cls == StabilityClass::Unstable);

  const auto two = PhaseModel::uniform(path_graph(2), CouplingFunction::sine(1.0), eps);
  PhaseVector anti(2);
  anti << 0.0, kPi;
  const auto lin2 = linearize(two, anti);
  const auto full = symmetric_eigenvalues(lin2.matrix);
  CHECK(std::abs(full[0]) < 1e-14);
  CHECK(full[1] == Approx(2 * eps));
  v = classify(lin2);
  CHECK(v.cls == StabilityClass::Unstable);
  CHECK(v.max_nonflow_eigenvalue == Approx(2 * eps));

  const auto lag = PhaseModel::lagged(path_graph(2), CouplingFunction::sine(1.0), {0.3}, 1.0);
  try {
    (void)classify(linearize(lag, PhaseVector::Zero(2)));
    FAIL("lagged model classified");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PreconditionFailed);
  }

  // One edge at a quarter turn has zero weight: a second zero eigenvalue.
  const auto path = PhaseModel::uniform(path_graph(3), CouplingFunction::sine(1.0), 1.0);
  PhaseVector q(3);
  q << 0.0, kPi / 2, kPi / 2;
  v = classify(linearize(path, q));
  CHECK(v.cls == StabilityClass::Marginal);
  CHECK(v.nonflow_eigenvalues[0] == Approx(-2.0));
}

TEST_CASE("cut_sum") {
  const auto ex4 = PhaseModel::uniform(example4_graph(), CouplingFunction::sine(1.0), 1.0);
  const auto lin = linearize(ex4, example4_equilibrium());
  for (std::size_t i = 0; i < 6; ++i) {
    const std::vector<std::size_t> one{i};
    CHECK(std::abs(cut_sum(lin, Partition::from_minus_set(6, one))) < 1e-12);
  }
  const std::vector<std::size_t> c2{0, 1, 5};
  CHECK(cut_sum(lin, Partition::from_minus_set(6, c2)) == Approx(-1.0).epsilon(1e-12));
  CHECK_THROWS_AS(cut_sum(lin, Partition::from_mask(6, 0)), Error);

  std::mt19937_64 rng(12);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 3 + t % 8;
    const double eps = 0.1 + 0.01 * t;
    const auto m = PhaseModel::uniform(random_connected(n, 0.5, rng), CouplingFunction::sine(1.0), eps);
    const PhaseVector phi = random_phases(n, rng);
    const auto l = linearize(m, phi);
    std::uniform_int_distribution<std::uint64_t> mask(1, (std::uint64_t{1} << (n - 1)) - 1);
    const auto p = Partition::from_mask(n, mask(rng));
    const Eigen::VectorXd x = p.indicator();
    CHECK(std::abs(cut_sum(l, p) + x.dot(l.matrix * x) / eps) < 1e-10);
    // Single-node cuts reduce to the neighbour cosine sum for f = sin.
    const std::vector<std::size_t> v0{0};
    double s = 0.0;
    for (std::size_t j : m.graph.neighbors(0)) s += std::cos(phi[Eigen::Index(j)] - phi[0]);
    CHECK(cut_sum(l, Partition::from_minus_set(n, v0)) == Approx(s).epsilon(1e-12));
  }
}

TEST_CASE("min_cut_scan") {
  const auto ex4 = PhaseModel::uniform(example4_graph(), CouplingFunction::sine(1.0), 1.0);
  const auto c = min_cut_scan(linearize(ex4, example4_equilibrium()));
  CHECK(c.value <= -1.0 + 1e-12);
  CHECK_FALSE(c.partition.in_plus(0));

  std::mt19937_64 rng(13);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 3 + t % 6;
    const auto m = PhaseModel::uniform(random_connected(n, 0.4, rng), CouplingFunction::sine(1.0), 1.0);
    const auto cut = min_cut_scan(linearize(m, PhaseVector::Zero(Eigen::Index(n))));
    // Every weight is f'(0) = 1, so the value is the minimum edge cut size.
    std::size_t best = m.graph.num_edges();
    for (const auto& p : enumerate_partitions(m.graph)) best = std::min(best, cut_edges(m.graph, p).size());
    CHECK(cut.value > 0.0);
    CHECK(cut.value == Approx(double(best)));
  }

  std::size_t agree = 0;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::uint64_t t = 0; t < 100; ++t) {
    const Graph g = complete_graph(8);
    Eigen::VectorXd w(Eigen::Index(g.num_edges()));
    for (auto& x : w) x = u(rng);
    const auto lin = weighted(g, w);
    const auto ex = min_cut_scan(lin);
    CutScanOptions h;
    h.mode = CutScanOptions::Mode::Heuristic;
    h.restarts = 32;
    h.seed = t;
    const auto he = min_cut_scan(lin, h);
    CHECK(he.value >= ex.value - 1e-12);
    if (std::abs(he.value - ex.value) < 1e-12) ++agree;
  }
  CHECK(agree >= 95);

  CHECK_THROWS_AS(min_cut_scan(weighted(ring_graph(26), Eigen::VectorXd::Ones(26))), Error);
}

TEST_CASE("min_cut_scan and surface are thread independent") {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Graph g = complete_graph(12);
  Eigen::VectorXd w(Eigen::Index(g.num_edges()));
  for (auto& x : w) x = u(rng);
  const auto lin = weighted(g, w);
  CutScanOptions one, many;
  many.threads = 4;
  const auto a = min_cut_scan(lin, one);
  const auto b = min_cut_scan(lin, many);
  CHECK(a.value == b.value);
  CHECK(a.partition == b.partition);
  one.mode = many.mode = CutScanOptions::Mode::Heuristic;
  one.seed = many.seed = 99;
  const auto c = min_cut_scan(lin, one);
  const auto d = min_cut_scan(lin, many);
  CHECK(c.value == d.value);
  CHECK(c.partition == d.partition);

  const auto s1 = min_cut_surface(CouplingFunction::sine(1.0), 9, 1);
  const auto s3t = min_cut_surface(CouplingFunction::sine(1.0), 9, 3);
  CHECK(s1 == s3t);
}

TEST_CASE("min_cut_surface") {
  const auto s = min_cut_surface(CouplingFunction::sine(1.0), 21);
  CHECK(s(10, 10) <= -1.0 + 1e-12);
  CHECK(s.maxCoeff() < 0.0);
  for (Eigen::Index i = 0; i < 21; ++i) {
    CHECK(std::abs(s(0, i) - s(20, i)) < 1e-10);
    CHECK(std::abs(s(i, 0) - s(i, 20)) < 1e-10);
  }
}

TEST_CASE("g_m") {
  const auto sine = CouplingFunction::sine(1.0);
  const auto f = s3();
  double max3 = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double d = kTwoPi * i / 200.0;
    for (std::size_t m = 2; m <= 9; ++m) CHECK(std::abs(g_m(sine, m, d)) < 1e-12);
    for (std::size_t m : {2, 4, 6, 8}) {
      CHECK(std::abs(g_m(f, m, d)) < 1e-12);
      CHECK(std::abs(g_m_deriv(f, m, d)) < 1e-10);
    }
    max3 = std::max(max3, std::abs(g_m(f, 3, d)));
  }
  CHECK(max3 > 1e-3);
  CHECK(g_m(sine, 1, 0.4) == Approx(std::sin(0.4)));
  CHECK(g_m_deriv(sine, 1, 0.4) == Approx(std::cos(0.4)));
}

TEST_CASE("check_structure") {
  const auto r = check_structure(CouplingFunction::sine(1.0));
  CHECK(r.odd);
  CHECK(r.even_about_half_pi);
  CHECK(r.concave_on_0_pi);
  CHECK(r.fprime_concave_on_half_band);
  CHECK(r.half_slope_bound);
  CHECK(std::cos(kPi / 4) >= 0.5);
  CHECK_FALSE(check_structure(make_fb(kPi / 4)).even_about_half_pi);
  CHECK(check_structure(make_fb(kPi / 4)).odd);
  CHECK(check_structure(s3()).even_about_half_pi);
  CHECK(in_family(CouplingFunction::sine(1.0), kPi / 2));
  CHECK(in_family(make_fb(1.1), 1.1));
  CHECK_FALSE(in_family(make_fb(1.1), kPi / 2));
}

TEST_CASE("even_m_certificate") {
  const auto sine = CouplingFunction::sine(1.0);
  const IsotropySpec a{2, {3}, {0.0}};
  const auto ca = even_m_certificate(a, sine);
  CHECK(ca.value == Approx(-9.0).epsilon(1e-12));
  CHECK(ca.expected == Approx(-9.0));
  const IsotropySpec b{4, {1, 1}, {0.0, kPi / 5}};
  const auto cb = even_m_certificate(b, sine);
  CHECK(cb.value == Approx(-1.0).epsilon(1e-12));
  const IsotropySpec c{6, {2, 1}, {0.0, kPi / 7}};
  const auto cc = even_m_certificate(c, s3());
  CHECK(cc.value == Approx(cc.expected).epsilon(1e-10));
  CHECK(cc.value < 0.0);
  for (const auto& [spec, f] : {std::pair{a, sine}, std::pair{b, sine}, std::pair{c, s3()}}) {
    const auto lin = isotropy_lin(spec, f);
    CHECK(classify(lin).cls == StabilityClass::Unstable);
    CHECK(cut_sum(lin, even_m_certificate(spec, f).partition) < 0.0);
  }
  CHECK_THROWS_AS(even_m_certificate({3, {1}, {0.0}}, sine), Error);
  CHECK_THROWS_AS(even_m_certificate(a, make_fb(kPi / 4)), Error);
}

TEST_CASE("odd_m_certificate") {
  const auto sine = CouplingFunction::sine(1.0);
  const IsotropySpec a{7, {1}, {0.0}};
  const auto ca = odd_m_certificate(a, sine);
  CHECK(ca.value < 0.0);
  CHECK(ca.terminal == Approx(1.0 - 2.0 * std::cos(kPi / 7)));
  CHECK(ca.terminal < 0.0);
  const auto lin = isotropy_lin(a, sine);
  CHECK(classify(lin).cls == StabilityClass::Unstable);
  CHECK(min_cut_scan(lin).value <= ca.value + 1e-12);

  const IsotropySpec b{9, {1, 2}, {0.0, kPi / 9}};
  const auto cb = odd_m_certificate(b, sine);
  CHECK(cb.value < 0.0);
  CHECK(cb.grid_max < 0.0);
  CHECK_FALSE(cb.pairs.empty());
  for (const auto& p : cb.pairs) CHECK(p.value < 0.0);
  for (int i = 0; i <= 50; ++i) CHECK(odd_pair_bound(sine, 9, kTwoPi / 9 * i / 50.0) < 0.0);
  CHECK(classify(isotropy_lin(b, sine)).cls == StabilityClass::Unstable);

  CHECK_THROWS_AS(odd_m_certificate({5, {1}, {0.0}}, sine), Error);
  CHECK_THROWS_AS(odd_m_certificate({8, {1}, {0.0}}, sine), Error);
}

TEST_CASE("certificate soundness and rotation invariance") {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::size_t negative = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 3 + t % 7;
    const auto m = PhaseModel::uniform(random_connected(n, 0.5, rng), t % 2 ? CouplingFunction::sine(1.0) : make_fb(1.2), 1.0);
    const PhaseVector phi = random_phases(n, rng);
    const auto lin = linearize(m, phi);
    const auto cut = min_cut_scan(lin);
    const auto v = classify(lin);
    if (cut.value < 0.0) {
      ++negative;
      CHECK(v.cls == StabilityClass::Unstable);
    }
    const double lambda = u(rng);
    const auto lin2 = linearize(m, (phi.array() + lambda).matrix());
    CHECK(std::abs(cut_sum(lin2, cut.partition) - cut.value) < 1e-10);
    CHECK(classify(lin2).cls == v.cls);
  }
  CHECK(negative > 50);
}

TEST_CASE("cut condition is one-sided") {
  // K4 with one strongly negative edge: A has a positive eigenvalue while
  // every cut sum stays non-negative.
  const Graph g = complete_graph(4);
  Eigen::VectorXd w = Eigen::VectorXd::Ones(6);
  w[0] = -1.2;  // edge (0,1); x = e0 - e1 gives x'Lx = -0.8
  const auto lin = weighted(g, w);
  CHECK(min_cut_scan(lin).value >= 0.0);
  CHECK(classify(lin).cls == StabilityClass::Unstable);
}
