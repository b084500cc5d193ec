#include "oscsync/stability.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>

#include "oscsync/linalg.hpp"
#include "oscsync/parallel.hpp"

namespace oscsync {

Linearization linearize(const PhaseModel& m, const PhaseVector& phi_star) {
  m.validate();
  if (static_cast<std::size_t>(phi_star.size()) != m.size()) {
    throw Error(ErrorCode::BadShape, "phase vector size mismatch");
  }
  const auto n = static_cast<Eigen::Index>(m.size());
  Linearization lin;
  lin.graph = m.graph;
  lin.epsilon = m.epsilon;
  lin.symmetric_model = m.potential_form();
  lin.edge_weights.resize(static_cast<Eigen::Index>(m.graph.num_edges()));
  lin.matrix = Eigen::MatrixXd::Zero(n, n);
  const auto edges = m.graph.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto i = static_cast<Eigen::Index>(edges[e].tail);
    const auto j = static_cast<Eigen::Index>(edges[e].head);
    const double w = m.coupling[e].deriv(phi_star[j] - phi_star[i] - m.lags[e]);
    lin.edge_weights[static_cast<Eigen::Index>(e)] = w;
    // -eps * w * (e_j - e_i)(e_j - e_i)^T
    lin.matrix(i, i) -= m.epsilon * w;
    lin.matrix(j, j) -= m.epsilon * w;
    lin.matrix(i, j) += m.epsilon * w;
    lin.matrix(j, i) += m.epsilon * w;
  }
  return lin;
}

const char* to_string(StabilityClass c) {
  switch (c) {
    case StabilityClass::Stable:
      return "Stable";
    case StabilityClass::Unstable:
      return "Unstable";
    case StabilityClass::Marginal:
      return "Marginal";
  }
  return "?";
}

StabilityVerdict classify(const Linearization& lin, double tol) {
  if (!lin.symmetric_model) {
    throw Error(ErrorCode::PreconditionFailed, "classification needs a zero-lag model with odd couplings");
  }
  const Eigen::Index n = lin.matrix.rows();
  if (n < 2) throw Error(ErrorCode::PreconditionFailed, "classification needs N >= 2");
  const Eigen::MatrixXd q = helmert_basis(n);
  Eigen::MatrixXd reduced = q.transpose() * lin.matrix * q;
  reduced = 0.5 * (reduced + reduced.transpose());

  StabilityVerdict v;
  v.tol = tol >= 0.0 ? tol : 1e-9 * lin.matrix.norm();
  v.nonflow_eigenvalues = symmetric_eigenvalues(reduced);
  v.max_nonflow_eigenvalue = v.nonflow_eigenvalues[v.nonflow_eigenvalues.size() - 1];
  if (v.max_nonflow_eigenvalue > v.tol) {
    v.cls = StabilityClass::Unstable;
  } else if (v.max_nonflow_eigenvalue < -v.tol) {
    v.cls = StabilityClass::Stable;
  } else {
    v.cls = StabilityClass::Marginal;
  }
  return v;
}

double cut_sum(const Linearization& lin, const Partition& p) {
  double s = 0.0;
  for (const auto& c : cut_edges(lin.graph, p)) s += lin.edge_weights[static_cast<Eigen::Index>(c.edge)];
  return s;
}

namespace {

struct Best {
  double value = std::numeric_limits<double>::infinity();
  std::uint64_t mask = 0;

  void offer(double v, std::uint64_t m) {
    if (v < value || (v == value && m < mask)) {
      value = v;
      mask = m;
    }
  }
};

// Neighbour lists with edge weights, for incremental cut updates.
struct Adjacency {
  std::vector<std::vector<std::pair<std::size_t, double>>> nb;

  explicit Adjacency(const Linearization& lin) : nb(lin.graph.num_vertices()) {
    const auto edges = lin.graph.edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const double w = lin.edge_weights[static_cast<Eigen::Index>(e)];
      nb[edges[e].tail].push_back({edges[e].head, w});
      nb[edges[e].head].push_back({edges[e].tail, w});
    }
  }
};

double direct_value(const Linearization& lin, const std::vector<char>& side) {
  double s = 0.0;
  const auto edges = lin.graph.edges();
  for (std::size_t e = 0; e < edges.size(); ++e)
    if (side[edges[e].tail] != side[edges[e].head]) s += lin.edge_weights[static_cast<Eigen::Index>(e)];
  return s;
}

CutCertificate exhaustive_scan(const Linearization& lin, std::size_t threads) {
  const std::size_t n = lin.graph.num_vertices();
  if (n > kMaxExhaustiveVertices) throw Error(ErrorCode::TooLarge, "exhaustive scan requires N <= 25");
  if (n < 2) throw Error(ErrorCode::EmptySide, "a cut needs at least two vertices");
  const Adjacency adj(lin);
  const std::uint64_t total = std::uint64_t{1} << (n - 1);
  constexpr std::uint64_t chunk = std::uint64_t{1} << 16;
  const std::uint64_t chunks = (total + chunk - 1) / chunk;
  std::vector<Best> best(chunks);

  // Gray-code walk over the free vertices 1..n-1; vertex 0 stays in V-.
  parallel_for(chunks, threads, [&](std::size_t c) {
    const std::uint64_t lo = c * chunk;
    const std::uint64_t hi = std::min(total, lo + chunk);
    std::vector<char> side(n, 0);
    std::uint64_t gray = lo ^ (lo >> 1);
    for (std::size_t b = 0; b + 1 < n; ++b) side[b + 1] = static_cast<char>((gray >> b) & 1U);
    double value = direct_value(lin, side);
    Best local;
    if (lo >= 1) local.offer(value, gray << 1);
    for (std::uint64_t i = lo + 1; i < hi; ++i) {
      const auto b = static_cast<std::size_t>(std::countr_zero(i));
      const std::size_t v = b + 1;
      for (const auto& [u, w] : adj.nb[v]) value += side[u] != side[v] ? -w : w;
      side[v] = static_cast<char>(!side[v]);
      gray ^= std::uint64_t{1} << b;
      local.offer(value, gray << 1);
    }
    best[c] = local;
  });

  Best all;
  for (const auto& b : best) all.offer(b.value, b.mask);
  CutCertificate out;
  out.partition = Partition::from_mask(n, all.mask);
  out.value = cut_sum(lin, out.partition);
  return out;
}

CutCertificate heuristic_scan(const Linearization& lin, const CutScanOptions& opts) {
  const std::size_t n = lin.graph.num_vertices();
  if (n < 2) throw Error(ErrorCode::EmptySide, "a cut needs at least two vertices");
  const Adjacency adj(lin);
  const std::size_t restarts = std::max<std::size_t>(1, opts.restarts);
  std::vector<std::pair<double, std::vector<char>>> results(restarts);

  parallel_for(restarts, opts.threads, [&](std::size_t r) {
    std::mt19937_64 rng(trial_seed(opts.seed, r));
    std::vector<char> side(n, 0);
    std::size_t plus = 0;
    for (std::size_t v = 1; v < n; ++v) {
      side[v] = static_cast<char>(rng() & 1U);
      plus += static_cast<std::size_t>(side[v]);
    }
    if (plus == 0) {
      side[1 + static_cast<std::size_t>(rng() % (n - 1))] = 1;
      plus = 1;
    }
    double value = direct_value(lin, side);
    for (;;) {
      double best_gain = -1e-14;
      std::size_t best_v = n;
      for (std::size_t v = 0; v < n; ++v) {
        const std::size_t plus_after = side[v] ? plus - 1 : plus + 1;
        if (plus_after == 0 || plus_after == n) continue;
        double gain = 0.0;
        for (const auto& [u, w] : adj.nb[v]) gain += side[u] != side[v] ? -w : w;
        if (gain < best_gain) {
          best_gain = gain;
          best_v = v;
        }
      }
      if (best_v == n) break;
      plus = side[best_v] ? plus - 1 : plus + 1;
      side[best_v] = static_cast<char>(!side[best_v]);
      value += best_gain;
    }
    results[r] = {value, side};
  });

  CutCertificate best;
  best.value = std::numeric_limits<double>::infinity();
  for (const auto& [value, side] : results) {
    std::vector<bool> plus(n);
    for (std::size_t v = 0; v < n; ++v) plus[v] = side[v] != side[0];
    Partition p = Partition(plus).normalized();
    const double v = cut_sum(lin, p);
    const bool tie_wins = v == best.value && n <= 64 && p.mask() < best.partition.mask();
    if (v < best.value || tie_wins) best = {std::move(p), v};
  }
  return best;
}

}  // namespace

CutCertificate min_cut_scan(const Linearization& lin, const CutScanOptions& opts) {
  if (opts.mode == CutScanOptions::Mode::Exhaustive) return exhaustive_scan(lin, opts.threads);
  return heuristic_scan(lin, opts);
}

Eigen::MatrixXd min_cut_surface(const CouplingFunction& f, std::size_t grid, std::size_t threads) {
  if (grid < 2) throw Error(ErrorCode::BadShape, "surface grid needs at least 2 points per axis");
  const PhaseModel model = PhaseModel::uniform(example4_graph(), f, 1.0);
  const auto g = static_cast<Eigen::Index>(grid);
  Eigen::MatrixXd out(g, g);
  auto axis = [grid](std::size_t k) {
    return -kPi + kTwoPi * static_cast<double>(k) / static_cast<double>(grid - 1);
  };
  parallel_for(grid * grid, threads, [&](std::size_t cell) {
    const std::size_t a = cell / grid;
    const std::size_t b = cell % grid;
    const Linearization lin = linearize(model, example4_family2(axis(a), axis(b)));
    out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = exhaustive_scan(lin, 1).value;
  });
  return out;
}

double g_m(const CouplingFunction& f, std::size_t m, double delta) {
  double s = 0.0;
  for (std::size_t j = 0; j < m; ++j) s += f.eval(kTwoPi * static_cast<double>(j) / static_cast<double>(m) + delta);
  return s;
}

double g_m_deriv(const CouplingFunction& f, std::size_t m, double delta) {
  double s = 0.0;
  for (std::size_t j = 0; j < m; ++j) s += f.deriv(kTwoPi * static_cast<double>(j) / static_cast<double>(m) + delta);
  return s;
}

StructureReport check_structure(const CouplingFunction& f, std::size_t grid) {
  StructureReport rep;
  double scale = 0.0;
  double dscale = 0.0;
  for (std::size_t k = 0; k < grid; ++k) {
    const double t = kTwoPi * static_cast<double>(k) / static_cast<double>(grid);
    scale = std::max(scale, std::abs(f.eval(t)));
    dscale = std::max(dscale, std::abs(f.deriv(t)));
  }
  scale = std::max(scale, 1e-300);
  dscale = std::max(dscale, 1e-300);
  const double sym_tol = 1e-9 * scale;
  const double h = kPi / static_cast<double>(grid);

  rep.odd = true;
  rep.even_about_half_pi = true;
  for (std::size_t k = 0; k <= grid; ++k) {
    const double t = h * static_cast<double>(k);
    if (std::abs(f.eval(t) + f.eval(-t)) > sym_tol) rep.odd = false;
    if (std::abs(f.eval(kPi / 2 + t) - f.eval(kPi / 2 - t)) > sym_tol) rep.even_about_half_pi = false;
  }
  // Second differences on [0, pi] for f and on [-pi/2, pi/2] for f'.
  rep.concave_on_0_pi = true;
  rep.fprime_concave_on_half_band = true;
  for (std::size_t k = 1; k < grid; ++k) {
    const double x = h * static_cast<double>(k);
    if (f.eval(x - h) - 2.0 * f.eval(x) + f.eval(x + h) > 1e-12 * scale) rep.concave_on_0_pi = false;
    const double y = -kPi / 2 + x;
    if (f.deriv(y - h) - 2.0 * f.deriv(y) + f.deriv(y + h) > 1e-12 * dscale) rep.fprime_concave_on_half_band = false;
  }
  if (rep.concave_on_0_pi && rep.fprime_concave_on_half_band) {
    const double half = 0.5 * f.deriv(0.0);
    for (std::size_t m = 4; m <= 64; ++m)
      if (f.deriv(kPi / static_cast<double>(m)) < half - 1e-12 * dscale) rep.half_slope_bound = false;
  }
  return rep;
}

bool in_family(const CouplingFunction& f, double b, std::size_t grid) {
  if (!(b > 0.0 && b < kPi)) return false;
  if (!check_structure(f, grid).odd) return false;
  for (std::size_t k = 0; k < grid; ++k) {
    const double t = kTwoPi * static_cast<double>(k) / static_cast<double>(grid);
    if (t < 1e-9 || std::abs(t - b) < 1e-9 || std::abs(t - (kTwoPi - b)) < 1e-9) continue;
    const double d = f.deriv(t);
    const bool rising = t < b || t > kTwoPi - b;
    if (rising ? !(d > 0.0) : !(d < 0.0)) return false;
  }
  return true;
}

namespace {

Linearization symmetric_linearization(const IsotropySpec& spec, const CouplingFunction& f) {
  const PhaseModel model = PhaseModel::uniform(complete_graph(spec.total()), f, 1.0);
  return linearize(model, symmetric_equilibrium(spec));
}

}  // namespace

EvenCertificate even_m_certificate(const IsotropySpec& spec, const CouplingFunction& f) {
  spec.validate();
  if (spec.m % 2 != 0) throw Error(ErrorCode::PreconditionFailed, "m must be even");
  const auto s = check_structure(f);
  if (!s.odd || !s.even_about_half_pi || !in_family(f, kPi / 2)) {
    throw Error(ErrorCode::PreconditionFailed, "f must be odd, even about pi/2 and in F_{pi/2}");
  }
  const Linearization lin = symmetric_linearization(spec, f);
  std::vector<std::size_t> block(spec.block_sizes[0]);
  for (std::size_t k = 0; k < block.size(); ++k) block[k] = k;
  EvenCertificate out;
  out.partition = Partition::from_minus_set(spec.total(), block).normalized();
  out.value = cut_sum(lin, out.partition);
  const double k0 = static_cast<double>(spec.block_sizes[0]);
  out.expected = -k0 * k0 * f.deriv(0.0);
  return out;
}

double odd_pair_bound(const CouplingFunction& f, std::size_t m, double d) {
  const double step = kTwoPi / static_cast<double>(m);
  return 2.0 * g_m_deriv(f, m, d) - f.deriv(d + step) - 2.0 * f.deriv(d) - f.deriv(d - step);
}

OddCertificate odd_m_certificate(const IsotropySpec& spec, const CouplingFunction& f, std::size_t grid) {
  spec.validate();
  if (spec.m % 2 != 1 || spec.m < 7) throw Error(ErrorCode::PreconditionFailed, "m must be odd and >= 7");
  const auto s = check_structure(f);
  if (!s.concave_on_0_pi || !s.fprime_concave_on_half_band || !in_family(f, kPi / 2)) {
    throw Error(ErrorCode::PreconditionFailed, "f must be concave on [0,pi] with f' concave on [-pi/2,pi/2], in F_{pi/2}");
  }
  const Linearization lin = symmetric_linearization(spec, f);
  std::vector<std::size_t> arc;
  for (std::size_t l = 0; l < spec.block_sizes.size(); ++l) {
    const std::size_t first = spec.first_vertex(l, 0);
    for (std::size_t k = 0; k < 2 * spec.block_sizes[l]; ++k) arc.push_back(first + k);
  }
  OddCertificate out;
  out.partition = Partition::from_minus_set(spec.total(), arc).normalized();
  out.value = cut_sum(lin, out.partition);
  for (std::size_t l1 = 0; l1 < spec.shifts.size(); ++l1) {
    for (std::size_t l2 = 0; l2 < spec.shifts.size(); ++l2) {
      const double d = std::abs(spec.shifts[l2] - spec.shifts[l1]);
      out.pairs.push_back({l1, l2, d, odd_pair_bound(f, spec.m, d)});
    }
  }
  const double width = kTwoPi / static_cast<double>(spec.m);
  out.grid_max = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < grid; ++k) {
    const double d = width * static_cast<double>(k) / static_cast<double>(grid - 1);
    out.grid_max = std::max(out.grid_max, odd_pair_bound(f, spec.m, d));
  }
  out.terminal = f.deriv(0.0) - 2.0 * f.deriv(kPi / static_cast<double>(spec.m));
  return out;
}

}  // namespace oscsync
