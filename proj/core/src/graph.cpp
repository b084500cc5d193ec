#include "oscsync/graph.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <string>

namespace oscsync {

Graph build_graph(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> pairs) {
  if (n == 0) throw Error(ErrorCode::BadShape, "graph needs at least one vertex");
  Graph g;
  g.n_ = n;
  g.incident_.resize(n);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& [a, b] : pairs) {
    if (a >= n || b >= n) {
      throw Error(ErrorCode::IndexOutOfRange,
                  "edge (" + std::to_string(a) + "," + std::to_string(b) + ") outside [0," + std::to_string(n) + ")");
    }
    if (a == b) throw Error(ErrorCode::SelfLoop, "self-loop at vertex " + std::to_string(a));
    if (!seen.emplace(std::min(a, b), std::max(a, b)).second) {
      throw Error(ErrorCode::DuplicateEdge,
                  "edge {" + std::to_string(a) + "," + std::to_string(b) + "} appears twice");
    }
    const std::size_t e = g.edges_.size();
    g.edges_.push_back({a, b});
    g.incident_[a].push_back(e);
    g.incident_[b].push_back(e);
  }
  return g;
}

std::vector<std::size_t> Graph::neighbors(std::size_t v) const {
  std::vector<std::size_t> out;
  for (std::size_t e : incident_.at(v)) {
    const Edge& ed = edges_[e];
    out.push_back(ed.tail == v ? ed.head : ed.tail);
  }
  return out;
}

Graph complete_graph(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  return build_graph(n, pairs);
}

Graph ring_graph(std::size_t n) {
  const std::size_t offsets[] = {1};
  return circulant_graph(n, offsets);
}

Graph path_graph(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i + 1 < n; ++i) pairs.emplace_back(i, i + 1);
  return build_graph(n, pairs);
}

Graph circulant_graph(std::size_t n, std::span<const std::size_t> offsets) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t o : offsets) {
      const std::size_t j = (i + o) % n;
      if (j == i) continue;
      if (seen.emplace(std::min(i, j), std::max(i, j)).second) pairs.emplace_back(i, j);
    }
  }
  return build_graph(n, pairs);
}

Graph example4_graph() {
  const std::size_t offsets[] = {1, 2};
  return circulant_graph(6, offsets);
}

Eigen::MatrixXd incidence(const Graph& g) {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(g.num_vertices()),
                                            static_cast<Eigen::Index>(g.num_edges()));
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    b(static_cast<Eigen::Index>(ed.head), static_cast<Eigen::Index>(e)) = 1.0;
    b(static_cast<Eigen::Index>(ed.tail), static_cast<Eigen::Index>(e)) = -1.0;
  }
  return b;
}

bool is_connected(const Graph& g) {
  const std::size_t n = g.num_vertices();
  if (n == 0) return false;
  std::vector<bool> seen(n, false);
  std::queue<std::size_t> q;
  q.push(0);
  seen[0] = true;
  std::size_t reached = 1;
  while (!q.empty()) {
    const std::size_t v = q.front();
    q.pop();
    for (std::size_t w : g.neighbors(v)) {
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        q.push(w);
      }
    }
  }
  return reached == n;
}

Partition Partition::from_mask(std::size_t n, std::uint64_t mask) {
  if (n > 64) throw Error(ErrorCode::TooLarge, "mask partitions hold at most 64 vertices");
  std::vector<bool> plus(n);
  for (std::size_t i = 0; i < n; ++i) plus[i] = ((mask >> i) & 1u) != 0;
  return Partition(std::move(plus));
}

Partition Partition::from_minus_set(std::size_t n, std::span<const std::size_t> minus) {
  std::vector<bool> plus(n, true);
  for (std::size_t v : minus) {
    if (v >= n) throw Error(ErrorCode::IndexOutOfRange, "partition vertex " + std::to_string(v));
    plus[v] = false;
  }
  return Partition(std::move(plus));
}

bool Partition::valid() const {
  const auto plus_count = static_cast<std::size_t>(std::count(plus_.begin(), plus_.end(), true));
  return plus_count > 0 && plus_count < plus_.size();
}

std::uint64_t Partition::mask() const {
  if (plus_.size() > 64) throw Error(ErrorCode::TooLarge, "mask() requires N <= 64");
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < plus_.size(); ++i)
    if (plus_[i]) m |= std::uint64_t{1} << i;
  return m;
}

std::vector<std::size_t> Partition::plus_vertices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < plus_.size(); ++i)
    if (plus_[i]) out.push_back(i);
  return out;
}

std::vector<std::size_t> Partition::minus_vertices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < plus_.size(); ++i)
    if (!plus_[i]) out.push_back(i);
  return out;
}

Partition Partition::complement() const {
  std::vector<bool> flipped(plus_.size());
  for (std::size_t i = 0; i < plus_.size(); ++i) flipped[i] = !plus_[i];
  return Partition(std::move(flipped));
}

Partition Partition::normalized() const {
  if (!plus_.empty() && plus_[0]) return complement();
  return *this;
}

Eigen::VectorXd Partition::indicator() const {
  Eigen::VectorXd x(static_cast<Eigen::Index>(plus_.size()));
  for (std::size_t i = 0; i < plus_.size(); ++i) x[static_cast<Eigen::Index>(i)] = plus_[i] ? 0.5 : -0.5;
  return x;
}

std::uint64_t partition_count(const Graph& g) {
  const std::size_t n = g.num_vertices();
  if (n > kMaxExhaustiveVertices) {
    throw Error(ErrorCode::TooLarge, "exhaustive partition enumeration requires N <= 25");
  }
  if (n < 2) return 0;
  return (std::uint64_t{1} << (n - 1)) - 1;
}

std::vector<CutEdge> cut_edges(const Graph& g, const Partition& p) {
  if (p.size() != g.num_vertices()) {
    throw Error(ErrorCode::BadShape, "partition size does not match graph");
  }
  if (!p.valid()) throw Error(ErrorCode::EmptySide, "partition has an empty side");
  std::vector<CutEdge> out;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    const bool t = p.in_plus(ed.tail);
    const bool h = p.in_plus(ed.head);
    if (t != h) out.push_back({e, h ? +1 : -1});
  }
  return out;
}

Eigen::VectorXd cut_vector(const Graph& g, const Partition& p) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.num_edges()));
  for (const CutEdge& ce : cut_edges(g, p)) c[static_cast<Eigen::Index>(ce.edge)] = ce.sign;
  return c;
}

}  // namespace oscsync
