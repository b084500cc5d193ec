#pragma once

#include <cstddef>
#include <cstdint>
#include <ranges>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "oscsync/common.hpp"

namespace oscsync {

/// Oriented edge. The orientation is bookkeeping only: tail -> head.
struct Edge {
  std::size_t tail;
  std::size_t head;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected simple graph with a fixed orientation given by input order.
/// Immutable after construction.
class Graph {
 public:
  Graph() = default;

  std::size_t num_vertices() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  const Edge& edge(std::size_t e) const { return edges_.at(e); }

  /// Edge indices incident to vertex v.
  std::span<const std::size_t> incident(std::size_t v) const { return incident_.at(v); }
  std::vector<std::size_t> neighbors(std::size_t v) const;
  std::size_t degree(std::size_t v) const { return incident_.at(v).size(); }

  friend Graph build_graph(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> pairs);

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> incident_;
};

/// Validates and builds a graph. Throws Error{DuplicateEdge|SelfLoop|IndexOutOfRange}.
Graph build_graph(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> pairs);

inline Graph build_graph(std::size_t n, std::initializer_list<std::pair<std::size_t, std::size_t>> pairs) {
  return build_graph(n, std::span<const std::pair<std::size_t, std::size_t>>(pairs.begin(), pairs.size()));
}

Graph complete_graph(std::size_t n);
Graph ring_graph(std::size_t n);
Graph path_graph(std::size_t n);
/// Vertex i joined to i + o (mod n) for every offset o; duplicates collapsed.
Graph circulant_graph(std::size_t n, std::span<const std::size_t> offsets);
/// The six-node network in which every node links to its four nearest neighbours.
Graph example4_graph();

/// N x |E| oriented incidence matrix: +1 at head, -1 at tail.
Eigen::MatrixXd incidence(const Graph& g);

bool is_connected(const Graph& g);

/// Largest vertex count accepted by the exhaustive partition enumeration.
inline constexpr std::size_t kMaxExhaustiveVertices = 25;

/// Vertex bipartition (V-, V+). Membership true means the vertex is in V+.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<bool> plus) : plus_(std::move(plus)) {}

  /// Bit i of mask set means vertex i is in V+. Requires n <= 64.
  static Partition from_mask(std::size_t n, std::uint64_t mask);
  /// Partition with exactly `minus` on the V- side.
  static Partition from_minus_set(std::size_t n, std::span<const std::size_t> minus);

  std::size_t size() const noexcept { return plus_.size(); }
  bool in_plus(std::size_t v) const { return plus_.at(v); }
  bool valid() const;
  std::uint64_t mask() const;
  std::vector<std::size_t> plus_vertices() const;
  std::vector<std::size_t> minus_vertices() const;
  Partition complement() const;
  /// Representative with vertex 0 on the V- side.
  Partition normalized() const;
  /// x_P: -1/2 on V-, +1/2 on V+.
  Eigen::VectorXd indicator() const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<bool> plus_;
};

/// Number of bipartitions with vertex 0 pinned to V-: 2^(N-1) - 1.
std::uint64_t partition_count(const Graph& g);

/// Every bipartition exactly once (vertex 0 pinned to V-), as a lazy view.
/// Throws Error{TooLarge} when N exceeds kMaxExhaustiveVertices.
inline auto enumerate_partitions(const Graph& g) {
  const std::size_t n = g.num_vertices();
  if (n > kMaxExhaustiveVertices) {
    throw Error(ErrorCode::TooLarge, "exhaustive partition enumeration requires N <= 25");
  }
  return std::views::iota(std::uint64_t{1}, partition_count(g) + 1) |
         std::views::transform([n](std::uint64_t idx) { return Partition::from_mask(n, idx << 1); });
}

struct CutEdge {
  std::size_t edge;
  int sign;  // +1 when the edge goes from V- to V+, -1 otherwise

  friend bool operator==(const CutEdge&, const CutEdge&) = default;
};

/// Signed cut edges in edge order. Throws Error{EmptySide} for a degenerate partition.
std::vector<CutEdge> cut_edges(const Graph& g, const Partition& p);

/// Dense signed cut vector c_P (length |E|).
Eigen::VectorXd cut_vector(const Graph& g, const Partition& p);

}  // namespace oscsync
