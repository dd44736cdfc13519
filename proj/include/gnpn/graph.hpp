#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "gnpn/matcore.hpp"

namespace gnpn {

/// Unordered pair stored as (lo, hi), lo < hi.
struct Edge {
  std::size_t lo;
  std::size_t hi;

  Edge(std::size_t a, std::size_t b);
  auto operator<=>(const Edge&) const = default;
};

/// Undirected simple graph on {0, ..., dim-1}. Edges are kept sorted
/// lexicographically and unique.
class GraphStructure {
 public:
  explicit GraphStructure(std::size_t dim) : dim_(dim) {}
  GraphStructure(std::size_t dim, std::vector<Edge> edges);

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  bool has_edge(std::size_t i, std::size_t j) const;

  /// Graph whose edges are the nonzero off-diagonal entries of m.
  static GraphStructure from_support(const SymmetricMatrix& m);

  /// Relabels vertex v as perm[v].
  GraphStructure permuted(const std::vector<std::size_t>& perm) const;

  bool operator==(const GraphStructure&) const = default;

 private:
  std::size_t dim_;
  std::vector<Edge> edges_;
};

/// True if every edge of `sub` is an edge of `super` (same dim).
bool is_subgraph(const GraphStructure& sub, const GraphStructure& super);

}  // namespace gnpn
