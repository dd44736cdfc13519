#include "gnpn/graph.hpp"

#include <algorithm>
#include <string>

#include "gnpn/error.hpp"

namespace gnpn {

Edge::Edge(std::size_t a, std::size_t b) : lo(std::min(a, b)), hi(std::max(a, b)) {
  if (a == b) throw Error(ErrorKind::InvalidArgument, "self-loop on vertex " + std::to_string(a));
}

GraphStructure::GraphStructure(std::size_t dim, std::vector<Edge> edges) : dim_(dim), edges_(std::move(edges)) {
  for (const Edge& e : edges_) {
    if (e.hi >= dim_)
      throw Error(ErrorKind::InvalidArgument, "edge index " + std::to_string(e.hi) + " out of range");
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

bool GraphStructure::has_edge(std::size_t i, std::size_t j) const {
  if (i == j) return false;
  return std::binary_search(edges_.begin(), edges_.end(), Edge(i, j));
}

GraphStructure GraphStructure::from_support(const SymmetricMatrix& m) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = i + 1; j < m.dim(); ++j)
      if (m(i, j) != 0.0) edges.emplace_back(i, j);
  return GraphStructure(m.dim(), std::move(edges));
}

GraphStructure GraphStructure::permuted(const std::vector<std::size_t>& perm) const {
  if (perm.size() != dim_) throw Error(ErrorKind::DimensionMismatch, "permutation size");
  std::vector<Edge> out;
  out.reserve(edges_.size());
  for (const Edge& e : edges_) out.emplace_back(perm.at(e.lo), perm.at(e.hi));
  return GraphStructure(dim_, std::move(out));
}

bool is_subgraph(const GraphStructure& sub, const GraphStructure& super) {
  if (sub.dim() != super.dim()) throw Error(ErrorKind::DimensionMismatch, "is_subgraph");
  return std::includes(super.edges().begin(), super.edges().end(), sub.edges().begin(), sub.edges().end());
}

}  // namespace gnpn
