#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "freemetric/word.hpp"

namespace fm {

/// Folded core graph of a finitely generated subgroup of a free group.
/// Vertex 0 is the base vertex. Each undirected edge is stored once per
/// endpoint: v --l--> w together with w --l^-1--> v.
class StallingsGraph {
 public:
  static StallingsGraph fold(const BasisPtr& basis, std::span<const Word> generators);

  const BasisPtr& basis() const { return basis_; }
  std::size_t vertex_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  /// Rank of the subgroup: edges - vertices + 1.
  std::size_t rank() const { return edge_count_ + 1 - adjacency_.size(); }

  /// True iff `w` reads a closed path at the base vertex.
  bool contains(const Word& w) const;

  struct Edge {
    std::uint32_t from;
    Letter label;  ///< always a positive letter
    std::uint32_t to;
  };
  /// Positive-labelled edges, sorted.
  std::vector<Edge> edges() const;

 private:
  BasisPtr basis_;
  std::vector<std::map<std::uint16_t, std::uint32_t>> adjacency_;
  std::size_t edge_count_ = 0;
};

}  // namespace fm
