#pragma once

#include <cstdint>
#include <span>
#include <tuple>
#include <vector>

#include "hinmhp/hin.hpp"

namespace hinmhp {

/// Undirected simple graph in CSR form with sorted neighbour lists and an
/// optional node colour. Used by the graphlet and random-walk kernels.
class Graph {
 public:
  struct WeightedEdge {
    std::uint32_t u = 0;
    std::uint32_t v = 0;
    double weight = 1.0;
  };

  Graph() = default;
  /// Throws Error on self-loops or out-of-range endpoints. Duplicate edges
  /// are merged (first weight kept).
  Graph(std::size_t n, std::span<const WeightedEdge> edges, std::vector<NodeKind> colors = {});

  std::size_t size() const { return offsets_.size() - 1; }
  std::size_t edge_count() const { return targets_.size() / 2; }
  std::size_t degree(std::uint32_t v) const { return offsets_[v + 1] - offsets_[v]; }
  std::span<const std::uint32_t> neighbors(std::uint32_t v) const {
    return {targets_.data() + offsets_[v], degree(v)};
  }
  std::span<const double> weights(std::uint32_t v) const { return {weights_.data() + offsets_[v], degree(v)}; }
  bool has_edge(std::uint32_t u, std::uint32_t v) const;
  NodeKind color(std::uint32_t v) const { return colors_.empty() ? NodeKind::Individual : colors_[v]; }
  bool colored() const { return !colors_.empty(); }

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint32_t> targets_;
  std::vector<double> weights_;
  std::vector<NodeKind> colors_;
};

/// The HIN as one graph over the global node order, coloured by node kind.
/// Target (IM) edges are left out unless `include_target` is set.
Graph homogeneous_view(const Hin& hin, bool include_target = false);

}  // namespace hinmhp
