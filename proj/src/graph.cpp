#include "hinmhp/graph.hpp"

#include <algorithm>
#include <numeric>

namespace hinmhp {

Graph::Graph(std::size_t n, std::span<const WeightedEdge> edges, std::vector<NodeKind> colors)
    : colors_(std::move(colors)) {
  if (!colors_.empty() && colors_.size() != n) throw Error("graph: colour count does not match node count");
  std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> arcs;
  arcs.reserve(edges.size() * 2);
  for (const auto& e : edges) {
    if (e.u >= n || e.v >= n) throw Error("graph: edge endpoint out of range");
    if (e.u == e.v) throw Error("graph: self-loop at node " + std::to_string(e.u));
    arcs.emplace_back(e.u, e.v, e.weight);
    arcs.emplace_back(e.v, e.u, e.weight);
  }
  std::stable_sort(arcs.begin(), arcs.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
  });
  arcs.erase(std::unique(arcs.begin(), arcs.end(),
                         [](const auto& a, const auto& b) {
                           return std::get<0>(a) == std::get<0>(b) && std::get<1>(a) == std::get<1>(b);
                         }),
             arcs.end());
  offsets_.assign(n + 1, 0);
  for (const auto& a : arcs) ++offsets_[std::get<0>(a) + 1];
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  targets_.reserve(arcs.size());
  weights_.reserve(arcs.size());
  for (const auto& a : arcs) {
    targets_.push_back(std::get<1>(a));
    weights_.push_back(std::get<2>(a));
  }
}

bool Graph::has_edge(std::uint32_t u, std::uint32_t v) const {
  const auto n = neighbors(u);
  return std::binary_search(n.begin(), n.end(), v);
}

Graph homogeneous_view(const Hin& hin, bool include_target) {
  std::vector<Graph::WeightedEdge> edges;
  edges.reserve(hin.edge_count());
  for (auto kind : kAllEdgeKinds) {
    if (is_target(kind) && !include_target) continue;
    const auto off_u = hin.kind_offset(NodeKind::Individual);
    const auto off_v = hin.kind_offset(far_kind(kind));
    for (const auto& e : hin.edges(kind))
      edges.push_back({static_cast<std::uint32_t>(off_u + e.u), static_cast<std::uint32_t>(off_v + e.v), e.weight});
  }
  std::vector<NodeKind> colors(hin.node_count());
  for (std::size_t g = 0; g < colors.size(); ++g) colors[g] = hin.from_global(g).kind;
  return Graph(hin.node_count(), edges, std::move(colors));
}

}  // namespace hinmhp
