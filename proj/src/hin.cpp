#include "hinmhp/hin.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>

namespace hinmhp {

int EdgeKindSet::size() const { return std::popcount(bits_); }

std::vector<EdgeKind> EdgeKindSet::kinds() const {
  std::vector<EdgeKind> out;
  for (auto k : kAllEdgeKinds)
    if (contains(k)) out.push_back(k);
  return out;
}

std::string EdgeKindSet::label() const {
  std::string out;
  for (auto k : kAllEdgeKinds)
    if (contains(k)) out.push_back(acronym(k));
  return out;
}

std::optional<EdgeKindSet> EdgeKindSet::parse_label(std::string_view s) {
  EdgeKindSet set;
  for (char c : s) {
    bool found = false;
    for (auto k : kAllEdgeKinds) {
      if (acronym(k) == c) {
        set.insert(k);
        found = true;
      }
    }
    if (!found) return std::nullopt;
  }
  return set;
}

namespace {

NodeKind row_kind(EdgeKind, int side, NodeKind far) {
  return side == 0 ? NodeKind::Individual : far;
}

}  // namespace

Hin::Hin(Labels labels, EdgeLists edges) : labels_(std::move(labels)), edges_(std::move(edges)) {
  offsets_[0] = 0;
  for (std::size_t k = 0; k < kNodeKindCount; ++k) offsets_[k + 1] = offsets_[k] + labels_[k].size();

  for (std::size_t k = 0; k < kNodeKindCount; ++k) {
    auto& map = lookup_[k];
    map.reserve(labels_[k].size());
    for (std::uint32_t i = 0; i < labels_[k].size(); ++i) map.emplace(labels_[k][i], i);
  }

  for (auto kind : kAllEdgeKinds) {
    const auto far = far_kind(kind);
    auto& list = edges_[to_index(kind)];
    const auto n_ind = labels_[to_index(NodeKind::Individual)].size();
    const auto n_far = labels_[to_index(far)].size();
    for (auto& e : list) {
      if (e.u >= n_ind || e.v >= n_far)
        throw Error("edge of kind " + std::string(name(kind)) + " references a node index out of range");
      if (kind == EdgeKind::II && e.u > e.v) std::swap(e.u, e.v);
    }

    for (int s = 0; s < 2; ++s) {
      if (kind == EdgeKind::II && s == 1) continue;
      const auto rows = row_kind(kind, s, far);
      const auto n_rows = labels_[to_index(rows)].size();
      Csr csr;
      csr.offsets.assign(n_rows + 1, 0);
      auto bump = [&](std::uint32_t r) { ++csr.offsets[r + 1]; };
      for (const auto& e : list) {
        if (kind == EdgeKind::II) {
          bump(e.u);
          if (e.u != e.v) bump(e.v);
        } else {
          bump(s == 0 ? e.u : e.v);
        }
      }
      std::partial_sum(csr.offsets.begin(), csr.offsets.end(), csr.offsets.begin());
      std::vector<std::pair<std::uint32_t, double>> tmp(csr.offsets.back());
      std::vector<std::uint32_t> fill(csr.offsets.begin(), csr.offsets.end() - 1);
      auto put = [&](std::uint32_t r, std::uint32_t t, double w) { tmp[fill[r]++] = {t, w}; };
      for (const auto& e : list) {
        if (kind == EdgeKind::II) {
          put(e.u, e.v, e.weight);
          if (e.u != e.v) put(e.v, e.u, e.weight);
        } else if (s == 0) {
          put(e.u, e.v, e.weight);
        } else {
          put(e.v, e.u, e.weight);
        }
      }
      for (std::size_t r = 0; r < n_rows; ++r) {
        std::stable_sort(tmp.begin() + csr.offsets[r], tmp.begin() + csr.offsets[r + 1],
                         [](const auto& a, const auto& b) { return a.first < b.first; });
      }
      csr.targets.reserve(tmp.size());
      csr.weights.reserve(tmp.size());
      for (const auto& [t, w] : tmp) {
        csr.targets.push_back(t);
        csr.weights.push_back(w);
      }
      adj_[to_index(kind)][s] = std::move(csr);
    }
  }
}

std::size_t Hin::edge_count() const {
  std::size_t total = 0;
  for (const auto& l : edges_) total += l.size();
  return total;
}

void Hin::check_node(NodeId n) const {
  if (n.index >= node_count(n.kind))
    throw Error("unknown node: " + std::string(name(n.kind)) + "#" + std::to_string(n.index));
}

const std::string& Hin::label(NodeId n) const {
  check_node(n);
  return labels_[to_index(n.kind)][n.index];
}

std::optional<NodeId> Hin::find(NodeKind k, std::string_view label) const {
  const auto& map = lookup_[to_index(k)];
  auto it = map.find(std::string(label));
  if (it == map.end()) return std::nullopt;
  return NodeId{k, it->second};
}

NodeId Hin::from_global(std::size_t g) const {
  for (std::size_t k = 0; k < kNodeKindCount; ++k) {
    if (g < offsets_[k + 1])
      return NodeId{static_cast<NodeKind>(k), static_cast<std::uint32_t>(g - offsets_[k])};
  }
  throw Error("global node index out of range: " + std::to_string(g));
}

const Hin::Csr& Hin::side(NodeId node, EdgeKind kind) const {
  check_node(node);
  if (!is_endpoint(kind, node.kind))
    throw Error("edge kind " + std::string(name(kind)) + " is incompatible with node kind " +
                std::string(name(node.kind)));
  const int s = node.kind == NodeKind::Individual ? 0 : 1;
  return adj_[to_index(kind)][s];
}

std::span<const std::uint32_t> Hin::adjacent(NodeId node, EdgeKind kind) const {
  const auto& csr = side(node, kind);
  return std::span<const std::uint32_t>(csr.targets).subspan(
      csr.offsets[node.index], csr.offsets[node.index + 1] - csr.offsets[node.index]);
}

std::span<const double> Hin::adjacent_weights(NodeId node, EdgeKind kind) const {
  const auto& csr = side(node, kind);
  return std::span<const double>(csr.weights).subspan(
      csr.offsets[node.index], csr.offsets[node.index + 1] - csr.offsets[node.index]);
}

std::vector<Neighbor> Hin::neighbors(NodeId node, EdgeKind kind) const {
  const auto idx = adjacent(node, kind);
  const auto w = adjacent_weights(node, kind);
  const NodeKind other = node.kind == NodeKind::Individual ? far_kind(kind) : NodeKind::Individual;
  std::vector<Neighbor> out;
  out.reserve(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out.push_back({NodeId{other, idx[i]}, w[i]});
  return out;
}

Hin Hin::mask_target_edges(std::span<const NodeId> individuals) const {
  std::vector<bool> masked(node_count(NodeKind::Individual), false);
  for (auto n : individuals) {
    if (n.kind != NodeKind::Individual)
      throw Error("mask_target_edges: node of kind " + std::string(name(n.kind)) +
                  " is not an Individual");
    check_node(n);
    masked[n.index] = true;
  }
  EdgeLists edges = edges_;
  auto& im = edges[to_index(EdgeKind::IM)];
  std::erase_if(im, [&](const Edge& e) { return masked[e.u]; });
  return Hin(labels_, std::move(edges));
}

Hin Hin::restrict_edge_kinds(EdgeKindSet kinds) const {
  if (kinds.contains(EdgeKind::IM))
    throw Error("restrict_edge_kinds: the target kind IM is always retained and may not be passed");
  if (kinds.empty()) throw Error("restrict_edge_kinds: empty edge-kind set");
  EdgeLists edges;
  for (auto k : kAllEdgeKinds)
    if (kinds.contains(k) || k == EdgeKind::IM) edges[to_index(k)] = edges_[to_index(k)];
  return Hin(labels_, std::move(edges));
}

Hin Hin::without_target() const {
  EdgeLists edges = edges_;
  edges[to_index(EdgeKind::IM)].clear();
  return Hin(labels_, std::move(edges));
}

double apply_weight_mode(double w, WeightMode mode) noexcept {
  switch (mode) {
    case WeightMode::Raw: return w;
    case WeightMode::Binary: return 1.0;
    case WeightMode::Log1p: return std::log1p(w);
  }
  return w;
}

Eigen::SparseMatrix<double> slice_matrix(const Hin& hin, EdgeKind kind, WeightMode mode) {
  const auto n = static_cast<Eigen::Index>(hin.node_count());
  const auto off_u = hin.kind_offset(NodeKind::Individual);
  const auto off_v = hin.kind_offset(far_kind(kind));
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(hin.edge_count(kind) * 2);
  for (const auto& e : hin.edges(kind)) {
    const auto a = static_cast<Eigen::Index>(off_u + e.u);
    const auto b = static_cast<Eigen::Index>(off_v + e.v);
    const double w = apply_weight_mode(e.weight, mode);
    trips.emplace_back(a, b, w);
    if (a != b) trips.emplace_back(b, a, w);
  }
  Eigen::SparseMatrix<double> m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

std::vector<Diagnostic> validate(const Hin& hin) {
  std::vector<Diagnostic> out;
  auto ind_label = [&](std::uint32_t i) { return "individual '" + hin.labels(NodeKind::Individual)[i] + "'"; };

  for (auto k : kAllNodeKinds) {
    std::set<std::string_view> seen;
    for (const auto& l : hin.labels(k)) {
      if (!seen.insert(l).second)
        out.push_back({"unique-labels", std::string(name(k)) + " '" + l + "'", "duplicate node label"});
    }
  }
  if (hin.node_count(NodeKind::MentalHealth) != 2) {
    out.push_back({"mental-health-nodes", "mental_health",
                   "expected exactly 2 mental-health nodes, found " +
                       std::to_string(hin.node_count(NodeKind::MentalHealth))});
  }

  for (auto kind : kAllEdgeKinds) {
    std::set<std::pair<std::uint32_t, std::uint32_t>> pairs;
    for (const auto& e : hin.edges(kind)) {
      const std::string elem = std::string(name(kind)) + " edge (" + std::to_string(e.u) + "," +
                               std::to_string(e.v) + ")";
      if (kind == EdgeKind::II && e.u == e.v) out.push_back({"no-self-loops", elem, "self-loop"});
      if (!pairs.insert({e.u, e.v}).second) out.push_back({"no-duplicate-edges", elem, "duplicate edge"});
      if (!std::isfinite(e.weight) || e.weight <= 0.0) {
        out.push_back({"positive-weight", elem, "weight must be positive"});
      } else if (kind == EdgeKind::II) {
        if (std::floor(e.weight) != e.weight)
          out.push_back({"integer-sms-weight", elem, "II weight must be a positive integer"});
      } else if (e.weight != 1.0) {
        out.push_back({"unit-weight", elem, "non-II edges must have weight 1"});
      }
    }
  }

  const auto n_ind = hin.node_count(NodeKind::Individual);
  for (auto kind : {EdgeKind::IP, EdgeKind::IS, EdgeKind::IF, EdgeKind::IW, EdgeKind::IM}) {
    std::vector<int> degree(n_ind, 0);
    for (const auto& e : hin.edges(kind)) ++degree[e.u];
    for (std::uint32_t i = 0; i < n_ind; ++i) {
      if (kind == EdgeKind::IM) {
        if (degree[i] > 1)
          out.push_back({"at-most-one-target-edge", ind_label(i),
                         "has " + std::to_string(degree[i]) + " IM edges"});
      } else if (degree[i] != 1) {
        out.push_back({"one-edge-per-trait-kind", ind_label(i),
                       "has " + std::to_string(degree[i]) + " " + std::string(name(kind)) + " edges"});
      }
    }
  }
  return out;
}

}  // namespace hinmhp
