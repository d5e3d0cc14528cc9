#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/SparseCore>

#include "hinmhp/types.hpp"

namespace hinmhp {

/// Undirected edge stored once. `u` indexes an Individual; `v` indexes a node
/// of far_kind(kind). II edges are stored with u < v.
struct Edge {
  std::uint32_t u = 0;
  std::uint32_t v = 0;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
  NodeId node;
  double weight = 1.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Small value set over EdgeKind.
class EdgeKindSet {
 public:
  constexpr EdgeKindSet() = default;
  constexpr EdgeKindSet(std::initializer_list<EdgeKind> kinds) {
    for (auto k : kinds) insert(k);
  }
  static constexpr EdgeKindSet from_bits(std::uint8_t bits) {
    EdgeKindSet s;
    s.bits_ = bits & 0x3F;
    return s;
  }
  static constexpr EdgeKindSet side_kinds() {
    return {EdgeKind::II, EdgeKind::IP, EdgeKind::IS, EdgeKind::IF, EdgeKind::IW};
  }

  constexpr void insert(EdgeKind k) { bits_ |= static_cast<std::uint8_t>(1u << to_index(k)); }
  constexpr void erase(EdgeKind k) { bits_ &= static_cast<std::uint8_t>(~(1u << to_index(k))); }
  constexpr bool contains(EdgeKind k) const { return (bits_ >> to_index(k)) & 1u; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint8_t bits() const { return bits_; }
  int size() const;
  std::vector<EdgeKind> kinds() const;
  /// Acronym label in I,P,S,F,W order ("FW", "IPSFW", ...).
  std::string label() const;
  static std::optional<EdgeKindSet> parse_label(std::string_view s);

  friend constexpr bool operator==(const EdgeKindSet&, const EdgeKindSet&) = default;

 private:
  std::uint8_t bits_ = 0;
};

enum class WeightMode { Raw, Binary, Log1p };

/// Typed multigraph over the six node kinds. Immutable once built; the
/// mutating-looking operations return new instances.
class Hin {
 public:
  using Labels = std::array<std::vector<std::string>, kNodeKindCount>;
  using EdgeLists = std::array<std::vector<Edge>, kEdgeKindCount>;

  Hin() = default;
  /// Throws Error when an edge index is out of range for its kinds. Other
  /// invariants are reported by validate(), not enforced here.
  Hin(Labels labels, EdgeLists edges);

  std::size_t node_count(NodeKind k) const { return labels_[to_index(k)].size(); }
  std::size_t node_count() const { return offsets_.back(); }
  std::size_t edge_count(EdgeKind k) const { return edges_[to_index(k)].size(); }
  std::size_t edge_count() const;

  const std::vector<std::string>& labels(NodeKind k) const { return labels_[to_index(k)]; }
  const std::string& label(NodeId n) const;
  std::optional<NodeId> find(NodeKind k, std::string_view label) const;

  std::span<const Edge> edges(EdgeKind k) const { return edges_[to_index(k)]; }

  /// Neighbours of `node` along `kind`, ascending by neighbour index.
  std::vector<Neighbor> neighbors(NodeId node, EdgeKind kind) const;
  /// Allocation-free view of the same adjacency: neighbour indices (in the
  /// opposite endpoint kind) and their weights.
  std::span<const std::uint32_t> adjacent(NodeId node, EdgeKind kind) const;
  std::span<const double> adjacent_weights(NodeId node, EdgeKind kind) const;

  /// Global ordering: kinds in declaration order, then index.
  std::size_t global_index(NodeId n) const { return offsets_[to_index(n.kind)] + n.index; }
  NodeId from_global(std::size_t g) const;
  std::size_t kind_offset(NodeKind k) const { return offsets_[to_index(k)]; }

  Hin mask_target_edges(std::span<const NodeId> individuals) const;
  Hin restrict_edge_kinds(EdgeKindSet kinds) const;
  /// Copy with every IM edge removed.
  Hin without_target() const;

  friend bool operator==(const Hin& a, const Hin& b) {
    return a.labels_ == b.labels_ && a.edges_ == b.edges_;
  }

 private:
  struct Csr {
    std::vector<std::uint32_t> offsets;
    std::vector<std::uint32_t> targets;
    std::vector<double> weights;
  };

  void check_node(NodeId n) const;
  const Csr& side(NodeId node, EdgeKind kind) const;

  Labels labels_;
  EdgeLists edges_;
  std::array<std::size_t, kNodeKindCount + 1> offsets_{};
  // [edge kind][0]: rows are Individuals; [1]: rows are far_kind nodes.
  std::array<std::array<Csr, 2>, kEdgeKindCount> adj_;
  std::array<std::unordered_map<std::string, std::uint32_t>, kNodeKindCount> lookup_;
};

/// |V| x |V| symmetric slice in global node order.
Eigen::SparseMatrix<double> slice_matrix(const Hin& hin, EdgeKind kind,
                                         WeightMode mode = WeightMode::Raw);

double apply_weight_mode(double w, WeightMode mode) noexcept;

struct Diagnostic {
  std::string invariant;
  std::string element;
  std::string message;
};

/// Empty iff every structural invariant holds.
std::vector<Diagnostic> validate(const Hin& hin);

}  // namespace hinmhp
