#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hinmhp {

/// Raised for precondition and schema violations across the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class NodeKind : std::uint8_t {
  Individual = 0,
  PersonalityTraits = 1,
  SocialStatus = 2,
  PhysicalHealth = 3,
  WellBeing = 4,
  MentalHealth = 5,
};

inline constexpr std::size_t kNodeKindCount = 6;

inline constexpr std::array<NodeKind, kNodeKindCount> kAllNodeKinds = {
    NodeKind::Individual,     NodeKind::PersonalityTraits, NodeKind::SocialStatus,
    NodeKind::PhysicalHealth, NodeKind::WellBeing,         NodeKind::MentalHealth};

/// Edge kinds, each joining Individual to one node kind. IM is the target.
enum class EdgeKind : std::uint8_t {
  II = 0,
  IP = 1,
  IS = 2,
  IF = 3,
  IW = 4,
  IM = 5,
};

inline constexpr std::size_t kEdgeKindCount = 6;

inline constexpr std::array<EdgeKind, kEdgeKindCount> kAllEdgeKinds = {
    EdgeKind::II, EdgeKind::IP, EdgeKind::IS, EdgeKind::IF, EdgeKind::IW, EdgeKind::IM};

inline constexpr std::array<EdgeKind, 5> kSideEdgeKinds = {
    EdgeKind::II, EdgeKind::IP, EdgeKind::IS, EdgeKind::IF, EdgeKind::IW};

constexpr std::size_t to_index(NodeKind k) noexcept { return static_cast<std::size_t>(k); }
constexpr std::size_t to_index(EdgeKind k) noexcept { return static_cast<std::size_t>(k); }

constexpr bool is_target(EdgeKind k) noexcept { return k == EdgeKind::IM; }

/// The non-Individual endpoint of an edge kind (Individual for II).
constexpr NodeKind far_kind(EdgeKind k) noexcept {
  switch (k) {
    case EdgeKind::II: return NodeKind::Individual;
    case EdgeKind::IP: return NodeKind::PersonalityTraits;
    case EdgeKind::IS: return NodeKind::SocialStatus;
    case EdgeKind::IF: return NodeKind::PhysicalHealth;
    case EdgeKind::IW: return NodeKind::WellBeing;
    case EdgeKind::IM: return NodeKind::MentalHealth;
  }
  return NodeKind::Individual;
}

/// Edge kind joining Individual and `k`.
constexpr EdgeKind edge_kind_to(NodeKind k) noexcept {
  switch (k) {
    case NodeKind::Individual: return EdgeKind::II;
    case NodeKind::PersonalityTraits: return EdgeKind::IP;
    case NodeKind::SocialStatus: return EdgeKind::IS;
    case NodeKind::PhysicalHealth: return EdgeKind::IF;
    case NodeKind::WellBeing: return EdgeKind::IW;
    case NodeKind::MentalHealth: return EdgeKind::IM;
  }
  return EdgeKind::II;
}

constexpr bool is_endpoint(EdgeKind e, NodeKind n) noexcept {
  return n == NodeKind::Individual || n == far_kind(e);
}

std::string_view name(NodeKind k) noexcept;
std::string_view name(EdgeKind k) noexcept;
/// One-letter code used in colour-set labels: I P S F W M.
char letter(NodeKind k) noexcept;
/// Ablation acronym: I P S F W (M for the target).
char acronym(EdgeKind k) noexcept;

std::optional<NodeKind> parse_node_kind(std::string_view s) noexcept;
std::optional<EdgeKind> parse_edge_kind(std::string_view s) noexcept;

struct NodeId {
  NodeKind kind = NodeKind::Individual;
  std::uint32_t index = 0;

  friend constexpr bool operator==(const NodeId&, const NodeId&) = default;
  friend constexpr auto operator<=>(const NodeId&, const NodeId&) = default;
};

enum class Condition : std::uint8_t { Depression, Anxiety };

std::string_view name(Condition c) noexcept;
std::optional<Condition> parse_condition(std::string_view s) noexcept;

/// Index of the "positive" and "negative" MentalHealth nodes.
inline constexpr std::uint32_t kPositiveState = 0;
inline constexpr std::uint32_t kNegativeState = 1;

}  // namespace hinmhp
