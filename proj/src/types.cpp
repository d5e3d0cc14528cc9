#include "hinmhp/types.hpp"

namespace hinmhp {

std::string_view name(NodeKind k) noexcept {
  switch (k) {
    case NodeKind::Individual: return "individual";
    case NodeKind::PersonalityTraits: return "personality_traits";
    case NodeKind::SocialStatus: return "social_status";
    case NodeKind::PhysicalHealth: return "physical_health";
    case NodeKind::WellBeing: return "well_being";
    case NodeKind::MentalHealth: return "mental_health";
  }
  return "?";
}

std::string_view name(EdgeKind k) noexcept {
  switch (k) {
    case EdgeKind::II: return "II";
    case EdgeKind::IP: return "IP";
    case EdgeKind::IS: return "IS";
    case EdgeKind::IF: return "IF";
    case EdgeKind::IW: return "IW";
    case EdgeKind::IM: return "IM";
  }
  return "?";
}

char letter(NodeKind k) noexcept {
  constexpr char kLetters[] = {'I', 'P', 'S', 'F', 'W', 'M'};
  return kLetters[to_index(k)];
}

char acronym(EdgeKind k) noexcept { return letter(far_kind(k)); }

std::optional<NodeKind> parse_node_kind(std::string_view s) noexcept {
  for (auto k : kAllNodeKinds) {
    if (name(k) == s) return k;
  }
  return std::nullopt;
}

std::optional<EdgeKind> parse_edge_kind(std::string_view s) noexcept {
  for (auto k : kAllEdgeKinds) {
    if (name(k) == s) return k;
  }
  return std::nullopt;
}

std::string_view name(Condition c) noexcept {
  return c == Condition::Depression ? "depression" : "anxiety";
}

std::optional<Condition> parse_condition(std::string_view s) noexcept {
  if (s == "depression") return Condition::Depression;
  if (s == "anxiety") return Condition::Anxiety;
  return std::nullopt;
}

}  // namespace hinmhp
