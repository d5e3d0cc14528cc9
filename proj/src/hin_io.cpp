#include "hinmhp/hin_io.hpp"

#include <fstream>

namespace hinmhp {

nlohmann::json to_json(const Hin& hin) {
  nlohmann::json nodes = nlohmann::json::object();
  for (auto k : kAllNodeKinds) nodes[std::string(name(k))] = hin.labels(k);

  nlohmann::json edges = nlohmann::json::object();
  for (auto kind : kAllEdgeKinds) {
    const auto& u_labels = hin.labels(NodeKind::Individual);
    const auto& v_labels = hin.labels(far_kind(kind));
    auto arr = nlohmann::json::array();
    for (const auto& e : hin.edges(kind)) arr.push_back({u_labels[e.u], v_labels[e.v], e.weight});
    edges[std::string(name(kind))] = std::move(arr);
  }
  return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

Hin hin_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("edges"))
    throw Error("HIN document must contain 'nodes' and 'edges'");
  Hin::Labels labels;
  for (auto k : kAllNodeKinds) {
    const auto key = std::string(name(k));
    if (doc["nodes"].contains(key)) labels[to_index(k)] = doc["nodes"][key].get<std::vector<std::string>>();
  }
  // Label lookup before the Hin exists.
  std::array<std::unordered_map<std::string, std::uint32_t>, kNodeKindCount> index;
  for (auto k : kAllNodeKinds) {
    const auto& l = labels[to_index(k)];
    for (std::uint32_t i = 0; i < l.size(); ++i) index[to_index(k)].emplace(l[i], i);
  }
  auto resolve = [&](NodeKind k, const std::string& label) {
    const auto& map = index[to_index(k)];
    auto it = map.find(label);
    if (it == map.end()) throw Error("edge references unknown " + std::string(name(k)) + " '" + label + "'");
    return it->second;
  };

  Hin::EdgeLists edges;
  for (auto kind : kAllEdgeKinds) {
    const auto key = std::string(name(kind));
    if (!doc["edges"].contains(key)) continue;
    for (const auto& row : doc["edges"][key]) {
      if (!row.is_array() || row.size() != 3) throw Error("edge rows must be [u_label, v_label, weight]");
      Edge e;
      e.u = resolve(NodeKind::Individual, row[0].get<std::string>());
      e.v = resolve(far_kind(kind), row[1].get<std::string>());
      e.weight = row[2].get<double>();
      edges[to_index(kind)].push_back(e);
    }
  }
  return Hin(std::move(labels), std::move(edges));
}

void save_hin(const Hin& hin, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << to_json(hin).dump(1) << '\n';
}

Hin load_hin(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  return hin_from_json(nlohmann::json::parse(in));
}

}  // namespace hinmhp
