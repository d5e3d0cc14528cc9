#include "hinmhp/walks.hpp"

#include <algorithm>
#include <ostream>

#include "hinmhp/rng.hpp"

namespace hinmhp {

Metapath Metapath::parse(std::string_view text) {
  Metapath mp;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto dash = std::min(text.find('-', pos), text.size());
    const auto part = text.substr(pos, dash - pos);
    const auto it = std::find_if(kAllNodeKinds.begin(), kAllNodeKinds.end(),
                                 [&](NodeKind k) { return part.size() == 1 && letter(k) == part[0]; });
    if (it == kAllNodeKinds.end()) throw Error("metapath: unknown node kind '" + std::string(part) + "'");
    mp.kinds.push_back(*it);
    pos = dash + 1;
  }
  check_metapath(mp);
  return mp;
}

std::string Metapath::label() const {
  std::string s;
  for (auto k : kinds) {
    if (!s.empty()) s.push_back('-');
    s.push_back(letter(k));
  }
  return s;
}

void check_metapath(const Metapath& mp) {
  const auto& k = mp.kinds;
  if (k.size() < 3 || k.size() % 2 == 0)
    throw Error("metapath: length must be odd and at least 3 (" + mp.label() + ")");
  if (k.front() != NodeKind::Individual || k.back() != NodeKind::Individual)
    throw Error("metapath: must start and end at Individual (" + mp.label() + ")");
  for (std::size_t i = 0; i + 1 < k.size(); ++i)
    if (k[i] != NodeKind::Individual && k[i + 1] != NodeKind::Individual)
      throw Error("metapath: no edge kind joins " + std::string(name(k[i])) + " and " + std::string(name(k[i + 1])));
}

std::vector<Metapath> side_metapaths() {
  return {Metapath::parse("I-P-I"), Metapath::parse("I-S-I"), Metapath::parse("I-F-I"), Metapath::parse("I-W-I")};
}

std::vector<Metapath> herec_metapaths() {
  return {Metapath::parse("I-W-I"), Metapath::parse("I-P-I"), Metapath::parse("I-S-I"), Metapath::parse("I-F-I"),
          Metapath::parse("I-M-I")};
}

std::size_t WalkCorpus::token_count() const {
  std::size_t n = 0;
  for (const auto& w : walks) n += w.size();
  return n;
}

namespace {

void check_params(const WalkParams& p) {
  if (p.length < 1) throw Error("random_walks: length must be >= 1");
  if (p.walks_per_node < 1) throw Error("random_walks: walks_per_node must be >= 1");
}

std::vector<std::uint32_t> one_walk(const Graph& g, std::uint32_t start, std::size_t w, const WalkParams& p) {
  Rng rng(derive_seed(p.seed, {start, w}));
  std::vector<std::uint32_t> walk;
  walk.reserve(p.length);
  walk.push_back(start);
  while (walk.size() < p.length) {
    const auto nb = g.neighbors(walk.back());
    if (nb.empty()) break;
    std::size_t pick;
    if (p.weighted) {
      const auto ws = g.weights(walk.back());
      double total = 0;
      for (double x : ws) total += x;
      double r = uniform01(rng) * total;
      pick = 0;
      while (pick + 1 < ws.size() && r >= ws[pick]) r -= ws[pick++];
    } else {
      pick = uniform_index(rng, nb.size());
    }
    walk.push_back(nb[pick]);
  }
  return walk;
}

std::vector<NodeKind> graph_kinds(const Graph& g) {
  std::vector<NodeKind> kinds(g.size());
  for (std::uint32_t v = 0; v < g.size(); ++v) kinds[v] = g.color(v);
  return kinds;
}

}  // namespace

WalkCorpus random_walks(const Graph& graph, const WalkParams& params) {
  check_params(params);
  if (graph.size() == 0) throw Error("random_walks: empty graph");
  WalkCorpus c;
  c.kinds = graph_kinds(graph);
  c.walks.resize(graph.size() * params.walks_per_node);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t v = 0; v < static_cast<std::int64_t>(graph.size()); ++v)
    for (std::size_t w = 0; w < params.walks_per_node; ++w)
      c.walks[static_cast<std::size_t>(v) * params.walks_per_node + w] =
          one_walk(graph, static_cast<std::uint32_t>(v), w, params);
  return c;
}

WalkCorpus random_walks_serial(const Graph& graph, const WalkParams& params) {
  check_params(params);
  if (graph.size() == 0) throw Error("random_walks: empty graph");
  WalkCorpus c;
  c.kinds = graph_kinds(graph);
  c.walks.reserve(graph.size() * params.walks_per_node);
  for (std::uint32_t v = 0; v < graph.size(); ++v)
    for (std::size_t w = 0; w < params.walks_per_node; ++w) c.walks.push_back(one_walk(graph, v, w, params));
  return c;
}

WalkCorpus metapath_walks(const Hin& hin, const Metapath& mp, const MetapathWalkParams& params) {
  check_metapath(mp);
  if (params.walks_per_node < 1) throw Error("metapath_walks: walks_per_node must be >= 1");
  if (params.repeats < 1) throw Error("metapath_walks: repeats must be >= 1");
  std::uint64_t code = 0;
  for (auto k : mp.kinds) code = code * 8 + to_index(k) + 1;

  WalkCorpus c;
  c.kinds = std::vector<NodeKind>(hin.node_count());
  for (std::size_t g = 0; g < hin.node_count(); ++g) c.kinds[g] = hin.from_global(g).kind;
  const std::size_t n = hin.node_count(NodeKind::Individual);
  const std::size_t steps = (mp.kinds.size() - 1) * params.repeats;
  c.walks.resize(n * params.walks_per_node);

#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
    const auto start = static_cast<std::uint32_t>(i);
    for (std::size_t w = 0; w < params.walks_per_node; ++w) {
      Rng rng(derive_seed(params.seed, {code, start, w}));
      NodeId cur{NodeKind::Individual, start};
      auto& walk = c.walks[static_cast<std::size_t>(i) * params.walks_per_node + w];
      walk.reserve(steps + 1);
      walk.push_back(static_cast<std::uint32_t>(hin.global_index(cur)));
      for (std::size_t s = 0; s < steps; ++s) {
        const auto next_kind = mp.kinds[s % (mp.kinds.size() - 1) + 1];
        const auto ek = edge_kind_to(cur.kind == NodeKind::Individual ? next_kind : cur.kind);
        const auto nb = hin.adjacent(cur, ek);
        if (nb.empty()) break;
        cur = NodeId{next_kind, nb[uniform_index(rng, nb.size())]};
        walk.push_back(static_cast<std::uint32_t>(hin.global_index(cur)));
      }
    }
  }
  return c;
}

WalkCorpus concat(std::span<const WalkCorpus> parts) {
  WalkCorpus out;
  if (parts.empty()) return out;
  out.kinds = parts.front().kinds;
  for (const auto& p : parts) {
    if (p.kinds != out.kinds) throw Error("concat: corpora over different node sets");
    out.walks.insert(out.walks.end(), p.walks.begin(), p.walks.end());
  }
  return out;
}

WalkCorpus side_metapath_corpus(const Hin& hin, const MetapathWalkParams& mp_params, const WalkParams& ii_params) {
  std::vector<WalkCorpus> parts;
  for (const auto& mp : side_metapaths()) parts.push_back(metapath_walks(hin, mp, mp_params));

  // Individuals come first in global order, so SMS-graph ids are global ids.
  std::vector<Graph::WeightedEdge> sms;
  for (const auto& e : hin.edges(EdgeKind::II)) sms.push_back({e.u, e.v, e.weight});
  auto ii = random_walks(Graph(hin.node_count(NodeKind::Individual), sms), ii_params);
  ii.kinds = parts.front().kinds;
  parts.push_back(std::move(ii));
  return concat(parts);
}

std::vector<std::string> global_labels(const Hin& hin) {
  std::vector<std::string> out;
  out.reserve(hin.node_count());
  for (auto k : kAllNodeKinds)
    for (const auto& l : hin.labels(k)) out.push_back(l);
  return out;
}

void write_corpus(std::ostream& out, const WalkCorpus& corpus, std::span<const std::string> labels) {
  if (labels.size() != corpus.node_count()) throw Error("write_corpus: label count does not match node count");
  for (const auto& walk : corpus.walks) {
    for (std::size_t i = 0; i < walk.size(); ++i) {
      if (i) out << ' ';
      out << labels[walk[i]];
    }
    out << '\n';
  }
}

}  // namespace hinmhp
