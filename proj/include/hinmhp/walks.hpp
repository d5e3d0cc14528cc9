#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hinmhp/graph.hpp"
#include "hinmhp/hin.hpp"

namespace hinmhp {

/// Node-kind pattern such as I-P-I. First and last kinds are Individual and
/// every consecutive pair is joined by a schema edge kind.
struct Metapath {
  std::vector<NodeKind> kinds;

  /// Parses letter codes joined by '-', e.g. "I-W-I".
  static Metapath parse(std::string_view text);
  std::string label() const;
  friend bool operator==(const Metapath&, const Metapath&) = default;
};

void check_metapath(const Metapath& mp);

/// I-P-I, I-S-I, I-F-I, I-W-I.
std::vector<Metapath> side_metapaths();
/// The five I-X-I families used by the metapath recommender, in the order
/// I-W-I, I-P-I, I-S-I, I-F-I, I-M-I.
std::vector<Metapath> herec_metapaths();

/// Walks over node ids of a source graph. `kinds[v]` is the kind of node v
/// and its size is the node count.
struct WalkCorpus {
  std::vector<std::vector<std::uint32_t>> walks;
  std::vector<NodeKind> kinds;

  std::size_t node_count() const { return kinds.size(); }
  std::size_t token_count() const;
};

struct WalkParams {
  std::size_t walks_per_node = 10;
  std::size_t length = 80;
  std::uint64_t seed = 1;
  /// Step proportionally to edge weight instead of uniformly.
  bool weighted = false;
};

/// walks_per_node walks from every node; walk (v, w) is stored at index
/// v * walks_per_node + w and draws from its own derived seed.
WalkCorpus random_walks(const Graph& graph, const WalkParams& params);
WalkCorpus random_walks_serial(const Graph& graph, const WalkParams& params);

struct MetapathWalkParams {
  std::size_t walks_per_node = 10;
  std::size_t repeats = 20;
  std::uint64_t seed = 1;
};

/// Walks from every Individual following `mp` repeatedly; node ids are HIN
/// global indices. A walk stops early when no neighbour of the next kind exists.
WalkCorpus metapath_walks(const Hin& hin, const Metapath& mp, const MetapathWalkParams& params);

/// Concatenation of corpora over the same node set.
WalkCorpus concat(std::span<const WalkCorpus> parts);

/// Corpus for metapath2vec++ features: the four side metapaths plus uniform
/// walks on the SMS subgraph. IM edges in `hin` are ignored.
WalkCorpus side_metapath_corpus(const Hin& hin, const MetapathWalkParams& mp_params, const WalkParams& ii_params);

/// HIN labels in global order.
std::vector<std::string> global_labels(const Hin& hin);

/// One walk per line, space-separated labels.
void write_corpus(std::ostream& out, const WalkCorpus& corpus, std::span<const std::string> labels);

}  // namespace hinmhp
