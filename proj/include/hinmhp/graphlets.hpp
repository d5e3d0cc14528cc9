#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hinmhp/graph.hpp"
#include "hinmhp/hin.hpp"

namespace hinmhp {

/// Orbit counts for connected graphlets on 2-4 nodes.
///
///   0  edge endpoint (degree)
///   1  end of a 3-path          2  middle of a 3-path     3  triangle
///   4  end of a 4-path          5  inner node of a 4-path
///   6  leaf of a 3-star         7  centre of a 3-star
///   8  4-cycle
///   9  pendant of a paw        10  degree-2 triangle node of a paw
///  11  degree-3 node of a paw
///  12  degree-2 node of a diamond  13  degree-3 node of a diamond
///  14  K4
inline constexpr std::size_t kOrbitCount = 15;
using Gdv = std::array<std::uint64_t, kOrbitCount>;

/// Exact per-node orbit counts by neighbourhood-intersection counting,
/// parallel over nodes. max_size must be 3 or 4.
std::vector<Gdv> gdv(const Graph& graph, int max_size = 4);

/// Same kernel run on one thread; kept as the reference for the parallel path.
std::vector<Gdv> gdv_serial(const Graph& graph, int max_size = 4);

/// Brute force: every connected induced subgraph of size <= max_size that
/// contains `node`, classified by isomorphism against the graphlet table.
/// Refuses graphs with more than 40 nodes.
Gdv gdv_oracle(const Graph& graph, std::uint32_t node, int max_size = 4);

/// Column layout of a coloured GDV: (orbit, colour multiset) pairs ordered by
/// orbit, then lexicographically by the sorted colour tuple (I<P<S<F<W<M).
class ColoredLayout {
 public:
  explicit ColoredLayout(int max_size = 3);

  std::size_t size() const { return names_.size(); }
  int max_size() const { return max_size_; }
  const std::vector<std::string>& names() const { return names_; }
  /// Column of `orbit` with the given colours (any order).
  std::size_t column(int orbit, std::span<const NodeKind> colors) const;
  int orbit_of(std::size_t column) const { return orbit_of_[column]; }

 private:
  int max_size_;
  std::vector<std::string> names_;
  std::vector<int> orbit_of_;
  std::array<std::size_t, 4> orbit_base_{};
};

using ColoredGdv = std::vector<std::uint64_t>;

/// Coloured orbit counts (orbits 0-3) for the given nodes of a coloured graph.
std::vector<ColoredGdv> colored_gdv(const Graph& graph, std::span<const std::uint32_t> nodes,
                                    const ColoredLayout& layout);
std::vector<ColoredGdv> colored_gdv_serial(const Graph& graph, std::span<const std::uint32_t> nodes,
                                           const ColoredLayout& layout);

/// One row per Individual, computed on the HIN with target edges removed.
std::vector<ColoredGdv> colored_gdv(const Hin& hin, int max_size = 3);

ColoredGdv colored_gdv_oracle(const Graph& graph, std::uint32_t node, const ColoredLayout& layout);

}  // namespace hinmhp
