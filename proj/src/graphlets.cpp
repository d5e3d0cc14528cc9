#include "hinmhp/graphlets.hpp"

#include <algorithm>
#include <numeric>

#include <omp.h>

namespace hinmhp {

namespace {

void check_size(int max_size) {
  if (max_size != 3 && max_size != 4)
    throw Error("gdv: max_size must be 3 or 4, got " + std::to_string(max_size));
}

std::uint64_t choose2(std::uint64_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }
std::uint64_t choose3(std::uint64_t n) { return n < 3 ? 0 : n * (n - 1) * (n - 2) / 6; }

/// Per-thread marker arrays sized to the graph.
struct Scratch {
  explicit Scratch(std::size_t n) : in_n(n, 0), in_a(n, 0), reach(n, 0) {}
  std::vector<std::uint8_t> in_n;
  std::vector<std::uint8_t> in_a;
  std::vector<std::uint32_t> reach;
  std::vector<std::uint32_t> touched;
  std::vector<std::uint64_t> inner_degree;
};

Gdv count_node(const Graph& g, std::uint32_t x, int max_size, Scratch& s) {
  Gdv out{};
  const auto nx = g.neighbors(x);
  const std::uint64_t d = nx.size();
  for (auto a : nx) s.in_n[a] = 1;

  // Degrees inside G[N(x)] and the 3-node orbits.
  s.inner_degree.assign(nx.size(), 0);
  std::uint64_t inner_edges2 = 0, outward = 0;
  for (std::size_t i = 0; i < nx.size(); ++i) {
    for (auto b : g.neighbors(nx[i]))
      if (s.in_n[b]) ++s.inner_degree[i];
    inner_edges2 += s.inner_degree[i];
    outward += g.degree(nx[i]) - 1;
  }
  const std::uint64_t t = inner_edges2 / 2;
  out[0] = d;
  out[3] = t;
  out[2] = choose2(d) - t;
  out[1] = outward - 2 * t;

  if (max_size == 4) {
    // Three neighbours of x: split C(d,3) triples by how many edges they span.
    std::uint64_t wedges = 0, sum_out = 0, e1 = 0;
    for (std::size_t i = 0; i < nx.size(); ++i) {
      wedges += choose2(s.inner_degree[i]);
      const std::uint64_t o = g.degree(nx[i]) - 1 - s.inner_degree[i];
      sum_out += o;
      e1 += s.inner_degree[i] * o;
    }
    std::uint64_t tri3 = 0, common_out = 0;
    for (auto a : nx) {
      const auto na = g.neighbors(a);
      for (auto b : na) {
        if (b <= a || !s.in_n[b]) continue;
        const auto nb = g.neighbors(b);
        auto ia = na.begin();
        auto ib = nb.begin();
        while (ia != na.end() && ib != nb.end()) {
          if (*ia < *ib) {
            ++ia;
          } else if (*ib < *ia) {
            ++ib;
          } else {
            const auto c = *ia;
            if (c != x) {
              if (s.in_n[c])
                ++tri3;
              else
                ++common_out;
            }
            ++ia;
            ++ib;
          }
        }
      }
    }
    const std::uint64_t k4 = tri3 / 3;
    const std::uint64_t diamonds = wedges - 3 * k4;
    const std::uint64_t paws = t * (d >= 2 ? d - 2 : 0) - 2 * diamonds - 3 * k4;
    out[14] = k4;
    out[13] = diamonds;
    out[11] = paws;
    out[7] = choose3(d) - paws - diamonds - k4;

    // Two neighbours a,b of x plus one outside node c.
    s.touched.clear();
    for (auto a : nx) {
      for (auto c : g.neighbors(a)) {
        if (c == x || s.in_n[c]) continue;
        if (s.reach[c]++ == 0) s.touched.push_back(c);
      }
    }
    std::uint64_t both = 0;
    for (auto c : s.touched) {
      both += choose2(s.reach[c]);
      s.reach[c] = 0;
    }
    const std::uint64_t p1 = (d >= 1 ? d - 1 : 0) * sum_out;
    out[12] = common_out;
    out[8] = both - common_out;
    out[10] = e1 - 2 * common_out;
    out[5] = (p1 - e1) - 2 * (both - common_out);

    // One neighbour a of x plus two outside nodes.
    for (auto a : nx) {
      const auto na = g.neighbors(a);
      for (auto b : na) s.in_a[b] = 1;
      std::uint64_t outside = 0, closed2 = 0, paths = 0;
      for (auto b : na) {
        if (b == x || s.in_n[b]) continue;
        ++outside;
        for (auto c : g.neighbors(b)) {
          if (c == x || s.in_n[c]) continue;
          if (s.in_a[c])
            ++closed2;
          else
            ++paths;
        }
      }
      for (auto b : na) s.in_a[b] = 0;
      out[9] += closed2 / 2;
      out[6] += choose2(outside) - closed2 / 2;
      out[4] += paths;
    }
  }

  for (auto a : nx) s.in_n[a] = 0;
  return out;
}

}  // namespace

std::vector<Gdv> gdv(const Graph& graph, int max_size) {
  check_size(max_size);
  const auto n = graph.size();
  std::vector<Gdv> out(n);
#pragma omp parallel
  {
    Scratch scratch(n);
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t v = 0; v < static_cast<std::int64_t>(n); ++v)
      out[static_cast<std::size_t>(v)] = count_node(graph, static_cast<std::uint32_t>(v), max_size, scratch);
  }
  return out;
}

std::vector<Gdv> gdv_serial(const Graph& graph, int max_size) {
  check_size(max_size);
  const auto n = graph.size();
  std::vector<Gdv> out(n);
  Scratch scratch(n);
  for (std::uint32_t v = 0; v < n; ++v) out[v] = count_node(graph, v, max_size, scratch);
  return out;
}

// Oracle ---------------------------------------------------------------------

namespace {

struct Graphlet {
  int size;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> orbits;
};

const std::vector<Graphlet>& graphlet_table() {
  static const std::vector<Graphlet> table = {
      {2, {{0, 1}}, {0, 0}},
      {3, {{0, 1}, {1, 2}}, {1, 2, 1}},
      {3, {{0, 1}, {1, 2}, {0, 2}}, {3, 3, 3}},
      {4, {{0, 1}, {1, 2}, {2, 3}}, {4, 5, 5, 4}},
      {4, {{0, 1}, {0, 2}, {0, 3}}, {7, 6, 6, 6}},
      {4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}, {8, 8, 8, 8}},
      {4, {{0, 1}, {0, 2}, {1, 2}, {0, 3}}, {11, 10, 10, 9}},
      {4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}}, {13, 13, 12, 12}},
      {4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}, {14, 14, 14, 14}},
  };
  return table;
}

using AdjBits = std::array<std::uint8_t, 4>;

bool connected(const AdjBits& adj, int k) {
  std::uint8_t seen = 1, frontier = 1;
  while (frontier) {
    std::uint8_t next = 0;
    for (int i = 0; i < k; ++i)
      if (frontier & (1u << i)) next |= adj[i];
    next &= static_cast<std::uint8_t>(~seen);
    seen |= next;
    frontier = next;
  }
  return seen == (1u << k) - 1;
}

/// Orbit of position 0 of the induced subgraph `adj` on k nodes.
int classify(const AdjBits& adj, int k) {
  std::array<int, 4> perm = {0, 1, 2, 3};
  for (const auto& gl : graphlet_table()) {
    if (gl.size != k) continue;
    AdjBits ref{};
    for (auto [a, b] : gl.edges) {
      ref[a] |= static_cast<std::uint8_t>(1u << b);
      ref[b] |= static_cast<std::uint8_t>(1u << a);
    }
    std::iota(perm.begin(), perm.begin() + k, 0);
    do {
      // perm maps subgraph position -> reference vertex.
      bool match = true;
      for (int i = 0; i < k && match; ++i)
        for (int j = i + 1; j < k && match; ++j) {
          const bool e_sub = adj[i] & (1u << j);
          const bool e_ref = ref[perm[i]] & (1u << perm[j]);
          match = e_sub == e_ref;
        }
      if (match) return gl.orbits[perm[0]];
    } while (std::next_permutation(perm.begin(), perm.begin() + k));
  }
  throw Error("gdv_oracle: unclassified subgraph");
}

/// Calls visit(members, k) for every node subset of size 2..max_size that
/// contains `node` (always at position 0) and induces a connected subgraph.
template <typename Visit>
void enumerate_connected(const Graph& g, std::uint32_t node, int max_size, Visit&& visit) {
  const auto n = static_cast<std::uint32_t>(g.size());
  std::array<std::uint32_t, 4> members{node, 0, 0, 0};
  auto induced = [&](int k) {
    AdjBits adj{};
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        if (g.has_edge(members[i], members[j])) {
          adj[i] |= static_cast<std::uint8_t>(1u << j);
          adj[j] |= static_cast<std::uint8_t>(1u << i);
        }
    return adj;
  };
  for (std::uint32_t a = 0; a < n; ++a) {
    if (a == node) continue;
    members[1] = a;
    if (auto adj = induced(2); connected(adj, 2)) visit(members, adj, 2);
    if (max_size < 3) continue;
    for (std::uint32_t b = a + 1; b < n; ++b) {
      if (b == node) continue;
      members[2] = b;
      if (auto adj = induced(3); connected(adj, 3)) visit(members, adj, 3);
      if (max_size < 4) continue;
      for (std::uint32_t c = b + 1; c < n; ++c) {
        if (c == node) continue;
        members[3] = c;
        if (auto adj = induced(4); connected(adj, 4)) visit(members, adj, 4);
      }
    }
  }
}

}  // namespace

Gdv gdv_oracle(const Graph& graph, std::uint32_t node, int max_size) {
  check_size(max_size);
  if (graph.size() > 40) throw Error("gdv_oracle: graph too large for enumeration (> 40 nodes)");
  if (node >= graph.size()) throw Error("gdv_oracle: unknown node");
  Gdv out{};
  enumerate_connected(graph, node, max_size,
                      [&](const auto&, const AdjBits& adj, int k) { ++out[static_cast<std::size_t>(classify(adj, k))]; });
  return out;
}

// Coloured graphlets -----------------------------------------------------------

namespace {

constexpr std::size_t kColors = kNodeKindCount;

}  // namespace

ColoredLayout::ColoredLayout(int max_size) : max_size_(max_size) {
  if (max_size != 2 && max_size != 3)
    throw Error("colored_gdv: max_size must be 2 or 3, got " + std::to_string(max_size));
  auto colorset = [](std::initializer_list<std::size_t> ks) {
    std::string s;
    for (auto k : ks) {
      if (!s.empty()) s.push_back('+');
      s.push_back(letter(kAllNodeKinds[k]));
    }
    return s;
  };
  orbit_base_[0] = 0;
  for (std::size_t a = 0; a < kColors; ++a)
    for (std::size_t b = a; b < kColors; ++b) {
      names_.push_back("orbit_0::" + colorset({a, b}));
      orbit_of_.push_back(0);
    }
  if (max_size == 3) {
    for (int orbit = 1; orbit <= 3; ++orbit) {
      orbit_base_[static_cast<std::size_t>(orbit)] = names_.size();
      for (std::size_t a = 0; a < kColors; ++a)
        for (std::size_t b = a; b < kColors; ++b)
          for (std::size_t c = b; c < kColors; ++c) {
            names_.push_back("orbit_" + std::to_string(orbit) + "::" + colorset({a, b, c}));
            orbit_of_.push_back(orbit);
          }
    }
  }
}

std::size_t ColoredLayout::column(int orbit, std::span<const NodeKind> colors) const {
  const std::size_t arity = orbit == 0 ? 2 : 3;
  if (orbit < 0 || orbit > 3 || colors.size() != arity || (orbit > 0 && max_size_ < 3))
    throw Error("colored layout: bad orbit/colour arity");
  // Rank of the sorted tuple among non-decreasing tuples.
  std::array<std::size_t, 3> c{};
  for (std::size_t i = 0; i < arity; ++i) c[i] = to_index(colors[i]);
  std::sort(c.begin(), c.begin() + static_cast<long>(arity));
  std::size_t rank = 0;
  if (arity == 2) {
    for (std::size_t a = 0; a < c[0]; ++a) rank += kColors - a;
    rank += c[1] - c[0];
  } else {
    for (std::size_t a = 0; a < c[0]; ++a) rank += (kColors - a) * (kColors - a + 1) / 2;
    for (std::size_t b = c[0]; b < c[1]; ++b) rank += kColors - b;
    rank += c[2] - c[1];
  }
  return orbit_base_[static_cast<std::size_t>(orbit)] + rank;
}

namespace {

ColoredGdv colored_node(const Graph& g, std::uint32_t x, const ColoredLayout& layout, std::vector<std::uint8_t>& in_n) {
  ColoredGdv out(layout.size(), 0);
  const auto nx = g.neighbors(x);
  const NodeKind cx = g.color(x);
  for (auto a : nx) {
    const std::array<NodeKind, 2> cs = {cx, g.color(a)};
    ++out[layout.column(0, cs)];
  }
  if (layout.max_size() < 3) return out;
  for (auto a : nx) in_n[a] = 1;
  for (std::size_t i = 0; i < nx.size(); ++i) {
    for (std::size_t j = i + 1; j < nx.size(); ++j) {
      const std::array<NodeKind, 3> cs = {cx, g.color(nx[i]), g.color(nx[j])};
      ++out[layout.column(g.has_edge(nx[i], nx[j]) ? 3 : 2, cs)];
    }
    for (auto c : g.neighbors(nx[i])) {
      if (c == x || in_n[c]) continue;
      const std::array<NodeKind, 3> cs = {cx, g.color(nx[i]), g.color(c)};
      ++out[layout.column(1, cs)];
    }
  }
  for (auto a : nx) in_n[a] = 0;
  return out;
}

}  // namespace

std::vector<ColoredGdv> colored_gdv(const Graph& graph, std::span<const std::uint32_t> nodes,
                                    const ColoredLayout& layout) {
  std::vector<ColoredGdv> out(nodes.size());
#pragma omp parallel
  {
    std::vector<std::uint8_t> in_n(graph.size(), 0);
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(nodes.size()); ++i) {
      const auto k = static_cast<std::size_t>(i);
      out[k] = colored_node(graph, nodes[k], layout, in_n);
    }
  }
  return out;
}

std::vector<ColoredGdv> colored_gdv_serial(const Graph& graph, std::span<const std::uint32_t> nodes,
                                           const ColoredLayout& layout) {
  std::vector<ColoredGdv> out;
  out.reserve(nodes.size());
  std::vector<std::uint8_t> in_n(graph.size(), 0);
  for (auto v : nodes) out.push_back(colored_node(graph, v, layout, in_n));
  return out;
}

std::vector<ColoredGdv> colored_gdv(const Hin& hin, int max_size) {
  const ColoredLayout layout(max_size);
  const auto graph = homogeneous_view(hin, false);
  std::vector<std::uint32_t> nodes(hin.node_count(NodeKind::Individual));
  std::iota(nodes.begin(), nodes.end(), static_cast<std::uint32_t>(hin.kind_offset(NodeKind::Individual)));
  return colored_gdv(graph, nodes, layout);
}

ColoredGdv colored_gdv_oracle(const Graph& graph, std::uint32_t node, const ColoredLayout& layout) {
  if (graph.size() > 40) throw Error("colored_gdv_oracle: graph too large for enumeration (> 40 nodes)");
  ColoredGdv out(layout.size(), 0);
  enumerate_connected(graph, node, layout.max_size(), [&](const auto& members, const AdjBits& adj, int k) {
    std::array<NodeKind, 4> cs{};
    for (int i = 0; i < k; ++i) cs[static_cast<std::size_t>(i)] = graph.color(members[static_cast<std::size_t>(i)]);
    ++out[layout.column(classify(adj, k), std::span<const NodeKind>(cs.data(), static_cast<std::size_t>(k)))];
  });
  return out;
}

}  // namespace hinmhp
