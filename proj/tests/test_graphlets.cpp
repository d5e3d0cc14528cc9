#include <doctest.h>

#include <numeric>

#include "fixtures.hpp"
#include "hinmhp/graphlets.hpp"
#include "hinmhp/rng.hpp"

using namespace hinmhp;

namespace {

Graph make_graph(std::size_t n, std::initializer_list<std::pair<std::uint32_t, std::uint32_t>> edges) {
  std::vector<Graph::WeightedEdge> es;
  for (auto [u, v] : edges) es.push_back({u, v, 1.0});
  return Graph(n, es);
}

Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed, bool colored) {
  Rng rng(seed);
  std::vector<Graph::WeightedEdge> es;
  for (std::uint32_t u = 0; u < n; ++u)
    for (std::uint32_t v = u + 1; v < n; ++v)
      if (uniform01(rng) < p) es.push_back({u, v, 1.0});
  std::vector<NodeKind> colors;
  if (colored)
    for (std::size_t i = 0; i < n; ++i) colors.push_back(kAllNodeKinds[uniform_index(rng, kNodeKindCount)]);
  return Graph(n, es, colors);
}

Gdv orbits(std::initializer_list<std::pair<int, std::uint64_t>> nonzero) {
  Gdv g{};
  for (auto [k, v] : nonzero) g[static_cast<std::size_t>(k)] = v;
  return g;
}

}  // namespace

TEST_CASE("triangle, path and isolated node") {
  const auto k3 = make_graph(3, {{0, 1}, {1, 2}, {0, 2}});
  for (const auto& g : gdv(k3)) CHECK(g == orbits({{0, 2}, {3, 1}}));

  const auto path = make_graph(4, {{0, 1}, {1, 2}});
  const auto p = gdv(path);
  CHECK(p[0] == orbits({{0, 1}, {1, 1}}));
  CHECK(p[1] == orbits({{0, 2}, {2, 1}}));
  CHECK(p[2] == orbits({{0, 1}, {1, 1}}));
  CHECK(p[3] == Gdv{});
  CHECK(gdv_oracle(path, 3) == Gdv{});
}

TEST_CASE("K4 and the 3-star") {
  const auto k4 = make_graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  for (std::uint32_t v = 0; v < 4; ++v) {
    CHECK(gdv_oracle(k4, v) == orbits({{0, 3}, {3, 3}, {14, 1}}));
    CHECK(gdv(k4)[v] == gdv_oracle(k4, v));
  }
  const auto star = make_graph(4, {{0, 1}, {0, 2}, {0, 3}});
  CHECK(gdv_oracle(star, 0) == orbits({{0, 3}, {2, 3}, {7, 1}}));
  CHECK(gdv_oracle(star, 1) == orbits({{0, 1}, {1, 2}, {6, 1}}));
  CHECK(gdv(star)[0] == gdv_oracle(star, 0));
  CHECK(gdv(star)[2] == gdv_oracle(star, 2));
  CHECK(gdv(Graph(0, {})).empty());
}

TEST_CASE("paw, diamond, C4 and P4 orbit positions") {
  const auto paw = make_graph(4, {{0, 1}, {0, 2}, {1, 2}, {0, 3}});
  CHECK(gdv(paw)[0][11] == 1);
  CHECK(gdv(paw)[1][10] == 1);
  CHECK(gdv(paw)[3][9] == 1);
  const auto diamond = make_graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}});
  CHECK(gdv(diamond)[0][13] == 1);
  CHECK(gdv(diamond)[3][12] == 1);
  const auto c4 = make_graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  for (const auto& g : gdv(c4)) CHECK(g == orbits({{0, 2}, {1, 2}, {2, 1}, {8, 1}}));
  const auto p4 = make_graph(4, {{0, 1}, {1, 2}, {2, 3}});
  CHECK(gdv(p4)[0][4] == 1);
  CHECK(gdv(p4)[1][5] == 1);
}

TEST_CASE("invalid sizes are rejected") {
  const auto g = make_graph(2, {{0, 1}});
  CHECK_THROWS_AS(gdv(g, 2), Error);
  CHECK_THROWS_AS(gdv(g, 5), Error);
  CHECK_THROWS_AS(gdv_oracle(g, 0, 5), Error);
  CHECK_THROWS_AS(gdv_oracle(erdos_renyi(41, 0.1, 1, false), 0), Error);
  CHECK_THROWS_AS(ColoredLayout(4), Error);
  CHECK_THROWS_AS(ColoredLayout(1), Error);
  CHECK_THROWS_AS(colored_gdv(testing::triangle_hin(), 4), Error);
}

TEST_CASE("orbit sums match edge and triangle counts") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto g = erdos_renyi(60, 0.15, seed, false);
    const auto all = gdv(g);
    std::uint64_t deg = 0, tri = 0;
    for (const auto& v : all) {
      deg += v[0];
      tri += v[3];
    }
    std::uint64_t triangles = 0;
    for (std::uint32_t a = 0; a < g.size(); ++a)
      for (auto b : g.neighbors(a))
        for (auto c : g.neighbors(b))
          if (a < b && b < c && g.has_edge(a, c)) ++triangles;
    CHECK(deg == 2 * g.edge_count());
    CHECK(tri == 3 * triangles);
  }
}

TEST_CASE("combinatorial counts equal enumeration on 200 random graphs") {
  int graphs = 0;
  for (double p : {0.1, 0.3, 0.5}) {
    for (std::uint64_t seed = 0; seed < 67 && graphs < 200; ++seed, ++graphs) {
      const std::size_t n = 5 + (seed * 7) % 26;
      const auto g = erdos_renyi(n, p, derive_seed(2024, {seed, static_cast<std::uint64_t>(p * 10)}), false);
      const auto fast = gdv(g);
      const auto serial = gdv_serial(g);
      REQUIRE(fast == serial);
      for (std::uint32_t v = 0; v < n; ++v) REQUIRE(fast[v] == gdv_oracle(g, v));
      const auto small = gdv(g, 3);
      for (std::uint32_t v = 0; v < n; ++v) REQUIRE(small[v] == gdv_oracle(g, v, 3));
    }
  }
  CHECK(graphs == 200);
}

TEST_CASE("colored layout has one column per orbit and colour multiset") {
  const ColoredLayout layout;
  CHECK(layout.size() == 21 + 3 * 56);
  CHECK(layout.names().front() == "orbit_0::I+I");
  CHECK(layout.names()[21] == "orbit_1::I+I+I");
  CHECK(layout.names().back() == "orbit_3::M+M+M");
  for (std::size_t c = 0; c < layout.size(); ++c) {
    const auto& name = layout.names()[c];
    std::vector<NodeKind> kinds;
    for (std::size_t i = name.find("::") + 2; i < name.size(); i += 2)
      kinds.push_back(*std::find_if(kAllNodeKinds.begin(), kAllNodeKinds.end(),
                                    [&](NodeKind k) { return letter(k) == name[i]; }));
    std::reverse(kinds.begin(), kinds.end());
    CHECK(layout.column(layout.orbit_of(c), kinds) == c);
  }
  CHECK(ColoredLayout(2).size() == 21);
}

TEST_CASE("colored counts equal enumeration and marginalise to homogeneous") {
  const ColoredLayout layout;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 4 + seed % 20;
    const auto g = erdos_renyi(n, 0.1 + 0.01 * static_cast<double>(seed), seed + 77, true);
    std::vector<std::uint32_t> nodes(n);
    std::iota(nodes.begin(), nodes.end(), 0u);
    const auto colored = colored_gdv(g, nodes, layout);
    REQUIRE(colored == colored_gdv_serial(g, nodes, layout));
    const auto plain = gdv(g, 3);
    for (std::uint32_t v = 0; v < n; ++v) {
      REQUIRE(colored[v] == colored_gdv_oracle(g, v, layout));
      Gdv marginal{};
      for (std::size_t c = 0; c < layout.size(); ++c)
        marginal[static_cast<std::size_t>(layout.orbit_of(c))] += colored[v][c];
      REQUIRE(marginal == plain[v]);
    }
  }
}

TEST_CASE("colored GDV on HIN fixtures") {
  const ColoredLayout layout;
  const std::array<NodeKind, 2> ii = {NodeKind::Individual, NodeKind::Individual};

  // Lone individual with its four trait edges.
  Hin::Labels labels;
  labels[to_index(NodeKind::Individual)] = {"a"};
  labels[to_index(NodeKind::PersonalityTraits)] = {"p"};
  labels[to_index(NodeKind::SocialStatus)] = {"s"};
  labels[to_index(NodeKind::PhysicalHealth)] = {"f"};
  labels[to_index(NodeKind::WellBeing)] = {"w"};
  labels[to_index(NodeKind::MentalHealth)] = {"depressed", "non-depressed"};
  Hin::EdgeLists e;
  for (auto k : {EdgeKind::IP, EdgeKind::IS, EdgeKind::IF, EdgeKind::IW}) e[to_index(k)] = {{0, 0, 1}};
  e[to_index(EdgeKind::IM)] = {{0, 0, 1}};
  const auto lone = colored_gdv(Hin(labels, e));
  REQUIRE(lone.size() == 1);
  for (auto k : {NodeKind::PersonalityTraits, NodeKind::SocialStatus, NodeKind::PhysicalHealth, NodeKind::WellBeing}) {
    const std::array<NodeKind, 2> pair = {NodeKind::Individual, k};
    CHECK(lone[0][layout.column(0, pair)] == 1);
  }
  CHECK(lone[0][layout.column(0, ii)] == 0);
  const std::array<NodeKind, 2> im = {NodeKind::Individual, NodeKind::MentalHealth};
  CHECK(lone[0][layout.column(0, im)] == 0);

  // Two individuals texting each other and sharing a personality node.
  labels[to_index(NodeKind::Individual)] = {"a", "b"};
  e = {};
  e[to_index(EdgeKind::II)] = {{0, 1, 3}};
  e[to_index(EdgeKind::IP)] = {{0, 0, 1}, {1, 0, 1}};
  const auto pair = colored_gdv(Hin(labels, e));
  const std::array<NodeKind, 3> iip = {NodeKind::Individual, NodeKind::Individual, NodeKind::PersonalityTraits};
  for (const auto& row : pair) {
    CHECK(row[layout.column(3, iip)] == 1);
    CHECK(std::accumulate(row.begin(), row.end(), std::uint64_t{0}) == 3);
  }
}
