#include <doctest.h>

#include <vector>

#include "fixtures.hpp"
#include "hinmhp/herec.hpp"

using namespace hinmhp;

namespace {

/// 40 individuals: 0..19 share w0 and the positive state, 20..39 share w1 and
/// the negative state. Personality is shared by everyone.
Hin planted_hin() {
  Hin::Labels labels;
  for (int i = 0; i < 40; ++i) labels[to_index(NodeKind::Individual)].push_back("i" + std::to_string(i));
  labels[to_index(NodeKind::PersonalityTraits)] = {"p0"};
  labels[to_index(NodeKind::SocialStatus)] = {"s0"};
  labels[to_index(NodeKind::PhysicalHealth)] = {"f0"};
  labels[to_index(NodeKind::WellBeing)] = {"w0", "w1"};
  labels[to_index(NodeKind::MentalHealth)] = {"depressed", "non-depressed"};
  Hin::EdgeLists e;
  for (std::uint32_t i = 0; i < 40; ++i) {
    const std::uint32_t side = i < 20 ? 0 : 1;
    e[to_index(EdgeKind::IP)].push_back({i, 0, 1});
    e[to_index(EdgeKind::IW)].push_back({i, side, 1});
    e[to_index(EdgeKind::IM)].push_back({i, side, 1});
  }
  return Hin(labels, e);
}

HerecConfig small_config() {
  HerecConfig cfg;
  cfg.dim = 8;
  cfg.walks.walks_per_node = 5;
  cfg.walks.repeats = 10;
  cfg.skipgram.epochs = 3;
  cfg.epochs = 60;
  return cfg;
}

Hin masked_planted() {
  std::vector<NodeId> held;
  for (std::uint32_t i : {0u, 1u, 2u, 3u, 4u, 20u, 21u, 22u, 23u, 24u}) held.push_back({NodeKind::Individual, i});
  return planted_hin().mask_target_edges(held);
}

}  // namespace

TEST_CASE("herec separates planted communities") {
  const auto hin = masked_planted();
  const std::vector<Metapath> mps{Metapath::parse("I-W-I"), Metapath::parse("I-P-I")};
  const auto res = herec_scores(hin, mps, small_config());
  REQUIRE(res.scores.rows() == 40);
  REQUIRE(res.scores.cols() == 2);
  CHECK(res.log.back() < res.log.front());

  int train_right = 0, held_right = 0;
  for (int i = 0; i < 40; ++i) {
    const bool positive = i < 20;
    const bool predicted = res.scores(i, kPositiveState) > res.scores(i, kNegativeState);
    const bool held = (i % 20) < 5;
    (held ? held_right : train_right) += predicted == positive;
  }
  CHECK(train_right == 30);
  CHECK(held_right >= 8);
}

TEST_CASE("herec is deterministic for a seed") {
  const auto hin = masked_planted();
  const std::vector<Metapath> mps{Metapath::parse("I-W-I")};
  const auto a = herec_scores(hin, mps, small_config());
  const auto b = herec_scores(hin, mps, small_config());
  CHECK(a.scores == b.scores);
  auto other = small_config();
  other.seed = 2;
  CHECK(herec_scores(hin, mps, other).scores != a.scores);
}

TEST_CASE("herec single metapath and IM metapath on masked rows") {
  const auto hin = masked_planted();
  const std::vector<Metapath> mps{Metapath::parse("I-M-I")};
  const auto res = herec_scores(hin, mps, small_config());
  CHECK(res.scores.allFinite());
}

TEST_CASE("herec errors") {
  const auto cfg = small_config();
  const auto hin = testing::triangle_hin();
  CHECK_THROWS_AS(herec_scores(hin, {}, cfg), Error);
  const std::vector<Metapath> mps{Metapath::parse("I-W-I")};
  std::vector<NodeId> all{{NodeKind::Individual, 0}, {NodeKind::Individual, 1}, {NodeKind::Individual, 2}};
  CHECK_THROWS_AS(herec_scores(hin.mask_target_edges(all), mps, cfg), Error);
  auto bad = cfg;
  bad.dim = 0;
  CHECK_THROWS_AS(herec_scores(hin, mps, bad), Error);
  bad = cfg;
  bad.learning_rate = 0;
  CHECK_THROWS_AS(herec_scores(hin, mps, bad), Error);
}
