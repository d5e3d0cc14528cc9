#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "hinmhp/pipeline.hpp"
#include "hinmhp/synth.hpp"

using namespace hinmhp;

namespace {

Dataset synthetic(std::uint64_t seed, SignalLoadings signal = {}, double noise = 0.5) {
  SynthParams p;
  p.seed = seed;
  p.signal = signal;
  p.label_noise = noise;
  auto s = generate(p);
  return {std::move(s.cohort), std::move(s.sms)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("hinmhp_test_pipeline_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("method names") {
  for (auto m : kAllMethods) CHECK(parse_method(name(m)) == m);
  CHECK(!parse_method("svm"));
  CHECK(is_recommender(Method::Herec));
  CHECK(!is_recommender(Method::Deepwalk));
}

TEST_CASE("run config json") {
  const auto j = nlohmann::json::parse(R"({
    "condition": "anxiety", "methods": ["dmf", "random"], "folds": 4, "repetitions": 2, "seed": 9,
    "pairing": "individual", "dmf": {"epochs": 50, "side": "FW", "ii_weights": "log1p"},
    "deepwalk": {"walks_per_node": 3, "sgns": {"dim": 8}}, "nonnetwork": {"include_label_scores": true}
  })");
  const auto cfg = run_config_from_json(j);
  CHECK(cfg.condition == Condition::Anxiety);
  CHECK(cfg.methods == std::vector<Method>{Method::Dmf, Method::Random});
  CHECK(cfg.folds == 4);
  CHECK(cfg.pairing == PairingUnit::Individual);
  CHECK(cfg.settings.dmf.epochs == 50);
  CHECK(cfg.settings.dmf_side.label() == "FW");
  CHECK(cfg.settings.dmf.ii_weights == WeightMode::Log1p);
  CHECK(cfg.settings.deepwalk_sgns.dim == 8);
  CHECK(cfg.settings.nonnetwork.include_label_scores);

  const auto back = run_config_from_json(to_json(cfg));
  CHECK(to_json(back) == to_json(cfg));
  CHECK(config_hash(back) == config_hash(cfg));
  CHECK(config_hash(cfg).size() == 16);
  auto other = cfg;
  other.seed = 10;
  CHECK(config_hash(other) != config_hash(cfg));

  CHECK_THROWS_AS(run_config_from_json(nlohmann::json::parse(R"({"methods": ["svm"]})")), Error);
  CHECK_THROWS_AS(run_config_from_json(nlohmann::json::parse(R"({"methods": ["dmf"], "colour": 1})")), Error);
  CHECK_THROWS_AS(run_config_from_json(nlohmann::json::parse(R"({"methods": ["dmf"], "dmf": {"side": "IM"}})")),
                  Error);
  CHECK_THROWS_AS(run_config_from_json(nlohmann::json::parse(R"({"methods": []})")), Error);
  CHECK_THROWS_AS(run_config_from_json(nlohmann::json::parse(R"({"methods": ["dmf"], "folds": 1})")), Error);
}

TEST_CASE("random baseline precision tracks the base rate") {
  double sum = 0;
  for (std::uint64_t s = 1; s <= 20; ++s) {
    RunConfig cfg;
    cfg.methods = {Method::Random};
    cfg.seed = s;
    const auto r = evaluate_method(synthetic(s), cfg, Method::Random);
    REQUIRE(r.per_fold.size() == 5);
    sum += r.summary[0].mean;
  }
  CHECK(std::abs(sum / 20 - 0.245) < 0.05);
}

TEST_CASE("report covers the requested methods and is reproducible") {
  const auto data = synthetic(3);
  RunConfig cfg;
  cfg.methods = {Method::Nonnetwork, Method::Gdv, Method::Random};
  cfg.repetitions = 2;
  const auto rep = run_experiment(data, cfg);
  REQUIRE(rep.methods.size() == 3);
  CHECK(rep.methods[0].name == "nonnetwork");
  CHECK(rep.methods[2].name == "random");
  CHECK(rep.individuals == 274);
  CHECK(rep.positives == 67);
  CHECK(rep.tests.size() == 3 * 4);
  for (const auto& m : rep.methods) {
    CHECK(m.per_fold.size() == 10);
    for (std::size_t i = 0; i < 4; ++i) {
      double lo = 1, hi = 0;
      for (const auto& s : m.per_fold) {
        lo = std::min(lo, value(s, kMetrics[i]));
        hi = std::max(hi, value(s, kMetrics[i]));
      }
      CHECK(m.summary[i].mean >= lo - 1e-12);
      CHECK(m.summary[i].mean <= hi + 1e-12);
    }
  }

  const auto a = scratch("a"), b = scratch("b");
  write_report(a, rep, true);
  write_report(b, run_experiment(data, cfg), true);
  for (const char* f : {"report.json", "metrics.csv", "pvalues.csv", "metrics.svg"}) {
    CHECK(std::filesystem::exists(a / f));
    CHECK(slurp(a / f) == slurp(b / f));
  }
  CHECK(slurp(a / "metrics.csv").rfind("# config_hash=" + rep.config_hash, 0) == 0);
  CHECK(slurp(a / "metrics.svg").find("stroke=\"red\"") != std::string::npos);

  auto dup = cfg;
  dup.methods = {Method::Random, Method::Random};
  CHECK_THROWS_AS(run_experiment(data, dup), Error);
}

TEST_CASE("individual pairing") {
  RunConfig cfg;
  cfg.methods = {Method::Nonnetwork, Method::Random};
  cfg.pairing = PairingUnit::Individual;
  const auto rep = run_experiment(synthetic(4), cfg);
  REQUIRE(rep.tests.size() == 2);
  CHECK(rep.tests[0].metric == Metric::Recall);
  CHECK(rep.tests[1].metric == Metric::Accuracy);
}

TEST_CASE("dmf beats random on planted signal") {
  RunConfig cfg;
  cfg.methods = {Method::Dmf, Method::Random};
  cfg.repetitions = 3;
  cfg.settings.dmf.epochs = 60;
  const auto rep = run_experiment(synthetic(5, {0.2, 0.2, 0.2, 0.1, 1.0}, 0.2), cfg);
  CHECK(rep.methods[0].summary[1].mean > rep.methods[1].summary[1].mean);
  const auto recall = std::find_if(rep.tests.begin(), rep.tests.end(),
                                   [](const PairTest& t) { return t.metric == Metric::Recall; });
  REQUIRE(recall != rep.tests.end());
  CHECK(recall->p_adj < 0.05);
}

TEST_CASE("herec and rescal run through the protocol") {
  RunConfig cfg;
  cfg.methods = {Method::Herec, Method::Rescal};
  cfg.folds = 2;
  cfg.settings.herec.dim = 8;
  cfg.settings.herec.epochs = 10;
  cfg.settings.herec.walks = {2, 3, 1};
  cfg.settings.herec.skipgram.epochs = 1;
  cfg.settings.tensor.dim = 4;
  cfg.settings.tensor.epochs = 5;
  const auto data = synthetic(6);
  const auto h = evaluate_method(data, cfg, Method::Herec);
  // The cutoff keeps the predicted positive count at the training base rate.
  const auto& pred = h.predictions[0];
  const auto positives = std::count(pred.begin(), pred.end(), true);
  CHECK(std::abs(positives - 67) <= 1);
  const auto r = evaluate_method(data, cfg, Method::Rescal);
  CHECK(r.per_fold.size() == 2);
}

TEST_CASE("ablation table") {
  RunConfig cfg;
  cfg.methods = {Method::Dmf};
  cfg.folds = 2;
  cfg.settings.dmf.dim = 4;
  cfg.settings.dmf.epochs = 3;
  const auto rep = run_ablation(synthetic(7), cfg);
  REQUIRE(rep.rows.size() == 31);
  for (std::size_t i = 1; i < rep.rows.size(); ++i)
    CHECK(rep.rows[i - 1].result.summary[0].mean >= rep.rows[i].result.summary[0].mean);
  for (const auto& row : rep.rows) {
    CHECK(row.result.name == row.side.label());
    CHECK(row.result.name.find_first_not_of("IPSFW") == std::string::npos);
  }
  const auto dir = scratch("ablation");
  write_ablation(dir, rep);
  std::ifstream in(dir / "ablation.csv");
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 33);
}

TEST_CASE("overlap tables") {
  const auto data = synthetic(8);
  RunConfig cfg;
  cfg.methods = {Method::Nonnetwork, Method::Nonnetwork};
  const auto same = run_overlap(data, cfg);
  REQUIRE(same.tests.size() == 1);
  CHECK(same.tests[0].overlap == same.tests[0].a);
  CHECK(same.correct[1].name == "nonnetwork (2)");
  CHECK(!same.venn);

  cfg.methods = {Method::Nonnetwork, Method::Gdv, Method::Random};
  const auto three = run_overlap(data, cfg);
  CHECK(three.universe.size() == 67);
  CHECK(three.tests.size() == 3);
  REQUIRE(three.venn);
  std::set<std::uint32_t> uni;
  for (const auto& s : three.correct) uni.insert(s.members.begin(), s.members.end());
  CHECK(std::accumulate(three.venn->begin(), three.venn->end(), std::size_t{0}) == uni.size());
  const auto dir = scratch("overlap");
  write_overlap(dir, three);
  CHECK(std::filesystem::exists(dir / "venn.csv"));

  cfg.methods = {Method::Random};
  CHECK_THROWS_AS(run_overlap(data, cfg), Error);
}
