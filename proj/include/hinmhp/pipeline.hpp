#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hinmhp/classify.hpp"
#include "hinmhp/cohort.hpp"
#include "hinmhp/evalstats.hpp"
#include "hinmhp/herec.hpp"
#include "hinmhp/mrmf.hpp"
#include "hinmhp/skipgram.hpp"
#include "hinmhp/walks.hpp"

namespace hinmhp {

enum class Method : std::uint8_t {
  Dmf,
  Rescal,
  Dedicom,
  Herec,
  Gdv,
  ColoredGdv,
  Deepwalk,
  Metapath2vecpp,
  Nonnetwork,
  Random,
};

inline constexpr std::array<Method, 10> kAllMethods = {
    Method::Dmf,        Method::Rescal,   Method::Dedicom,        Method::Herec,      Method::Gdv,
    Method::ColoredGdv, Method::Deepwalk, Method::Metapath2vecpp, Method::Nonnetwork, Method::Random};

std::string_view name(Method m) noexcept;
std::optional<Method> parse_method(std::string_view s) noexcept;
/// Matrix-factorisation style methods, scored by argmax over the two target nodes.
bool is_recommender(Method m) noexcept;

enum class PairingUnit : std::uint8_t { Fold, Individual };

struct MethodSettings {
  TrainConfig dmf{};
  EdgeKindSet dmf_side = EdgeKindSet::side_kinds();
  TrainConfig tensor{.epochs = 300};  // RESCAL and DEDICOM
  EdgeKindSet tensor_side = EdgeKindSet::side_kinds();
  HerecConfig herec{};
  int graphlet_size = 4;
  int colored_graphlet_size = 3;
  WalkParams deepwalk_walks{};
  SkipGramParams deepwalk_sgns{};
  MetapathWalkParams mp_walks{};
  WalkParams mp_ii_walks{};
  SkipGramParams mp_sgns{.hetero = true};
  LogregParams logreg{};
  NonnetworkOptions nonnetwork{};
};

struct RunConfig {
  Condition condition = Condition::Depression;
  std::vector<Method> methods;
  MethodSettings settings{};
  std::size_t folds = 5;
  std::size_t repetitions = 1;
  std::uint64_t seed = 1;
  PairingUnit pairing = PairingUnit::Fold;
};

/// Throws Error on an empty method list, duplicate methods or invalid counts.
void check_run_config(const RunConfig& cfg);

/// Every key is optional; missing keys keep their defaults. Unknown keys are errors.
RunConfig run_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& cfg);
/// 16 hex digits of FNV-1a over the canonical JSON form.
std::string config_hash(const RunConfig& cfg);

struct Dataset {
  CohortTable cohort;
  SmsEdgeList sms;
};

Dataset load_dataset(const std::filesystem::path& dir);

struct MethodResult {
  std::string name;
  /// Repetition-major: entry r * folds + f.
  std::vector<MetricSet> per_fold;
  /// Per repetition, the held-out prediction of every individual.
  std::vector<std::vector<bool>> predictions;
  std::array<MeanStd, 4> summary{};  // indexed like kMetrics
};

struct PairTest {
  std::string method_a, method_b;
  Metric metric = Metric::Precision;
  double statistic = 0;
  double p_raw = 1;
  double p_adj = 1;
  std::size_t n_used = 0;
  bool exact = false;
};

struct EvalReport {
  std::string config_hash;
  Condition condition = Condition::Depression;
  std::size_t individuals = 0;
  std::size_t positives = 0;
  std::size_t folds = 0;
  std::size_t repetitions = 0;
  std::vector<MethodResult> methods;  // in request order
  /// Two-sided Wilcoxon per method pair and metric; BH-adjusted within each metric.
  std::vector<PairTest> tests;
};

/// Stratified k-fold CV of every requested method, repeated with derived seeds.
EvalReport run_experiment(const Dataset& data, const RunConfig& cfg);

/// Evaluates one method; exposed for the ablation and overlap drivers.
MethodResult evaluate_method(const Dataset& data, const RunConfig& cfg, Method method);

struct AblationRow {
  EdgeKindSet side;
  MethodResult result;
};

struct AblationReport {
  std::string config_hash;
  /// Sorted by mean precision, descending; ties keep ablation_combos() order.
  std::vector<AblationRow> rows;
};

/// DMF trained on every combination of side relations (the target relation is always included).
AblationReport run_ablation(const Dataset& data, const RunConfig& cfg);

struct OverlapReport {
  std::string config_hash;
  std::vector<std::uint32_t> universe;  // actual positives
  std::vector<NamedSet> correct;        // correctly predicted positives, first repetition
  std::vector<OverlapTest> tests;
  std::optional<std::array<std::size_t, 7>> venn;  // exactly three methods
};

OverlapReport run_overlap(const Dataset& data, const RunConfig& cfg);

nlohmann::json to_json(const EvalReport& r);
nlohmann::json to_json(const AblationReport& r);
nlohmann::json to_json(const OverlapReport& r);

/// report.json, metrics.csv, pvalues.csv and, when requested, metrics.svg.
void write_report(const std::filesystem::path& dir, const EvalReport& r, bool svg = false);
/// ablation.json and ablation.csv.
void write_ablation(const std::filesystem::path& dir, const AblationReport& r);
/// overlap.json, overlap.csv and, for three methods, venn.csv.
void write_overlap(const std::filesystem::path& dir, const OverlapReport& r);

/// Grouped bar chart (metric mean +- std per method) with the random baseline in red.
std::string metrics_svg(const EvalReport& r);

}  // namespace hinmhp
