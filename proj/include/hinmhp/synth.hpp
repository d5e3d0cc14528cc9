#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>

#include <nlohmann/json.hpp>

#include "hinmhp/cohort.hpp"

namespace hinmhp {

/// Trait-label association strengths, each in [0, 1].
struct SignalLoadings {
  double personality = 0.5;
  double physical = 0.5;
  double wellbeing = 0.5;
  double social = 0.3;
  double sms_homophily = 0.5;
};

struct SynthParams {
  int n = 274;
  double depression_rate = 0.245;
  double anxiety_rate = 0.387;
  SignalLoadings signal;
  int communities = 8;
  double intra_p = 0.12;
  double inter_p = 0.022;
  double mean_sms = 25.0;
  /// Standard deviation of the per-condition noise added to the shared
  /// latent distress before the top-k label quota is applied.
  double label_noise = 0.5;
  std::uint64_t seed = 1;
};

/// Throws Error naming the first violated constraint.
void check_params(const SynthParams& p);

nlohmann::json to_json(const SynthParams& p);
SynthParams synth_params_from_json(const nlohmann::json& j);

/// round(n * rate) with halves rounded up.
std::size_t quota(std::size_t n, double rate);

struct SyntheticCohort {
  CohortTable cohort;
  SmsEdgeList sms;
};

SyntheticCohort generate(const SynthParams& params);

/// Exact structural targets for a cohort shaped like the published study.
struct ShapeTargets {
  int n = 274;
  int sms_edges = 1354;
  int personality_nodes = 114;
  int social_nodes = 55;
  int physical_nodes = 27;
  int wellbeing_nodes = 87;
  int depressed = 67;
  int anxious = 106;
};

/// Generates a cohort and then adjusts bins, categories and SMS pairs until
/// the built HIN hits every count in `targets` exactly. Deterministic.
SyntheticCohort nethealth_shaped(const ShapeTargets& targets = {}, std::uint64_t seed = 2015);

/// Writes cohort.csv, sms.csv and params.json into `dir`.
void write_synthetic(const std::filesystem::path& dir, const SyntheticCohort& data,
                     const nlohmann::json& params);

}  // namespace hinmhp
