#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "hinmhp/hin.hpp"

namespace hinmhp {

struct TrainConfig {
  std::size_t dim = 16;
  double learning_rate = 0.05;
  double l2 = 0.01;
  std::size_t epochs = 200;
  std::size_t negatives_per_positive = 5;
  std::uint64_t seed = 1;
  /// How SMS counts enter the factorisation inputs.
  WeightMode ii_weights = WeightMode::Binary;
};

void check_config(const TrainConfig& cfg);

/// One factorised relation. Rows are Individuals, columns are far_kind(kind).
struct RelationSpec {
  EdgeKind kind = EdgeKind::IM;
  double alpha = 1.0;
  std::size_t negatives_per_positive = 5;
};

/// IM plus every kind in `side`, all with weight 1.
std::vector<RelationSpec> relations_for(EdgeKindSet side, std::size_t negatives_per_positive = 5);

/// All objective values recorded during training, index 0 = before the first epoch.
using TrainingLog = std::vector<double>;

void write_training_log(std::ostream& out, const TrainingLog& log);

struct DmfModel {
  std::array<Eigen::MatrixXd, kNodeKindCount> factors;
  std::array<std::optional<Eigen::MatrixXd>, kEdgeKindCount> interactions;
  TrainingLog log;

  std::size_t dim() const { return static_cast<std::size_t>(factors[0].cols()); }
  /// sigma(U_I[u] . W_r . U_far[v]).
  double score(EdgeKind r, std::uint32_t u, std::uint32_t v) const;
  /// |Individual| x |far kind| matrix of scores.
  Eigen::MatrixXd scores(EdgeKind r) const;
};

/// Squared loss on sigmoid scores over observed edges and sampled non-edges,
/// trained by SGD. Each epoch draws min(k |obs|, |non-edges|) negatives per
/// relation without replacement; the logged objective uses the expectation of
/// that draw, so it is exact and deterministic. An epoch that raises the
/// objective is rolled back and the learning rate halved.
DmfModel train_dmf(const Hin& hin, std::span<const RelationSpec> relations, const TrainConfig& cfg);

struct RescalModel {
  Eigen::MatrixXd a;
  std::vector<Eigen::MatrixXd> cores;
  TrainingLog log;

  Eigen::MatrixXd reconstruct(std::size_t k) const { return a * cores[k] * a.transpose(); }
};

struct DedicomModel {
  Eigen::MatrixXd a;
  Eigen::MatrixXd core;
  std::vector<Eigen::VectorXd> scales;
  TrainingLog log;

  Eigen::MatrixXd reconstruct(std::size_t k) const;
};

/// Full-batch gradient descent on sum_k ||X_k - A R_k A^T||^2 + l2 (||A||^2 + sum ||R_k||^2).
RescalModel train_rescal(std::span<const Eigen::MatrixXd> slices, const TrainConfig& cfg);
/// As train_rescal with X_k ~ A D_k R D_k A^T.
DedicomModel train_dedicom(std::span<const Eigen::MatrixXd> slices, const TrainConfig& cfg);

/// Objectives and gradients, exposed for finite-difference checks.
double rescal_objective(std::span<const Eigen::MatrixXd> slices, const Eigen::MatrixXd& a,
                        std::span<const Eigen::MatrixXd> cores, double l2, Eigen::MatrixXd* grad_a = nullptr,
                        std::vector<Eigen::MatrixXd>* grad_cores = nullptr);
double dedicom_objective(std::span<const Eigen::MatrixXd> slices, const Eigen::MatrixXd& a,
                         const Eigen::MatrixXd& core, std::span<const Eigen::VectorXd> scales, double l2,
                         Eigen::MatrixXd* grad_a = nullptr, Eigen::MatrixXd* grad_core = nullptr,
                         std::vector<Eigen::VectorXd>* grad_scales = nullptr);

/// Dense global-order slices for the IM relation and the kinds in `side`.
/// Element 0 is always IM.
std::vector<Eigen::MatrixXd> hin_slices(const Hin& hin, EdgeKindSet side, WeightMode ii_weights);

/// Scores of every individual against the two mental-health nodes, as an
/// |Individual| x 2 matrix (column kPositiveState, kNegativeState).
Eigen::MatrixXd target_scores(const DmfModel& m);
Eigen::MatrixXd target_scores(const RescalModel& m, const Hin& hin);
Eigen::MatrixXd target_scores(const DedicomModel& m, const Hin& hin);

/// Positive iff the positive-state score is strictly larger.
bool predict_condition(double positive_score, double negative_score);

/// The 31 non-empty subsets of {II, IP, IS, IF, IW}, by size and then
/// lexicographically in I, P, S, F, W order.
std::vector<EdgeKindSet> ablation_combos();

nlohmann::json to_json(const DmfModel& m);
nlohmann::json to_json(const RescalModel& m);
nlohmann::json to_json(const DedicomModel& m);
DmfModel dmf_from_json(const nlohmann::json& j);

}  // namespace hinmhp
