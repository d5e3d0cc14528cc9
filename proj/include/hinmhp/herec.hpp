#pragma once

#include <cstdint>
#include <span>

#include <Eigen/Dense>

#include "hinmhp/mrmf.hpp"
#include "hinmhp/skipgram.hpp"
#include "hinmhp/walks.hpp"

namespace hinmhp {

struct HerecConfig {
  /// Dimension of the per-metapath embeddings, the fused embedding and the MF factors.
  std::size_t dim = 30;
  MetapathWalkParams walks{};
  /// Dimension and seed are taken from this config.
  SkipGramParams skipgram{};
  std::size_t epochs = 100;
  double learning_rate = 0.02;
  double l2 = 0.01;
  std::uint64_t seed = 1;
};

struct HerecResult {
  /// |Individual| x 2 (columns kPositiveState, kNegativeState).
  Eigen::MatrixXd scores;
  TrainingLog log;
};

/// Metapath-embedding recommender: one skip-gram embedding of individuals per
/// metapath (walks reduced to their Individual nodes), a personalised
/// non-linear fusion e_i = sigmoid(sum_l w_il (M_l e_il + b_l)), and the rating
/// model x_i . y_m + e_i . g_m fitted with squared loss on the IM edges of `hin`.
HerecResult herec_scores(const Hin& hin, std::span<const Metapath> metapaths, const HerecConfig& cfg);

}  // namespace hinmhp
