#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hinmhp/walks.hpp"

namespace hinmhp {

struct SkipGramParams {
  std::size_t dim = 64;
  std::size_t window = 5;
  std::size_t negatives = 5;
  /// Zero epochs returns the initial parameters.
  std::size_t epochs = 5;
  double learning_rate = 0.025;
  std::uint64_t seed = 1;
  /// Draw negatives only from nodes of the context node's kind.
  bool hetero = false;
};

/// Input and output vectors for every node that occurs in the training corpus.
struct Embedding {
  std::vector<std::uint32_t> nodes;  // ascending
  Eigen::MatrixXd vectors;           // row r belongs to nodes[r]
  Eigen::MatrixXd context;
  /// Mean pair loss of each walk in training order.
  std::vector<double> loss_trace;

  std::size_t dim() const { return static_cast<std::size_t>(vectors.cols()); }
  /// Row of `node`, or -1 when the node never occurred in the corpus.
  std::ptrdiff_t row_of(std::uint32_t node) const;
};

/// Called with (context node, sampled negative) for every negative draw.
using NegativeObserver = std::function<void(std::uint32_t, std::uint32_t)>;

/// Skip-gram with negative sampling; negatives follow unigram^0.75 counts.
Embedding train_skipgram(const WalkCorpus& corpus, const SkipGramParams& params,
                         const NegativeObserver& observer = {});

/// Fixed (center, context, negatives) triples for measuring the SGNS loss.
struct SgnsBatch {
  struct Item {
    std::uint32_t center;
    std::uint32_t context;
    std::vector<std::uint32_t> negatives;
  };
  std::vector<Item> items;
};

SgnsBatch sample_sgns_batch(const WalkCorpus& corpus, const SkipGramParams& params, std::size_t size,
                            std::uint64_t seed);
double sgns_loss(const Embedding& emb, const SgnsBatch& batch);

/// CSV with header node,dim_0..dim_{d-1}.
void write_embedding_csv(std::ostream& out, const Embedding& emb, std::span<const std::string> labels);

}  // namespace hinmhp
