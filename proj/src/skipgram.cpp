#include "hinmhp/skipgram.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "hinmhp/cohort.hpp"
#include "hinmhp/rng.hpp"

namespace hinmhp {

std::ptrdiff_t Embedding::row_of(std::uint32_t node) const {
  const auto it = std::lower_bound(nodes.begin(), nodes.end(), node);
  if (it == nodes.end() || *it != node) return -1;
  return it - nodes.begin();
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// log(1 + exp(-x)) without overflow.
double softplus_neg(double x) { return x > 0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x)); }

/// Vocabulary and unigram^0.75 noise tables, global or per kind.
class NoiseTable {
 public:
  NoiseTable(const WalkCorpus& corpus, bool hetero) : hetero_(hetero) {
    std::vector<std::uint64_t> counts(corpus.node_count(), 0);
    for (const auto& w : corpus.walks)
      for (auto v : w) {
        if (v >= counts.size()) throw Error("train_skipgram: walk node out of range");
        ++counts[v];
      }
    row_of_.assign(counts.size(), -1);
    for (std::uint32_t v = 0; v < counts.size(); ++v)
      if (counts[v]) {
        row_of_[v] = static_cast<std::int64_t>(nodes_.size());
        nodes_.push_back(v);
      }
    for (auto v : nodes_) {
      auto& t = tables_[hetero ? to_index(corpus.kinds[v]) : 0];
      const double mass = std::pow(static_cast<double>(counts[v]), 0.75);
      t.cumulative.push_back((t.cumulative.empty() ? 0.0 : t.cumulative.back()) + mass);
      t.rows.push_back(row_of_[v]);
    }
  }

  const std::vector<std::uint32_t>& nodes() const { return nodes_; }
  std::int64_t row(std::uint32_t node) const { return row_of_[node]; }

  std::int64_t sample(Rng& rng, NodeKind kind) const {
    const auto& t = tables_[hetero_ ? to_index(kind) : 0];
    const double r = uniform01(rng) * t.cumulative.back();
    auto it = std::upper_bound(t.cumulative.begin(), t.cumulative.end(), r);
    if (it == t.cumulative.end()) --it;
    return t.rows[static_cast<std::size_t>(it - t.cumulative.begin())];
  }

 private:
  struct Table {
    std::vector<double> cumulative;
    std::vector<std::int64_t> rows;
  };
  bool hetero_;
  std::vector<std::uint32_t> nodes_;
  std::vector<std::int64_t> row_of_;
  std::array<Table, kNodeKindCount> tables_;
};

void check(const WalkCorpus& corpus, const SkipGramParams& p) {
  if (p.dim < 1) throw Error("train_skipgram: dimension must be >= 1");
  if (corpus.token_count() == 0) throw Error("train_skipgram: empty corpus");
  if (corpus.kinds.empty()) throw Error("train_skipgram: corpus has no node set");
}

}  // namespace

Embedding train_skipgram(const WalkCorpus& corpus, const SkipGramParams& params, const NegativeObserver& observer) {
  check(corpus, params);
  const NoiseTable noise(corpus, params.hetero);
  const std::size_t d = params.dim;
  const std::size_t vocab = noise.nodes().size();
  Rng rng(derive_seed(params.seed, {0x5347}));

  // Row-major scratch; copied into the Eigen matrices at the end.
  std::vector<double> in(vocab * d), out(vocab * d, 0.0);
  {
    std::uniform_real_distribution<double> init(-0.5 / static_cast<double>(d), 0.5 / static_cast<double>(d));
    for (auto& x : in) x = init(rng);
  }

  Embedding emb;
  emb.nodes = noise.nodes();
  const double total = static_cast<double>(params.epochs * corpus.token_count());
  double processed = 0;
  std::vector<double> grad(d);
  std::vector<std::size_t> order(corpus.walks.size());
  std::iota(order.begin(), order.end(), 0);

  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (auto wi : order) {
      const auto& walk = corpus.walks[wi];
      double walk_loss = 0;
      std::size_t pairs = 0;
      for (std::size_t pos = 0; pos < walk.size(); ++pos) {
        const double lr = params.learning_rate * std::max(1e-4, 1.0 - processed / total);
        processed += 1;
        const std::size_t lo = pos >= params.window ? pos - params.window : 0;
        const std::size_t hi = std::min(walk.size() - 1, pos + params.window);
        double* h = &in[static_cast<std::size_t>(noise.row(walk[pos])) * d];
        for (std::size_t cpos = lo; cpos <= hi; ++cpos) {
          if (cpos == pos) continue;
          const auto ctx = walk[cpos];
          const auto ctx_row = noise.row(ctx);
          std::fill(grad.begin(), grad.end(), 0.0);
          for (std::size_t s = 0; s <= params.negatives; ++s) {
            std::int64_t target = ctx_row;
            double label = 1.0;
            if (s > 0) {
              target = noise.sample(rng, corpus.kinds[ctx]);
              if (observer) observer(ctx, emb.nodes[static_cast<std::size_t>(target)]);
              if (target == ctx_row) continue;
              label = 0.0;
            }
            double* o = &out[static_cast<std::size_t>(target) * d];
            double dot = 0;
            for (std::size_t k = 0; k < d; ++k) dot += h[k] * o[k];
            const double sig = sigmoid(dot);
            walk_loss -= std::log(std::max(label > 0 ? sig : 1.0 - sig, 1e-300));
            const double g = (label - sig) * lr;
            for (std::size_t k = 0; k < d; ++k) {
              grad[k] += g * o[k];
              o[k] += g * h[k];
            }
          }
          for (std::size_t k = 0; k < d; ++k) h[k] += grad[k];
          ++pairs;
        }
      }
      if (pairs) emb.loss_trace.push_back(walk_loss / static_cast<double>(pairs));
    }
  }

  emb.vectors = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      in.data(), static_cast<Eigen::Index>(vocab), static_cast<Eigen::Index>(d));
  emb.context = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      out.data(), static_cast<Eigen::Index>(vocab), static_cast<Eigen::Index>(d));
  if (!emb.vectors.allFinite() || !emb.context.allFinite()) throw Error("train_skipgram: non-finite embedding");
  return emb;
}

SgnsBatch sample_sgns_batch(const WalkCorpus& corpus, const SkipGramParams& params, std::size_t size,
                            std::uint64_t seed) {
  check(corpus, params);
  const NoiseTable noise(corpus, params.hetero);
  Rng rng(seed);
  SgnsBatch batch;
  while (batch.items.size() < size) {
    const auto& walk = corpus.walks[uniform_index(rng, corpus.walks.size())];
    if (walk.size() < 2) continue;
    const auto pos = uniform_index(rng, walk.size());
    const std::size_t lo = pos >= params.window ? pos - params.window : 0;
    const std::size_t hi = std::min(walk.size() - 1, pos + params.window);
    auto cpos = lo + uniform_index(rng, hi - lo);
    if (cpos >= pos) ++cpos;
    SgnsBatch::Item item{walk[pos], walk[cpos], {}};
    for (std::size_t s = 0; s < params.negatives; ++s)
      item.negatives.push_back(noise.nodes()[static_cast<std::size_t>(noise.sample(rng, corpus.kinds[item.context]))]);
    batch.items.push_back(std::move(item));
  }
  return batch;
}

double sgns_loss(const Embedding& emb, const SgnsBatch& batch) {
  double loss = 0;
  for (const auto& it : batch.items) {
    const auto c = emb.row_of(it.center), o = emb.row_of(it.context);
    if (c < 0 || o < 0) throw Error("sgns_loss: node missing from embedding");
    loss += softplus_neg(emb.vectors.row(c).dot(emb.context.row(o)));
    for (auto n : it.negatives) {
      const auto r = emb.row_of(n);
      if (r < 0) throw Error("sgns_loss: node missing from embedding");
      loss += softplus_neg(-emb.vectors.row(c).dot(emb.context.row(r)));
    }
  }
  return batch.items.empty() ? 0.0 : loss / static_cast<double>(batch.items.size());
}

void write_embedding_csv(std::ostream& out, const Embedding& emb, std::span<const std::string> labels) {
  out << "node";
  for (std::size_t k = 0; k < emb.dim(); ++k) out << ",dim_" << k;
  out << '\n';
  for (std::size_t r = 0; r < emb.nodes.size(); ++r) {
    if (emb.nodes[r] >= labels.size()) throw Error("write_embedding_csv: missing label");
    out << labels[emb.nodes[r]];
    for (Eigen::Index k = 0; k < emb.vectors.cols(); ++k)
      out << ',' << format_real(emb.vectors(static_cast<Eigen::Index>(r), k));
    out << '\n';
  }
}

}  // namespace hinmhp
