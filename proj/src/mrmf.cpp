#include "hinmhp/mrmf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include "hinmhp/cohort.hpp"
#include "hinmhp/rng.hpp"

namespace hinmhp {

void check_config(const TrainConfig& cfg) {
  if (cfg.dim < 1) throw Error("train: latent dimension must be >= 1");
  if (!(cfg.learning_rate > 0) || !std::isfinite(cfg.learning_rate)) throw Error("train: learning rate must be > 0");
  if (!(cfg.l2 >= 0) || !std::isfinite(cfg.l2)) throw Error("train: l2 must be >= 0");
  if (cfg.epochs < 1) throw Error("train: epochs must be >= 1");
  if (cfg.negatives_per_positive < 1) throw Error("train: negatives_per_positive must be >= 1");
}

std::vector<RelationSpec> relations_for(EdgeKindSet side, std::size_t negatives_per_positive) {
  std::vector<RelationSpec> out{{EdgeKind::IM, 1.0, negatives_per_positive}};
  for (auto k : side.kinds())
    if (!is_target(k)) out.push_back({k, 1.0, negatives_per_positive});
  return out;
}

void write_training_log(std::ostream& out, const TrainingLog& log) {
  out << "epoch,objective\n";
  for (std::size_t e = 0; e < log.size(); ++e) out << e << ',' << format_real(log[e]) << '\n';
}

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct Sample {
  std::uint32_t rel;
  std::uint32_t u;
  std::uint32_t v;
  float y;
  float weight;
};

/// Training data of one relation. Node indices are HIN indices; `rows` and
/// `cols` list them in label order so sampling does not depend on indexing.
struct RelationData {
  RelationSpec spec;
  NodeKind col_kind;
  std::vector<Sample> observed;
  std::unordered_set<std::uint64_t> observed_keys;
  std::vector<std::uint32_t> rows;  // eligible for negatives
  std::vector<std::uint32_t> cols;
  std::vector<std::uint8_t> row_eligible;
  std::size_t non_edges = 0;
  std::size_t draws = 0;

  std::uint64_t key(std::uint32_t u, std::uint32_t v) const { return (std::uint64_t{u} << 32) | v; }
  bool is_non_edge(std::uint32_t u, std::uint32_t v) const {
    return !(spec.kind == EdgeKind::II && u == v) && !observed_keys.count(key(u, v));
  }
};

std::vector<std::uint32_t> label_order(const Hin& hin, NodeKind k) {
  const auto& labels = hin.labels(k);
  std::vector<std::uint32_t> idx(labels.size());
  std::iota(idx.begin(), idx.end(), 0u);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return labels[a] < labels[b]; });
  return idx;
}

std::vector<Sample> draw_negatives(const RelationData& r, std::uint32_t rel, Rng& rng) {
  std::vector<Sample> out;
  out.reserve(r.draws);
  if (r.non_edges <= 3 * r.draws) {
    for (auto u : r.rows)
      for (auto v : r.cols)
        if (r.is_non_edge(u, v)) out.push_back({rel, u, v, 0.0f, 1.0f});
    for (std::size_t i = 0; i < r.draws; ++i) std::swap(out[i], out[i + uniform_index(rng, out.size() - i)]);
    out.resize(r.draws);
  } else {
    std::unordered_set<std::uint64_t> taken;
    while (out.size() < r.draws) {
      const auto u = r.rows[uniform_index(rng, r.rows.size())];
      const auto v = r.cols[uniform_index(rng, r.cols.size())];
      if (r.is_non_edge(u, v) && taken.insert(r.key(u, v)).second) out.push_back({rel, u, v, 0.0f, 1.0f});
    }
  }
  return out;
}

class DmfTrainer {
 public:
  DmfTrainer(const Hin& hin, std::span<const RelationSpec> relations, const TrainConfig& cfg) : cfg_(cfg) {
    check_config(cfg);
    if (relations.empty()) throw Error("train_dmf: no relations");
    std::array<bool, kEdgeKindCount> seen{};
    used_kinds_[to_index(NodeKind::Individual)] = true;
    for (const auto& spec : relations) {
      if (seen[to_index(spec.kind)]) throw Error("train_dmf: relation " + std::string(name(spec.kind)) + " listed twice");
      seen[to_index(spec.kind)] = true;
      if (!(spec.alpha >= 0)) throw Error("train_dmf: relation weight must be >= 0");
      if (spec.negatives_per_positive < 1) throw Error("train_dmf: negatives_per_positive must be >= 1");
      if (hin.edge_count(spec.kind) == 0) throw Error("train_dmf: empty relation " + std::string(name(spec.kind)));
      used_kinds_[to_index(far_kind(spec.kind))] = true;
      rels_.push_back(prepare(hin, spec));
    }

    const auto d = static_cast<Eigen::Index>(cfg.dim);
    std::normal_distribution<double> init(0.0, 0.1);
    for (auto k : kAllNodeKinds) {
      auto& u = factors_[to_index(k)];
      u.resize(static_cast<Eigen::Index>(hin.node_count(k)), d);
      const auto& labels = hin.labels(k);
      for (std::size_t i = 0; i < labels.size(); ++i) {
        Rng rng(derive_seed(cfg.seed, {to_index(k), fnv1a(labels[i])}));
        for (Eigen::Index c = 0; c < d; ++c) u(static_cast<Eigen::Index>(i), c) = init(rng);
      }
    }
    std::normal_distribution<double> jitter(0.0, 0.01);
    for (const auto& r : rels_) {
      Rng rng(derive_seed(cfg.seed, {0x57, to_index(r.spec.kind)}));
      RowMatrix w = RowMatrix::Identity(d, d);
      for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] += jitter(rng);
      interactions_.push_back(std::move(w));
    }
  }

  DmfModel run() {
    DmfModel model;
    double current = objective();
    if (!std::isfinite(current)) throw Error("train_dmf: non-finite initial objective");
    model.log.push_back(current);
    double lr = cfg_.learning_rate;
    for (std::size_t epoch = 0; epoch < cfg_.epochs; ++epoch) {
      const auto saved_u = factors_;
      const auto saved_w = interactions_;
      Rng rng(derive_seed(cfg_.seed, {0xE0, epoch}));
      sgd_epoch(rng, lr);
      const double next = objective();
      if (!std::isfinite(next)) throw Error("train_dmf: objective diverged at epoch " + std::to_string(epoch + 1));
      if (next > current) {
        factors_ = saved_u;
        interactions_ = saved_w;
        lr *= 0.5;
      } else {
        current = next;
      }
      model.log.push_back(current);
    }
    for (auto k : kAllNodeKinds) model.factors[to_index(k)] = factors_[to_index(k)];
    for (std::size_t r = 0; r < rels_.size(); ++r)
      model.interactions[to_index(rels_[r].spec.kind)] = Eigen::MatrixXd(interactions_[r]);
    return model;
  }

 private:
  RelationData prepare(const Hin& hin, const RelationSpec& spec) {
    RelationData r;
    r.spec = spec;
    r.col_kind = far_kind(spec.kind);
    const auto rel = static_cast<std::uint32_t>(rels_.size());
    const auto n_rows = hin.node_count(NodeKind::Individual);
    std::vector<std::uint8_t> has_edge(n_rows, 0);
    auto add = [&](std::uint32_t u, std::uint32_t v, double w) {
      r.observed.push_back({rel, u, v, 1.0f, static_cast<float>(apply_weight_mode(w, spec.kind == EdgeKind::II ? cfg_.ii_weights : WeightMode::Binary))});
      r.observed_keys.insert(r.key(u, v));
      has_edge[u] = 1;
    };
    for (const auto& e : hin.edges(spec.kind)) {
      add(e.u, e.v, e.weight);
      if (spec.kind == EdgeKind::II) add(e.v, e.u, e.weight);
    }
    // Rows without a target edge are unlabelled (held out), not negatives.
    r.row_eligible.assign(n_rows, 1);
    if (is_target(spec.kind)) r.row_eligible = has_edge;
    for (auto u : label_order(hin, NodeKind::Individual))
      if (r.row_eligible[u]) r.rows.push_back(u);
    r.cols = label_order(hin, r.col_kind);

    std::sort(r.observed.begin(), r.observed.end(), [&](const Sample& a, const Sample& b) {
      const auto& li = hin.labels(NodeKind::Individual);
      const auto& lc = hin.labels(r.col_kind);
      return std::tie(li[a.u], lc[a.v]) < std::tie(li[b.u], lc[b.v]);
    });
    r.non_edges = r.rows.size() * r.cols.size() - r.observed.size() - (spec.kind == EdgeKind::II ? r.rows.size() : 0);
    r.draws = std::min(spec.negatives_per_positive * r.observed.size(), r.non_edges);
    return r;
  }

  void sgd_epoch(Rng& rng, double lr) {
    std::vector<Sample> samples;
    for (std::uint32_t i = 0; i < rels_.size(); ++i) {
      samples.insert(samples.end(), rels_[i].observed.begin(), rels_[i].observed.end());
      const auto neg = draw_negatives(rels_[i], i, rng);
      samples.insert(samples.end(), neg.begin(), neg.end());
    }
    std::shuffle(samples.begin(), samples.end(), rng);

    const auto d = static_cast<Eigen::Index>(cfg_.dim);
    Eigen::VectorXd a(d), b(d), wb(d), aw(d);
    auto& ui = factors_[to_index(NodeKind::Individual)];
    for (const auto& s : samples) {
      const auto& rel = rels_[s.rel];
      auto& w = interactions_[s.rel];
      auto& uc = factors_[to_index(rel.col_kind)];
      a = ui.row(s.u).transpose();
      b = uc.row(s.v).transpose();
      wb.noalias() = w * b;
      aw.noalias() = w.transpose() * a;
      const double p = sigmoid(a.dot(wb));
      const double g = lr * 2.0 * rel.spec.alpha * s.weight * (p - s.y) * p * (1.0 - p);
      ui.row(s.u) -= g * wb.transpose();
      uc.row(s.v) -= g * aw.transpose();
      w.noalias() -= g * a * b.transpose();
    }
    const double shrink = 1.0 - 2.0 * lr * cfg_.l2;
    for (auto k : kAllNodeKinds)
      if (used_kinds_[to_index(k)]) factors_[to_index(k)] *= shrink;
    for (auto& w : interactions_) w *= shrink;
  }

  double objective() const {
    double total = 0;
    const auto& ui = factors_[to_index(NodeKind::Individual)];
    for (std::size_t i = 0; i < rels_.size(); ++i) {
      const auto& r = rels_[i];
      const RowMatrix s = ((ui * interactions_[i]) * factors_[to_index(r.col_kind)].transpose())
                              .unaryExpr([](double x) { return sigmoid(x); });
      double sq_all = 0;
      for (auto u : r.rows) sq_all += s.row(u).squaredNorm();
      if (r.spec.kind == EdgeKind::II)
        for (auto u : r.rows) sq_all -= s(u, u) * s(u, u);
      double obs_loss = 0;
      for (const auto& o : r.observed) {
        const double p = s(o.u, o.v);
        obs_loss += o.weight * (p - 1.0) * (p - 1.0);
        if (r.row_eligible[o.u]) sq_all -= p * p;
      }
      const double neg_weight = r.non_edges ? static_cast<double>(r.draws) / static_cast<double>(r.non_edges) : 0.0;
      total += r.spec.alpha * (obs_loss + neg_weight * std::max(sq_all, 0.0));
    }
    double reg = 0;
    for (auto k : kAllNodeKinds)
      if (used_kinds_[to_index(k)]) reg += factors_[to_index(k)].squaredNorm();
    for (const auto& w : interactions_) reg += w.squaredNorm();
    return total + cfg_.l2 * reg;
  }

  TrainConfig cfg_;
  std::vector<RelationData> rels_;
  std::array<bool, kNodeKindCount> used_kinds_{};
  std::array<RowMatrix, kNodeKindCount> factors_;
  std::vector<RowMatrix> interactions_;
};

}  // namespace

double DmfModel::score(EdgeKind r, std::uint32_t u, std::uint32_t v) const {
  const auto& w = interactions[to_index(r)];
  if (!w) throw Error("dmf: relation " + std::string(name(r)) + " was not trained");
  const auto& ui = factors[to_index(NodeKind::Individual)];
  const auto& uc = factors[to_index(far_kind(r))];
  if (u >= ui.rows() || v >= uc.rows()) throw Error("dmf: node index out of range");
  return sigmoid(ui.row(u).dot(uc.row(v) * w->transpose()));
}

Eigen::MatrixXd DmfModel::scores(EdgeKind r) const {
  const auto& w = interactions[to_index(r)];
  if (!w) throw Error("dmf: relation " + std::string(name(r)) + " was not trained");
  return (factors[to_index(NodeKind::Individual)] * *w * factors[to_index(far_kind(r))].transpose())
      .unaryExpr([](double x) { return sigmoid(x); });
}

DmfModel train_dmf(const Hin& hin, std::span<const RelationSpec> relations, const TrainConfig& cfg) {
  return DmfTrainer(hin, relations, cfg).run();
}

// RESCAL / DEDICOM -----------------------------------------------------------

namespace {

void check_slices(std::span<const Eigen::MatrixXd> slices) {
  if (slices.empty()) throw Error("factorisation: no slices");
  const auto n = slices[0].rows();
  for (const auto& x : slices) {
    if (x.rows() != n || x.cols() != n) throw Error("factorisation: slices must share one square dimension");
    if (!x.allFinite()) throw Error("factorisation: non-finite slice entry");
  }
}

Eigen::MatrixXd random_matrix(Eigen::Index r, Eigen::Index c, double sd, Rng& rng) {
  std::normal_distribution<double> dist(0.0, sd);
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = dist(rng);
  return m;
}

/// Block-wise gradient descent: each epoch steps every parameter block in
/// turn along its full-batch gradient, with a per-block step size that halves
/// on increase and grows 1.2x on success. `step(params, grads, lr, block)`
/// moves one block.
template <typename Params, typename Eval, typename Step>
TrainingLog descend(Params& params, std::size_t blocks, const TrainConfig& cfg, Eval&& eval, Step&& step,
                    const char* what) {
  TrainingLog log;
  Params grad = params;
  double f = eval(params, &grad);
  if (!std::isfinite(f)) throw Error(std::string(what) + ": non-finite initial objective");
  log.push_back(f);
  std::vector<double> lr(blocks, cfg.learning_rate);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    bool moved = false;
    for (std::size_t b = 0; b < blocks; ++b) {
      while (lr[b] > 1e-30) {
        Params trial = params;
        step(trial, grad, lr[b], b);
        const double ft = eval(trial, nullptr);
        if (std::isfinite(ft) && ft <= f) {
          params = std::move(trial);
          f = eval(params, &grad);
          lr[b] *= 1.2;
          moved = true;
          break;
        }
        lr[b] *= 0.5;
      }
    }
    if (!std::isfinite(f)) throw Error(std::string(what) + ": objective diverged");
    log.push_back(f);
    if (!moved) break;
  }
  return log;
}

struct RescalParams {
  Eigen::MatrixXd a;
  std::vector<Eigen::MatrixXd> cores;
};

struct DedicomParams {
  Eigen::MatrixXd a;
  Eigen::MatrixXd core;
  std::vector<Eigen::VectorXd> scales;
};

/// Leading eigenvectors (by |eigenvalue|) of the mean symmetrised slice,
/// padded with small noise when dim exceeds the node count.
Eigen::MatrixXd spectral_factors(std::span<const Eigen::MatrixXd> slices, Eigen::Index d, Rng& rng) {
  const auto n = slices[0].rows();
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(n, n);
  for (const auto& x : slices) mean += 0.5 * (x + x.transpose());
  mean /= static_cast<double>(slices.size());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(mean);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return std::abs(eig.eigenvalues()[a]) > std::abs(eig.eigenvalues()[b]);
  });
  Eigen::MatrixXd a = random_matrix(n, d, 0.01, rng);
  for (Eigen::Index c = 0; c < std::min(n, d); ++c) a.col(c) = eig.eigenvectors().col(order[static_cast<std::size_t>(c)]);
  return a;
}

constexpr std::size_t kDedicomStarts = 4;

Eigen::MatrixXd dedicom_core(const Eigen::MatrixXd& r, const Eigen::VectorXd& delta) {
  return delta.asDiagonal() * r * delta.asDiagonal();
}

}  // namespace

double rescal_objective(std::span<const Eigen::MatrixXd> slices, const Eigen::MatrixXd& a,
                        std::span<const Eigen::MatrixXd> cores, double l2, Eigen::MatrixXd* grad_a,
                        std::vector<Eigen::MatrixXd>* grad_cores) {
  double f = l2 * a.squaredNorm();
  if (grad_a) *grad_a = 2.0 * l2 * a;
  if (grad_cores) grad_cores->assign(cores.size(), Eigen::MatrixXd());
  for (std::size_t k = 0; k < slices.size(); ++k) {
    const Eigen::MatrixXd ar = a * cores[k];
    const Eigen::MatrixXd e = slices[k] - ar * a.transpose();
    f += e.squaredNorm() + l2 * cores[k].squaredNorm();
    if (grad_a) {
      const Eigen::MatrixXd ea = e * a;
      grad_a->noalias() -= 2.0 * (ea * cores[k].transpose() + e.transpose() * ar);
    }
    if (grad_cores) (*grad_cores)[k] = -2.0 * a.transpose() * e * a + 2.0 * l2 * cores[k];
  }
  return f;
}

double dedicom_objective(std::span<const Eigen::MatrixXd> slices, const Eigen::MatrixXd& a,
                         const Eigen::MatrixXd& core, std::span<const Eigen::VectorXd> scales, double l2,
                         Eigen::MatrixXd* grad_a, Eigen::MatrixXd* grad_core,
                         std::vector<Eigen::VectorXd>* grad_scales) {
  double f = l2 * (a.squaredNorm() + core.squaredNorm());
  if (grad_a) *grad_a = 2.0 * l2 * a;
  if (grad_core) *grad_core = 2.0 * l2 * core;
  if (grad_scales) grad_scales->assign(scales.size(), Eigen::VectorXd());
  for (std::size_t k = 0; k < slices.size(); ++k) {
    f += l2 * scales[k].squaredNorm();
    const Eigen::MatrixXd m = dedicom_core(core, scales[k]);
    const Eigen::MatrixXd am = a * m;
    const Eigen::MatrixXd e = slices[k] - am * a.transpose();
    f += e.squaredNorm();
    if (!grad_a && !grad_core && !grad_scales) continue;
    if (grad_a) {
      const Eigen::MatrixXd ea = e * a;
      grad_a->noalias() -= 2.0 * (ea * m.transpose() + e.transpose() * am);
    }
    // Gradient with respect to the effective core D R D.
    const Eigen::MatrixXd g = -2.0 * a.transpose() * e * a;
    if (grad_core) grad_core->noalias() += scales[k].asDiagonal() * g * scales[k].asDiagonal();
    if (grad_scales) {
      const Eigen::MatrixXd gr = g.cwiseProduct(core);
      (*grad_scales)[k] = gr * scales[k] + gr.transpose() * scales[k] + 2.0 * l2 * scales[k];
    }
  }
  return f;
}

RescalModel train_rescal(std::span<const Eigen::MatrixXd> slices, const TrainConfig& cfg) {
  check_config(cfg);
  check_slices(slices);
  const auto d = static_cast<Eigen::Index>(cfg.dim);
  Rng rng(derive_seed(cfg.seed, {0x8E5C}));
  RescalParams p;
  p.a = spectral_factors(slices, d, rng);
  for (const auto& x : slices) p.cores.push_back(p.a.transpose() * (0.5 * (x + x.transpose())) * p.a);
  auto eval = [&](const RescalParams& q, RescalParams* g) {
    return rescal_objective(slices, q.a, q.cores, cfg.l2, g ? &g->a : nullptr, g ? &g->cores : nullptr);
  };
  auto step = [](RescalParams& q, const RescalParams& g, double lr, std::size_t block) {
    if (block == 0) q.a -= lr * g.a;
    else
      for (std::size_t k = 0; k < q.cores.size(); ++k) q.cores[k] -= lr * g.cores[k];
  };
  RescalModel m;
  m.log = descend(p, 2, cfg, eval, step, "train_rescal");
  m.a = std::move(p.a);
  m.cores = std::move(p.cores);
  return m;
}

Eigen::MatrixXd DedicomModel::reconstruct(std::size_t k) const {
  return a * dedicom_core(core, scales[k]) * a.transpose();
}

DedicomModel train_dedicom(std::span<const Eigen::MatrixXd> slices, const TrainConfig& cfg) {
  check_config(cfg);
  check_slices(slices);
  const auto d = static_cast<Eigen::Index>(cfg.dim);
  Rng rng(derive_seed(cfg.seed, {0xDED1}));
  const Eigen::MatrixXd spectral = spectral_factors(slices, d, rng);
  auto start = [&](const Eigen::MatrixXd& a) {
    DedicomParams q;
    q.a = a;
    q.core = Eigen::MatrixXd::Zero(d, d);
    for (const auto& x : slices) q.core += a.transpose() * (0.5 * (x + x.transpose())) * a;
    q.core /= static_cast<double>(slices.size());
    q.scales.assign(slices.size(), Eigen::VectorXd::Ones(d));
    return q;
  };
  auto eval = [&](const DedicomParams& q, DedicomParams* g) {
    return dedicom_objective(slices, q.a, q.core, q.scales, cfg.l2, g ? &g->a : nullptr, g ? &g->core : nullptr,
                             g ? &g->scales : nullptr);
  };
  auto step = [](DedicomParams& q, const DedicomParams& g, double lr, std::size_t block) {
    if (block == 0) q.a -= lr * g.a;
    else if (block == 1) q.core -= lr * g.core;
    else
      for (std::size_t k = 0; k < q.scales.size(); ++k) q.scales[k] -= lr * g.scales[k];
  };
  // The scaled core has poor local minima: burn in several rotations of the
  // spectral start and continue from the lowest objective.
  auto burn = cfg;
  burn.epochs = std::min<std::size_t>(cfg.epochs, std::max<std::size_t>(50, cfg.epochs / 10));
  DedicomParams p;
  TrainingLog head;
  for (std::size_t r = 0; r < kDedicomStarts; ++r) {
    Eigen::MatrixXd rot = Eigen::MatrixXd::Identity(d, d);
    if (r > 0) rot = Eigen::HouseholderQR<Eigen::MatrixXd>(random_matrix(d, d, 1.0, rng)).householderQ();
    auto q = start(spectral * rot);
    auto log = descend(q, 3, burn, eval, step, "train_dedicom");
    if (r == 0 || log.back() < head.back()) {
      p = std::move(q);
      head = std::move(log);
    }
  }
  auto rest = cfg;
  rest.epochs = cfg.epochs - burn.epochs;
  DedicomModel m;
  m.log = std::move(head);
  if (rest.epochs > 0) {
    const auto tail = descend(p, 3, rest, eval, step, "train_dedicom");
    m.log.insert(m.log.end(), tail.begin() + 1, tail.end());
  }
  m.a = std::move(p.a);
  m.core = std::move(p.core);
  m.scales = std::move(p.scales);
  return m;
}

std::vector<Eigen::MatrixXd> hin_slices(const Hin& hin, EdgeKindSet side, WeightMode ii_weights) {
  std::vector<Eigen::MatrixXd> out;
  out.emplace_back(slice_matrix(hin, EdgeKind::IM, WeightMode::Binary));
  for (auto k : side.kinds())
    if (!is_target(k))
      out.emplace_back(slice_matrix(hin, k, k == EdgeKind::II ? ii_weights : WeightMode::Binary));
  return out;
}

namespace {

Eigen::MatrixXd target_block(const Hin& hin, const Eigen::MatrixXd& a, const Eigen::MatrixXd& core) {
  const auto off_i = static_cast<Eigen::Index>(hin.kind_offset(NodeKind::Individual));
  const auto off_m = static_cast<Eigen::Index>(hin.kind_offset(NodeKind::MentalHealth));
  const auto n = static_cast<Eigen::Index>(hin.node_count(NodeKind::Individual));
  if (a.rows() != static_cast<Eigen::Index>(hin.node_count())) throw Error("target_scores: model does not match HIN");
  return a.middleRows(off_i, n) * core * a.middleRows(off_m, 2).transpose();
}

}  // namespace

Eigen::MatrixXd target_scores(const DmfModel& m) { return m.scores(EdgeKind::IM); }

Eigen::MatrixXd target_scores(const RescalModel& m, const Hin& hin) { return target_block(hin, m.a, m.cores.at(0)); }

Eigen::MatrixXd target_scores(const DedicomModel& m, const Hin& hin) {
  return target_block(hin, m.a, dedicom_core(m.core, m.scales.at(0)));
}

bool predict_condition(double positive_score, double negative_score) {
  if (!std::isfinite(positive_score) || !std::isfinite(negative_score))
    throw Error("predict_condition: non-finite score");
  return positive_score > negative_score;
}

std::vector<EdgeKindSet> ablation_combos() {
  const auto side = EdgeKindSet::side_kinds().kinds();
  std::vector<std::vector<std::size_t>> subsets;
  for (unsigned mask = 1; mask < (1u << side.size()); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < side.size(); ++i)
      if (mask & (1u << i)) s.push_back(i);
    subsets.push_back(std::move(s));
  }
  std::sort(subsets.begin(), subsets.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  std::vector<EdgeKindSet> out;
  for (const auto& s : subsets) {
    EdgeKindSet set;
    for (auto i : s) set.insert(side[i]);
    out.push_back(set);
  }
  return out;
}

// Checkpoints -----------------------------------------------------------------

namespace {

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
  const auto r = j.at("rows").get<Eigen::Index>();
  const auto c = j.at("cols").get<Eigen::Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(data.size()) != r * c) throw Error("checkpoint: matrix size mismatch");
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index k = 0; k < c; ++k) m(i, k) = data[static_cast<std::size_t>(i * c + k)];
  return m;
}

}  // namespace

nlohmann::json to_json(const DmfModel& m) {
  nlohmann::json j = {{"model", "dmf"}, {"dim", m.dim()}};
  for (auto k : kAllNodeKinds) j["factors"][std::string(name(k))] = matrix_json(m.factors[to_index(k)]);
  for (auto k : kAllEdgeKinds)
    if (m.interactions[to_index(k)]) j["interactions"][std::string(name(k))] = matrix_json(*m.interactions[to_index(k)]);
  j["log"] = m.log;
  return j;
}

nlohmann::json to_json(const RescalModel& m) {
  nlohmann::json j = {{"model", "rescal"}, {"dim", m.a.cols()}, {"a", matrix_json(m.a)}};
  for (const auto& r : m.cores) j["cores"].push_back(matrix_json(r));
  j["log"] = m.log;
  return j;
}

nlohmann::json to_json(const DedicomModel& m) {
  nlohmann::json j = {{"model", "dedicom"}, {"dim", m.a.cols()}, {"a", matrix_json(m.a)}, {"core", matrix_json(m.core)}};
  for (const auto& s : m.scales) j["scales"].push_back(std::vector<double>(s.data(), s.data() + s.size()));
  j["log"] = m.log;
  return j;
}

DmfModel dmf_from_json(const nlohmann::json& j) {
  if (j.at("model") != "dmf") throw Error("checkpoint: not a DMF model");
  DmfModel m;
  for (auto k : kAllNodeKinds) m.factors[to_index(k)] = matrix_from_json(j.at("factors").at(std::string(name(k))));
  if (j.contains("interactions"))
    for (auto k : kAllEdgeKinds)
      if (j["interactions"].contains(std::string(name(k))))
        m.interactions[to_index(k)] = matrix_from_json(j["interactions"][std::string(name(k))]);
  m.log = j.value("log", TrainingLog{});
  return m;
}

}  // namespace hinmhp
