#include "hinmhp/herec.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hinmhp/rng.hpp"

namespace hinmhp {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// |Individual| x dim embedding learned from one metapath.
Eigen::MatrixXd metapath_embedding(const Hin& hin, const Metapath& mp, std::size_t index, const HerecConfig& cfg) {
  auto walks = cfg.walks;
  walks.seed = derive_seed(cfg.seed, {0x3A1C, index});
  auto corpus = metapath_walks(hin, mp, walks);
  for (auto& w : corpus.walks)
    w.erase(std::remove_if(w.begin(), w.end(), [&](auto v) { return corpus.kinds[v] != NodeKind::Individual; }),
            w.end());
  auto sg = cfg.skipgram;
  sg.dim = cfg.dim;
  sg.seed = derive_seed(cfg.seed, {0x5C1B, index});
  const auto emb = train_skipgram(corpus, sg);

  const auto n = hin.node_count(NodeKind::Individual);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cfg.dim));
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto r = emb.row_of(static_cast<std::uint32_t>(hin.global_index({NodeKind::Individual, i})));
    if (r >= 0) out.row(i) = emb.vectors.row(r);
  }
  return out;
}

}  // namespace

HerecResult herec_scores(const Hin& hin, std::span<const Metapath> metapaths, const HerecConfig& cfg) {
  if (metapaths.empty()) throw Error("herec: no metapaths");
  if (cfg.dim < 1) throw Error("herec: dimension must be >= 1");
  if (cfg.epochs < 1 || !(cfg.learning_rate > 0) || !(cfg.l2 >= 0)) throw Error("herec: invalid training settings");
  for (const auto& mp : metapaths) check_metapath(mp);

  const auto n = static_cast<Eigen::Index>(hin.node_count(NodeKind::Individual));
  const auto d = static_cast<Eigen::Index>(cfg.dim);
  const auto L = metapaths.size();

  struct Rating {
    std::uint32_t i;
    std::uint32_t m;
    double y;
  };
  std::vector<Rating> ratings;
  for (const auto& e : hin.edges(EdgeKind::IM)) {
    ratings.push_back({e.u, e.v, 1.0});
    ratings.push_back({e.u, 1 - e.v, 0.0});
  }
  if (ratings.empty()) throw Error("herec: no training IM edges");

  std::vector<Eigen::MatrixXd> emb;
  for (std::size_t l = 0; l < L; ++l) emb.push_back(metapath_embedding(hin, metapaths[l], l, cfg));

  Rng rng(derive_seed(cfg.seed, {0xF05E}));
  std::normal_distribution<double> init(0.0, 0.1);
  auto random = [&](Eigen::Index r, Eigen::Index c) {
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = init(rng);
    return m;
  };
  // Rows with no rating keep x_i = 0, so held-out scores come from the fused part.
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, d);
  Eigen::MatrixXd y = random(2, d);
  Eigen::MatrixXd gamma = random(2, d);
  std::vector<Eigen::MatrixXd> mats;
  std::vector<Eigen::VectorXd> bias;
  for (std::size_t l = 0; l < L; ++l) {
    mats.push_back(Eigen::MatrixXd::Identity(d, d) + 0.1 * random(d, d));
    bias.push_back(Eigen::VectorXd::Zero(d));
  }
  Eigen::MatrixXd w = Eigen::MatrixXd::Constant(n, static_cast<Eigen::Index>(L), 1.0 / static_cast<double>(L));

  std::vector<Eigen::VectorXd> proj(L);
  auto fuse = [&](std::uint32_t i) {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(d);
    for (std::size_t l = 0; l < L; ++l) {
      proj[l] = mats[l] * emb[l].row(i).transpose() + bias[l];
      z += w(i, static_cast<Eigen::Index>(l)) * proj[l];
    }
    return Eigen::VectorXd(z.unaryExpr([](double v) { return sigmoid(v); }));
  };
  auto objective = [&]() {
    double f = 0;
    for (const auto& r : ratings) {
      const auto e = fuse(r.i);
      const double pred = x.row(r.i).dot(y.row(r.m)) + e.dot(gamma.row(r.m).transpose());
      f += (pred - r.y) * (pred - r.y);
    }
    double reg = x.squaredNorm() + y.squaredNorm() + gamma.squaredNorm() + w.squaredNorm();
    for (std::size_t l = 0; l < L; ++l) reg += mats[l].squaredNorm() + bias[l].squaredNorm();
    return f + cfg.l2 * reg;
  };

  HerecResult result;
  result.log.push_back(objective());
  const double lr = cfg.learning_rate, lam = cfg.l2;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(ratings.begin(), ratings.end(), rng);
    for (const auto& r : ratings) {
      const auto e = fuse(r.i);
      const Eigen::VectorXd xi = x.row(r.i).transpose(), ym = y.row(r.m).transpose(), gm = gamma.row(r.m).transpose();
      const double err = xi.dot(ym) + e.dot(gm) - r.y;
      const Eigen::VectorXd dz = (2.0 * err * gm).cwiseProduct(e.cwiseProduct(Eigen::VectorXd::Ones(d) - e));
      x.row(r.i) -= lr * (2.0 * err * ym + lam * xi).transpose();
      y.row(r.m) -= lr * (2.0 * err * xi + lam * ym).transpose();
      gamma.row(r.m) -= lr * (2.0 * err * e + lam * gm).transpose();
      for (std::size_t l = 0; l < L; ++l) {
        const auto li = static_cast<Eigen::Index>(l);
        const double wl = w(r.i, li);
        w(r.i, li) -= lr * (dz.dot(proj[l]) + lam * wl);
        mats[l] -= lr * (wl * dz * emb[l].row(r.i) + lam * mats[l]);
        bias[l] -= lr * (wl * dz + lam * bias[l]);
      }
    }
    const double f = objective();
    if (!std::isfinite(f)) throw Error("herec: objective diverged");
    result.log.push_back(f);
  }

  result.scores.resize(n, 2);
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto e = fuse(i);
    for (Eigen::Index m = 0; m < 2; ++m) result.scores(i, m) = x.row(i).dot(y.row(m)) + e.dot(gamma.row(m).transpose());
  }
  return result;
}

}  // namespace hinmhp
