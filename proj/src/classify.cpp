#include "hinmhp/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>

#include "hinmhp/rng.hpp"

namespace hinmhp {

namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double logistic(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void check_rate(double rate) {
  if (!(rate > 0.0 && rate < 1.0)) throw Error("target rate must lie in (0, 1)");
}

}  // namespace

void check_features(const FeatureMatrix& x) {
  if (x.names.size() != x.cols()) throw Error("feature matrix: name count does not match column count");
  if (!x.values.allFinite()) throw Error("feature matrix: non-finite entry");
}

FeatureMatrix select_rows(const FeatureMatrix& x, std::span<const std::uint32_t> rows) {
  FeatureMatrix out{x.names, Eigen::MatrixXd(static_cast<Eigen::Index>(rows.size()), x.values.cols())};
  for (std::size_t r = 0; r < rows.size(); ++r) out.values.row(static_cast<Eigen::Index>(r)) = x.values.row(rows[r]);
  return out;
}

double logreg_objective(const Eigen::MatrixXd& x, const std::vector<bool>& y, const Eigen::VectorXd& w, double b,
                        double lambda, Eigen::VectorXd* grad_w, double* grad_b) {
  const auto n = x.rows();
  const Eigen::VectorXd z = (x * w).array() + b;
  double f = 0;
  Eigen::VectorXd resid(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool yi = y[static_cast<std::size_t>(i)];
    f += softplus(yi ? -z(i) : z(i));
    resid(i) = logistic(z(i)) - (yi ? 1.0 : 0.0);
  }
  const double inv = 1.0 / static_cast<double>(n);
  if (grad_w) *grad_w = inv * (x.transpose() * resid) + lambda * w;
  if (grad_b) *grad_b = inv * resid.sum();
  return inv * f + 0.5 * lambda * w.squaredNorm();
}

LogregModel fit_logreg(const FeatureMatrix& x, const std::vector<bool>& y, const LogregParams& params) {
  check_features(x);
  if (y.size() != x.rows()) throw Error("fit_logreg: label count does not match row count");
  if (y.empty() || std::all_of(y.begin(), y.end(), [&](bool v) { return v == y[0]; }))
    throw Error("fit_logreg: labels must contain both classes");
  if (!(params.lambda >= 0) || !(params.tol > 0)) throw Error("fit_logreg: invalid lambda or tolerance");

  LogregModel m;
  m.feature_names = x.names;
  m.lambda = params.lambda;
  m.weights = Eigen::VectorXd::Zero(x.values.cols());
  Eigen::VectorXd gw;
  double gb = 0;
  double f = logreg_objective(x.values, y, m.weights, m.bias, params.lambda, &gw, &gb);
  double step = 1.0;
  for (; m.iterations < params.max_iter; ++m.iterations) {
    if (std::max(gw.cwiseAbs().maxCoeff(), std::abs(gb)) < params.tol) break;
    const double gnorm2 = gw.squaredNorm() + gb * gb;
    bool accepted = false;
    for (; step > 1e-20; step *= 0.5) {
      const Eigen::VectorXd w = m.weights - step * gw;
      const double b = m.bias - step * gb;
      Eigen::VectorXd ngw;
      double ngb = 0;
      const double nf = logreg_objective(x.values, y, w, b, params.lambda, &ngw, &ngb);
      if (nf <= f - 0.5 * step * gnorm2) {
        m.weights = w;
        m.bias = b;
        f = nf;
        gw = std::move(ngw);
        gb = ngb;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    step *= 2.0;
  }
  m.objective = f;
  return m;
}

Eigen::VectorXd predict_proba(const LogregModel& model, const Eigen::MatrixXd& x) {
  if (x.cols() != model.weights.size()) throw Error("predict_proba: feature count does not match model");
  const Eigen::VectorXd z = (x * model.weights).array() + model.bias;
  // Saturated scores are kept inside the open interval.
  constexpr double lo = std::numeric_limits<double>::min();
  const double hi = std::nextafter(1.0, 0.0);
  return z.unaryExpr([&](double v) { return std::clamp(logistic(v), lo, hi); });
}

std::size_t positive_count(double rate, std::size_t n) {
  check_rate(rate);
  return static_cast<std::size_t>(std::floor(rate * static_cast<double>(n) + 0.5));
}

std::vector<bool> calibrate_cutoff(std::span<const double> probs, double rate) {
  const auto k = positive_count(rate, probs.size());
  std::vector<std::size_t> order(probs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return probs[a] > probs[b]; });
  std::vector<bool> out(probs.size(), false);
  for (std::size_t r = 0; r < k; ++r) out[order[r]] = true;
  return out;
}

std::vector<bool> random_guess(double rate, std::size_t n, std::uint64_t seed) {
  const auto k = positive_count(rate, n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(seed, {0x7A2D}));
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<bool> out(n, false);
  for (std::size_t r = 0; r < k; ++r) out[order[r]] = true;
  return out;
}

FeatureMatrix nonnetwork_features(const CohortTable& cohort, const NonnetworkOptions& options) {
  check_cohort(cohort);
  using Getter = double (*)(const Individual&);
  struct Binned {
    const char* name;
    Getter get;
  };
  std::vector<Binned> binned = {
      {"agreeableness", [](const Individual& r) { return r.personality[0]; }},
      {"conscientiousness", [](const Individual& r) { return r.personality[1]; }},
      {"extraversion", [](const Individual& r) { return r.personality[2]; }},
      {"neuroticism", [](const Individual& r) { return r.personality[3]; }},
      {"openness", [](const Individual& r) { return r.personality[4]; }},
      {"sleep_quality", [](const Individual& r) { return r.sleep_quality; }},
      {"body_image", [](const Individual& r) { return r.wellbeing[0]; }},
      {"happiness", [](const Individual& r) { return r.wellbeing[1]; }},
      {"health", [](const Individual& r) { return r.wellbeing[2]; }},
      {"loneliness", [](const Individual& r) { return r.wellbeing[3]; }},
      {"self_esteem", [](const Individual& r) { return r.wellbeing[4]; }},
  };
  if (options.include_label_scores) {
    binned.push_back({"cesd", [](const Individual& r) { return r.cesd; }});
    binned.push_back({"stai", [](const Individual& r) { return r.stai; }});
  }
  binned.push_back({"avg_steps", [](const Individual& r) { return r.avg_steps; }});
  binned.push_back({"avg_sleep_minutes", [](const Individual& r) { return r.avg_sleep_minutes; }});
  binned.push_back({"sms_total", [](const Individual& r) { return static_cast<double>(r.sms_total); }});
  static constexpr const char* kSocial[] = {"gender", "race", "religion", "parents_education"};
  static constexpr const char* kLevels[] = {"low", "medium", "high"};

  const auto n = cohort.size();
  FeatureMatrix out;
  for (const auto& b : binned)
    for (const auto* lv : kLevels) out.names.push_back(std::string(b.name) + "=" + lv);
  for (std::size_t s = 0; s < 4; ++s)
    for (int c = 0; c < kSocialCardinality[s]; ++c) out.names.push_back(std::string(kSocial[s]) + "=" + std::to_string(c));
  out.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(out.names.size()));

  Eigen::Index col = 0;
  std::vector<double> vals(n);
  for (const auto& b : binned) {
    for (std::size_t i = 0; i < n; ++i) vals[i] = b.get(cohort.rows[i]);
    const auto bins = bin_scores(vals);
    for (std::size_t i = 0; i < n; ++i) out.values(static_cast<Eigen::Index>(i), col + static_cast<int>(bins[i])) = 1.0;
    col += 3;
  }
  for (std::size_t s = 0; s < 4; ++s) {
    for (std::size_t i = 0; i < n; ++i) out.values(static_cast<Eigen::Index>(i), col + cohort.rows[i].social[s]) = 1.0;
    col += kSocialCardinality[s];
  }
  return out;
}

Standardizer Standardizer::fit(const Eigen::MatrixXd& x) {
  if (x.rows() == 0) throw Error("standardizer: no rows");
  Standardizer s;
  s.mean = x.colwise().mean().transpose();
  s.scale.resize(x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const double sd = std::sqrt((x.col(c).array() - s.mean(c)).square().mean());
    s.scale(c) = sd > 1e-12 ? sd : 1.0;
  }
  return s;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& x) const {
  if (x.cols() != mean.size()) throw Error("standardizer: column count mismatch");
  return (x.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array();
}

void to_json(nlohmann::json& j, const LogregModel& m) {
  j = {{"feature_names", m.feature_names},
       {"weights", std::vector<double>(m.weights.data(), m.weights.data() + m.weights.size())},
       {"bias", m.bias},
       {"lambda", m.lambda},
       {"iterations", m.iterations},
       {"objective", m.objective}};
}

LogregModel logreg_from_json(const nlohmann::json& j) {
  LogregModel m;
  m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  const auto w = j.at("weights").get<std::vector<double>>();
  if (w.size() != m.feature_names.size()) throw Error("logreg json: weight count does not match feature names");
  m.weights = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
  m.bias = j.at("bias").get<double>();
  m.lambda = j.at("lambda").get<double>();
  m.iterations = j.at("iterations").get<std::size_t>();
  m.objective = j.at("objective").get<double>();
  return m;
}

}  // namespace hinmhp
