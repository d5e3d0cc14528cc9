#include <doctest.h>

#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "hinmhp/classify.hpp"

using namespace hinmhp;

namespace {

std::vector<bool> to_bools(std::initializer_list<int> v) { return std::vector<bool>(v.begin(), v.end()); }

FeatureMatrix one_column(const std::vector<double>& v) {
  FeatureMatrix x{{"x"}, Eigen::Map<const Eigen::MatrixXd>(v.data(), static_cast<Eigen::Index>(v.size()), 1)};
  return x;
}

}  // namespace

TEST_CASE("logreg gradient matches central differences") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  double worst = 0;
  for (int t = 0; t < 50; ++t) {
    const int n = 5 + t % 20, p = 1 + t % 7;
    Eigen::MatrixXd x(n, p);
    for (Eigen::Index k = 0; k < x.size(); ++k) x.data()[k] = g(rng);
    std::vector<bool> y(n);
    for (int i = 0; i < n; ++i) y[i] = rng() % 2;
    Eigen::VectorXd w(p);
    for (int k = 0; k < p; ++k) w(k) = g(rng);
    const double b = g(rng), lambda = 0.1 * (t % 3);
    const auto& ys = y;

    Eigen::VectorXd gw;
    double gb = 0;
    logreg_objective(x, ys, w, b, lambda, &gw, &gb);
    const double h = 1e-6;
    auto rel = [](double a, double fd) { return std::abs(a - fd) / std::max({std::abs(a), std::abs(fd), 1e-3}); };
    for (int k = 0; k < p; ++k) {
      Eigen::VectorXd wp = w, wm = w;
      wp(k) += h;
      wm(k) -= h;
      const double fd = (logreg_objective(x, ys, wp, b, lambda) - logreg_objective(x, ys, wm, b, lambda)) / (2 * h);
      worst = std::max(worst, rel(gw(k), fd));
    }
    const double fd = (logreg_objective(x, ys, w, b + h, lambda) - logreg_objective(x, ys, w, b - h, lambda)) / (2 * h);
    worst = std::max(worst, rel(gb, fd));
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("logreg fits separable 1-D data") {
  const std::vector<double> v{-3, -2, -1, -0.5, 0.5, 1, 2, 3};
  const auto y = to_bools({0, 0, 0, 0, 1, 1, 1, 1});
  const auto& ys = y;
  const auto x = one_column(v);
  const auto m = fit_logreg(x, ys, {.lambda = 0.01});
  CHECK(m.weights(0) > 0);
  const auto p = predict_proba(m, x.values);
  for (std::size_t i = 0; i < v.size(); ++i) CHECK((p(static_cast<Eigen::Index>(i)) > 0.5) == y[i]);
  const double zero = logreg_objective(x.values, ys, Eigen::VectorXd::Zero(1), 0.0, 0.01);
  CHECK(m.objective <= zero);

  const auto strong = fit_logreg(x, ys, {.lambda = 1e6});
  CHECK(strong.weights.cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("logreg errors") {
  const auto x = one_column({1, 2, 3});
  const std::vector<bool> all_pos{true, true, true};
  CHECK_THROWS_AS(fit_logreg(x, all_pos), Error);
  const std::vector<bool> two{true, false};
  CHECK_THROWS_AS(fit_logreg(x, two), Error);
  auto bad = x;
  bad.values(1, 0) = std::nan("");
  const std::vector<bool> mixed{true, false, true};
  CHECK_THROWS_AS(fit_logreg(bad, mixed), Error);
  LogregModel m;
  m.weights = Eigen::VectorXd::Zero(2);
  CHECK_THROWS_AS(predict_proba(m, x.values), Error);
}

TEST_CASE("predict_proba identities") {
  LogregModel m;
  m.weights = Eigen::VectorXd::Zero(2);
  Eigen::MatrixXd x(3, 2);
  x << 1, 2, -4, 0.5, 100, -100;
  CHECK((predict_proba(m, x).array() == 0.5).all());

  m.weights << 0.5, -0.25;
  m.bias = 0.1;
  const auto p = predict_proba(m, x);
  CHECK((p.array() > 0).all());
  CHECK((p.array() < 1).all());
  auto doubled = m;
  doubled.weights(0) = 1.0;
  CHECK(predict_proba(doubled, x)(0) > p(0));

  auto wider = m;
  wider.weights.conservativeResize(3);
  wider.weights(2) = 0;
  Eigen::MatrixXd xw(3, 3);
  xw << x, Eigen::Vector3d(7, -2, 3);
  CHECK((predict_proba(wider, xw) - p).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("calibrate_cutoff picks the top k with stable ties") {
  const std::vector<double> p{0.1, 0.9, 0.3, 0.8, 0.2, 0.7, 0.05, 0.4, 0.6, 0.5};
  const auto lab = calibrate_cutoff(p, 0.3);
  CHECK(lab == to_bools({0, 1, 0, 1, 0, 1, 0, 0, 0, 0}));

  const std::vector<double> flat(4, 0.5);
  CHECK(calibrate_cutoff(flat, 0.5) == to_bools({1, 1, 0, 0}));

  const std::vector<double> big(274, 0.3);
  const auto l = calibrate_cutoff(big, 67.0 / 274.0);
  CHECK(std::count(l.begin(), l.end(), true) == 67);

  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 300;
    const double rate = 0.01 + 0.98 * std::uniform_real_distribution<double>()(rng);
    std::vector<double> q(n);
    for (auto& v : q) v = static_cast<double>(rng() % 5);
    const auto out = calibrate_cutoff(q, rate);
    CHECK(static_cast<std::size_t>(std::count(out.begin(), out.end(), true)) ==
          static_cast<std::size_t>(std::floor(rate * n + 0.5)));
  }
  CHECK_THROWS_AS(calibrate_cutoff(p, 0.0), Error);
  CHECK_THROWS_AS(calibrate_cutoff(p, 1.0), Error);
  CHECK(positive_count(0.25, 10) == 3);
}

TEST_CASE("random_guess count, determinism and precision") {
  const auto a = random_guess(0.245, 274, 11);
  CHECK(std::count(a.begin(), a.end(), true) == 67);
  CHECK(random_guess(0.245, 274, 11) == a);
  CHECK(random_guess(0.245, 274, 12) != a);
  CHECK_THROWS_AS(random_guess(1.5, 10, 1), Error);

  std::vector<bool> truth(274, false);
  for (int i = 0; i < 67; ++i) truth[static_cast<std::size_t>(i * 4)] = true;
  double sum = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const auto g = random_guess(67.0 / 274.0, 274, s);
    int tp = 0;
    for (std::size_t i = 0; i < 274; ++i) tp += g[i] && truth[i];
    sum += tp / 67.0;
  }
  CHECK(std::abs(sum / 1000 - 67.0 / 274.0) < 0.02);
}

TEST_CASE("nonnetwork features encoding") {
  const auto cohort = testing::ramp_cohort(40);
  const auto f = nonnetwork_features(cohort);
  CHECK(f.cols() == 14 * 3 + 14);
  CHECK(f.names.front() == "agreeableness=low");
  CHECK(f.names.back() == "parents_education=2");
  for (Eigen::Index i = 0; i < f.values.rows(); ++i) CHECK(f.values.row(i).sum() == 18.0);

  const auto full = nonnetwork_features(cohort, {.include_label_scores = true});
  CHECK(full.cols() == 62);
  for (Eigen::Index i = 0; i < full.values.rows(); ++i) CHECK(full.values.row(i).sum() == 20.0);

  auto twin = cohort;
  twin.rows[1] = twin.rows[0];
  twin.rows[1].id = "twin";
  const auto t = nonnetwork_features(twin);
  CHECK(t.values.row(0) == t.values.row(1));
}

TEST_CASE("standardizer uses reference statistics") {
  Eigen::MatrixXd x(4, 2);
  x << 1, 5, 2, 5, 3, 5, 4, 5;
  const auto s = Standardizer::fit(x);
  const auto z = s.apply(x);
  CHECK(std::abs(z.col(0).mean()) < 1e-12);
  CHECK(std::abs(z.col(0).squaredNorm() / 4 - 1) < 1e-12);
  CHECK(z.col(1).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(s.apply(Eigen::MatrixXd::Zero(1, 3)), Error);
}

TEST_CASE("logreg json round trip") {
  const auto x = one_column({-2, -1, 1, 2});
  const std::vector<bool> y{false, true, false, true};
  const auto m = fit_logreg(x, y);
  const nlohmann::json j = m;
  const auto back = logreg_from_json(nlohmann::json::parse(j.dump()));
  CHECK(back.feature_names == m.feature_names);
  CHECK(back.weights == m.weights);
  CHECK(back.bias == m.bias);
}
