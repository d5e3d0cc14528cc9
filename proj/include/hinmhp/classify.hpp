#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "hinmhp/cohort.hpp"

namespace hinmhp {

struct FeatureMatrix {
  std::vector<std::string> names;
  Eigen::MatrixXd values;  // individuals x features

  std::size_t rows() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(values.cols()); }
};

/// Throws Error on a name/column count mismatch or a non-finite entry.
void check_features(const FeatureMatrix& x);

FeatureMatrix select_rows(const FeatureMatrix& x, std::span<const std::uint32_t> rows);

struct LogregParams {
  double lambda = 0.01;
  std::size_t max_iter = 2000;
  double tol = 1e-6;
};

struct LogregModel {
  std::vector<std::string> feature_names;
  Eigen::VectorXd weights;
  double bias = 0;
  double lambda = 0;
  std::size_t iterations = 0;
  double objective = 0;
};

/// Mean negative log-likelihood + (lambda/2)||w||^2 (bias unregularised).
/// Gradients are written when the pointers are non-null.
double logreg_objective(const Eigen::MatrixXd& x, const std::vector<bool>& y, const Eigen::VectorXd& w, double b,
                        double lambda, Eigen::VectorXd* grad_w = nullptr, double* grad_b = nullptr);

/// Gradient descent with Armijo backtracking.
LogregModel fit_logreg(const FeatureMatrix& x, const std::vector<bool>& y, const LogregParams& params = {});

Eigen::VectorXd predict_proba(const LogregModel& model, const Eigen::MatrixXd& x);

/// round-half-up of rate * n.
std::size_t positive_count(double rate, std::size_t n);

/// The positive_count(rate, n) largest probabilities are positive; ties go to the lower row.
std::vector<bool> calibrate_cutoff(std::span<const double> probs, double rate);

std::vector<bool> random_guess(double rate, std::size_t n, std::uint64_t seed);

struct NonnetworkOptions {
  /// Adds the binned cesd and stai scores (the sources of the labels).
  bool include_label_scores = false;
};

/// One-hot Low/Medium/High bins of personality (5), sleep quality, well-being (5),
/// [cesd, stai,] avg_steps, avg_sleep_minutes, sms_total, then one-hot social
/// categories (gender 2, race 5, religion 4, parents_education 3).
FeatureMatrix nonnetwork_features(const CohortTable& cohort, const NonnetworkOptions& options = {});

/// Column means and standard deviations from a reference set of rows.
struct Standardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;  // 1 for constant columns

  static Standardizer fit(const Eigen::MatrixXd& x);
  Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
};

void to_json(nlohmann::json& j, const LogregModel& m);
LogregModel logreg_from_json(const nlohmann::json& j);

}  // namespace hinmhp
