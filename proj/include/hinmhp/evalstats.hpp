#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hinmhp {

struct FoldAssignment {
  std::size_t k = 0;
  std::vector<std::uint32_t> fold;  // per individual, in [0, k)

  std::vector<std::uint32_t> members(std::uint32_t f) const;
  /// Everyone outside fold f.
  std::vector<std::uint32_t> complement(std::uint32_t f) const;
};

/// Positives and negatives are shuffled separately and dealt round-robin; the
/// negatives continue from the fold after the last positive, so fold sizes
/// also differ by at most one.
FoldAssignment stratified_kfold(const std::vector<bool>& labels, std::size_t k, std::uint64_t seed);

struct ConfusionCounts {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

ConfusionCounts confusion(const std::vector<bool>& pred, const std::vector<bool>& truth);

/// Zero-denominator metrics are reported as 0 with the matching flag set.
struct MetricSet {
  double precision = 0, recall = 0, f1 = 0, accuracy = 0;
  bool precision_undefined = false, recall_undefined = false, f1_undefined = false, accuracy_undefined = false;
};

MetricSet metrics(const ConfusionCounts& c);

enum class Metric : std::uint8_t { Precision, Recall, F1, Accuracy };
inline constexpr std::array<Metric, 4> kMetrics = {Metric::Precision, Metric::Recall, Metric::F1, Metric::Accuracy};
std::string_view name(Metric m) noexcept;
double value(const MetricSet& s, Metric m) noexcept;

/// (a - b) / b.
double relative_gain(double a, double b);

struct MeanStd {
  double mean = 0;
  double std = 0;  // sample standard deviation, 0 for a single value
};

MeanStd mean_std(std::span<const double> v);

enum class Alternative : std::uint8_t { TwoSided, Greater, Less };

struct WilcoxonResult {
  double statistic = 0;  // sum of ranks of positive differences x - y
  double p_value = 1;
  std::size_t n_used = 0;  // non-zero differences
  bool exact = false;
};

/// Exact (enumeration) for up to 14 non-zero differences, otherwise normal
/// approximation with tie correction and continuity correction.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y,
                                    Alternative alternative = Alternative::TwoSided);

inline constexpr std::size_t kWilcoxonExactMax = 14;

/// Benjamini-Hochberg step-up adjusted p-values, in input order.
std::vector<double> bh_fdr(std::span<const double> pvals);

/// P(X >= o) for X hypergeometric with population s, a successes and b draws.
double hypergeom_tail(std::size_t s, std::size_t a, std::size_t b, std::size_t o);

struct OverlapTest {
  std::string method_a, method_b;
  std::size_t universe = 0, a = 0, b = 0, overlap = 0;
  double p_value = 1;
  bool significant = false;  // p < 0.05
};

struct NamedSet {
  std::string name;
  std::vector<std::uint32_t> members;  // individual indices
};

/// Pairwise overlap tests (i < j) of correctly-predicted positive sets inside
/// the universe of actual positives.
std::vector<OverlapTest> overlap_analysis(std::span<const NamedSet> sets, std::span<const std::uint32_t> universe);

/// Region counts of a three-set Venn diagram, in the order
/// A only, B only, C only, AB only, AC only, BC only, ABC.
std::array<std::size_t, 7> venn3(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                                 std::span<const std::uint32_t> c);

}  // namespace hinmhp
