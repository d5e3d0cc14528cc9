#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hinmhp/hin.hpp"
#include "hinmhp/types.hpp"

namespace hinmhp {

/// One row of cohort.csv.
struct Individual {
  std::string id;
  std::array<double, 5> personality{};  // agreeableness, conscientiousness, extraversion, neuroticism, openness
  std::array<int, 4> social{};          // gender, race, religion, parents_education
  double sleep_quality = 0;
  double avg_sleep_minutes = 0;
  double avg_steps = 0;
  std::array<double, 5> wellbeing{};  // body_image, happiness, health, loneliness, self_esteem
  double cesd = 0;
  double stai = 0;
  std::int64_t sms_total = 0;
};

inline constexpr std::array<int, 4> kSocialCardinality = {2, 5, 4, 3};

struct CohortTable {
  std::vector<Individual> rows;

  std::size_t size() const { return rows.size(); }
};

struct SmsLink {
  std::string id_a;
  std::string id_b;
  std::int64_t count = 0;
};

using SmsEdgeList = std::vector<SmsLink>;

/// Throws Error on duplicate ids or out-of-range categorical codes.
void check_cohort(const CohortTable& cohort);

enum class BinLevel : std::uint8_t { Low = 0, Medium = 1, High = 2 };

char letter(BinLevel b) noexcept;

/// Nearest-rank quartile thresholds (k-th smallest, k = ceil(q*n)).
struct QuartileThresholds {
  double q25 = 0;
  double q75 = 0;
};

QuartileThresholds nearest_rank_quartiles(std::span<const double> values);

/// Low if v <= q25, High if v > q75, else Medium; all Medium when q25 == q75.
std::vector<BinLevel> bin_scores(std::span<const double> values);

struct CombinationKey {
  NodeKind dimension = NodeKind::PersonalityTraits;
  std::vector<std::uint8_t> parts;  // BinLevel values or categorical codes

  std::string label() const;

  friend bool operator==(const CombinationKey&, const CombinationKey&) = default;
  friend auto operator<=>(const CombinationKey&, const CombinationKey&) = default;
};

struct CombinationAssignment {
  std::vector<CombinationKey> keys;        // distinct observed keys, sorted
  std::vector<std::uint32_t> assignment;   // per individual, index into keys
};

/// Upper bound on distinct keys for a dimension (243, 120, 27, 243).
std::size_t max_combinations(NodeKind dimension);

CombinationAssignment combination_nodes(const CohortTable& cohort, NodeKind dimension);

/// Depression: cesd > 15; Anxiety: stai > 40 (strict).
inline constexpr double kDepressionThreshold = 15.0;
inline constexpr double kAnxietyThreshold = 40.0;

std::vector<bool> mental_health_labels(const CohortTable& cohort, Condition condition);

std::string positive_state_label(Condition c);
std::string negative_state_label(Condition c);

Hin build_hin(const CohortTable& cohort, const SmsEdgeList& sms, Condition condition);

// CSV surface ---------------------------------------------------------------

extern const char* const kCohortHeader;
extern const char* const kSmsHeader;

CohortTable read_cohort_csv(std::istream& in);
CohortTable read_cohort_csv(const std::filesystem::path& path);
SmsEdgeList read_sms_csv(std::istream& in);
SmsEdgeList read_sms_csv(const std::filesystem::path& path);

void write_cohort_csv(std::ostream& out, const CohortTable& cohort);
void write_sms_csv(std::ostream& out, const SmsEdgeList& sms);

/// Shortest decimal text that parses back to the same double.
std::string format_real(double v);

}  // namespace hinmhp
