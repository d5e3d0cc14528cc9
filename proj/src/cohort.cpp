#include "hinmhp/cohort.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

namespace hinmhp {

void check_cohort(const CohortTable& cohort) {
  std::unordered_set<std::string> ids;
  for (const auto& r : cohort.rows) {
    if (r.id.empty()) throw Error("cohort: empty individual id");
    if (!ids.insert(r.id).second) throw Error("cohort: duplicate id '" + r.id + "'");
    for (std::size_t c = 0; c < 4; ++c) {
      if (r.social[c] < 0 || r.social[c] >= kSocialCardinality[c])
        throw Error("cohort: categorical code out of range for '" + r.id + "'");
    }
    if (r.sms_total < 0) throw Error("cohort: negative sms_total for '" + r.id + "'");
  }
}

char letter(BinLevel b) noexcept {
  switch (b) {
    case BinLevel::Low: return 'L';
    case BinLevel::Medium: return 'M';
    case BinLevel::High: return 'H';
  }
  return '?';
}

QuartileThresholds nearest_rank_quartiles(std::span<const double> values) {
  if (values.empty()) throw Error("bin_scores: empty input");
  for (double v : values)
    if (!std::isfinite(v)) throw Error("bin_scores: non-finite value");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = sorted.size();
  auto kth = [&](double q) {
    auto k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
    k = std::clamp<std::size_t>(k, 1, n);
    return sorted[k - 1];
  };
  return {kth(0.25), kth(0.75)};
}

std::vector<BinLevel> bin_scores(std::span<const double> values) {
  const auto t = nearest_rank_quartiles(values);
  std::vector<BinLevel> out(values.size(), BinLevel::Medium);
  if (t.q25 == t.q75) return out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] <= t.q25)
      out[i] = BinLevel::Low;
    else if (values[i] > t.q75)
      out[i] = BinLevel::High;
  }
  return out;
}

std::string CombinationKey::label() const {
  std::string out;
  if (dimension == NodeKind::SocialStatus) {
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i) out.push_back('.');
      out += std::to_string(parts[i]);
    }
  } else {
    for (auto p : parts) out.push_back(letter(static_cast<BinLevel>(p)));
  }
  return out;
}

std::size_t max_combinations(NodeKind dimension) {
  switch (dimension) {
    case NodeKind::PersonalityTraits: return 243;
    case NodeKind::SocialStatus: return 2 * 5 * 4 * 3;
    case NodeKind::PhysicalHealth: return 27;
    case NodeKind::WellBeing: return 243;
    default: throw Error("combination_nodes: invalid dimension " + std::string(name(dimension)));
  }
}

namespace {

std::vector<std::vector<std::uint8_t>> component_parts(const CohortTable& cohort, NodeKind dimension) {
  const auto n = cohort.size();
  std::vector<std::vector<double>> columns;
  switch (dimension) {
    case NodeKind::PersonalityTraits:
      for (std::size_t c = 0; c < 5; ++c) {
        columns.emplace_back(n);
        for (std::size_t i = 0; i < n; ++i) columns.back()[i] = cohort.rows[i].personality[c];
      }
      break;
    case NodeKind::WellBeing:
      for (std::size_t c = 0; c < 5; ++c) {
        columns.emplace_back(n);
        for (std::size_t i = 0; i < n; ++i) columns.back()[i] = cohort.rows[i].wellbeing[c];
      }
      break;
    case NodeKind::PhysicalHealth: {
      columns.assign(3, std::vector<double>(n));
      for (std::size_t i = 0; i < n; ++i) {
        columns[0][i] = cohort.rows[i].sleep_quality;
        columns[1][i] = cohort.rows[i].avg_sleep_minutes;
        columns[2][i] = cohort.rows[i].avg_steps;
      }
      break;
    }
    case NodeKind::SocialStatus: {
      std::vector<std::vector<std::uint8_t>> parts(n);
      for (std::size_t i = 0; i < n; ++i)
        for (auto code : cohort.rows[i].social) parts[i].push_back(static_cast<std::uint8_t>(code));
      return parts;
    }
    default: throw Error("combination_nodes: invalid dimension " + std::string(name(dimension)));
  }
  std::vector<std::vector<std::uint8_t>> parts(n);
  for (const auto& col : columns) {
    const auto bins = bin_scores(col);
    for (std::size_t i = 0; i < n; ++i) parts[i].push_back(static_cast<std::uint8_t>(bins[i]));
  }
  return parts;
}

}  // namespace

CombinationAssignment combination_nodes(const CohortTable& cohort, NodeKind dimension) {
  (void)max_combinations(dimension);  // rejects invalid dimensions
  CombinationAssignment out;
  if (cohort.size() == 0) return out;
  auto parts = component_parts(cohort, dimension);
  std::map<CombinationKey, std::uint32_t> index;
  for (auto& p : parts) index.emplace(CombinationKey{dimension, p}, 0);
  std::uint32_t next = 0;
  for (auto& [key, id] : index) {
    id = next++;
    out.keys.push_back(key);
  }
  out.assignment.reserve(parts.size());
  for (auto& p : parts) out.assignment.push_back(index.at(CombinationKey{dimension, std::move(p)}));
  return out;
}

std::vector<bool> mental_health_labels(const CohortTable& cohort, Condition condition) {
  std::vector<bool> out;
  out.reserve(cohort.size());
  for (const auto& r : cohort.rows) {
    const double score = condition == Condition::Depression ? r.cesd : r.stai;
    if (!std::isfinite(score)) throw Error("mental_health_labels: missing score for '" + r.id + "'");
    out.push_back(condition == Condition::Depression ? score > kDepressionThreshold
                                                     : score > kAnxietyThreshold);
  }
  return out;
}

std::string positive_state_label(Condition c) {
  return c == Condition::Depression ? "depressed" : "anxious";
}

std::string negative_state_label(Condition c) {
  return c == Condition::Depression ? "non-depressed" : "non-anxious";
}

Hin build_hin(const CohortTable& cohort, const SmsEdgeList& sms, Condition condition) {
  check_cohort(cohort);
  Hin::Labels labels;
  Hin::EdgeLists edges;
  auto& ind = labels[to_index(NodeKind::Individual)];
  std::unordered_map<std::string, std::uint32_t> id_index;
  for (std::uint32_t i = 0; i < cohort.size(); ++i) {
    ind.push_back(cohort.rows[i].id);
    id_index.emplace(cohort.rows[i].id, i);
  }

  for (auto dim : {NodeKind::PersonalityTraits, NodeKind::SocialStatus, NodeKind::PhysicalHealth,
                   NodeKind::WellBeing}) {
    const auto combos = combination_nodes(cohort, dim);
    auto& l = labels[to_index(dim)];
    for (const auto& k : combos.keys) l.push_back(k.label());
    auto& e = edges[to_index(edge_kind_to(dim))];
    for (std::uint32_t i = 0; i < combos.assignment.size(); ++i) e.push_back({i, combos.assignment[i], 1.0});
  }

  labels[to_index(NodeKind::MentalHealth)] = {positive_state_label(condition),
                                              negative_state_label(condition)};
  const auto y = mental_health_labels(cohort, condition);
  for (std::uint32_t i = 0; i < y.size(); ++i)
    edges[to_index(EdgeKind::IM)].push_back({i, y[i] ? kPositiveState : kNegativeState, 1.0});

  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  for (const auto& link : sms) {
    auto a = id_index.find(link.id_a);
    auto b = id_index.find(link.id_b);
    if (a == id_index.end()) throw Error("sms references unknown id '" + link.id_a + "'");
    if (b == id_index.end()) throw Error("sms references unknown id '" + link.id_b + "'");
    if (a->second == b->second) throw Error("sms self-link for '" + link.id_a + "'");
    if (link.count < 1) throw Error("sms count must be positive for " + link.id_a + "," + link.id_b);
    auto u = std::min(a->second, b->second);
    auto v = std::max(a->second, b->second);
    if (!seen.insert({u, v}).second)
      throw Error("duplicate sms pair " + link.id_a + "," + link.id_b);
    edges[to_index(EdgeKind::II)].push_back({u, v, static_cast<double>(link.count)});
  }
  return Hin(std::move(labels), std::move(edges));
}

// CSV -----------------------------------------------------------------------

const char* const kCohortHeader =
    "id,agreeableness,conscientiousness,extraversion,neuroticism,openness,gender,race,religion,"
    "parents_education,sleep_quality,avg_sleep_minutes,avg_steps,body_image,happiness,health,"
    "loneliness,self_esteem,cesd,stai,sms_total";
const char* const kSmsHeader = "id_a,id_b,count";

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(std::move(cur));
  return out;
}

double parse_real(const std::string& s, const char* field, std::size_t line) {
  if (s.empty()) throw Error(std::string("missing value for ") + field + " on line " + std::to_string(line));
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw Error(std::string("invalid number '") + s + "' for " + field + " on line " + std::to_string(line));
  return v;
}

std::int64_t parse_int(const std::string& s, const char* field, std::size_t line) {
  if (s.empty()) throw Error(std::string("missing value for ") + field + " on line " + std::to_string(line));
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error(std::string("invalid integer '") + s + "' for " + field + " on line " + std::to_string(line));
  return v;
}

std::istream& checked_header(std::istream& in, const char* expected) {
  std::string header;
  if (!std::getline(in, header)) throw Error("empty CSV input");
  if (!header.empty() && header.back() == '\r') header.pop_back();
  if (header.size() >= 3 && static_cast<unsigned char>(header[0]) == 0xEF) header.erase(0, 3);
  if (header != expected) throw Error("unexpected CSV header: " + header);
  return in;
}

}  // namespace

CohortTable read_cohort_csv(std::istream& in) {
  checked_header(in, kCohortHeader);
  CohortTable t;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split_line(line);
    if (f.size() != 21) throw Error("cohort.csv line " + std::to_string(lineno) + ": expected 21 fields");
    Individual r;
    r.id = f[0];
    if (r.id.empty()) throw Error("missing id on line " + std::to_string(lineno));
    static const char* kPers[] = {"agreeableness", "conscientiousness", "extraversion", "neuroticism", "openness"};
    for (std::size_t c = 0; c < 5; ++c) r.personality[c] = parse_real(f[1 + c], kPers[c], lineno);
    static const char* kSoc[] = {"gender", "race", "religion", "parents_education"};
    for (std::size_t c = 0; c < 4; ++c) r.social[c] = static_cast<int>(parse_int(f[6 + c], kSoc[c], lineno));
    r.sleep_quality = parse_real(f[10], "sleep_quality", lineno);
    r.avg_sleep_minutes = parse_real(f[11], "avg_sleep_minutes", lineno);
    r.avg_steps = parse_real(f[12], "avg_steps", lineno);
    static const char* kWell[] = {"body_image", "happiness", "health", "loneliness", "self_esteem"};
    for (std::size_t c = 0; c < 5; ++c) r.wellbeing[c] = parse_real(f[13 + c], kWell[c], lineno);
    r.cesd = parse_real(f[18], "cesd", lineno);
    r.stai = parse_real(f[19], "stai", lineno);
    r.sms_total = parse_int(f[20], "sms_total", lineno);
    t.rows.push_back(std::move(r));
  }
  check_cohort(t);
  return t;
}

CohortTable read_cohort_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  return read_cohort_csv(in);
}

SmsEdgeList read_sms_csv(std::istream& in) {
  checked_header(in, kSmsHeader);
  SmsEdgeList out;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split_line(line);
    if (f.size() != 3) throw Error("sms.csv line " + std::to_string(lineno) + ": expected 3 fields");
    if (f[0].empty() || f[1].empty()) throw Error("missing id on sms.csv line " + std::to_string(lineno));
    out.push_back({f[0], f[1], parse_int(f[2], "count", lineno)});
  }
  return out;
}

SmsEdgeList read_sms_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  return read_sms_csv(in);
}

std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_cohort_csv(std::ostream& out, const CohortTable& cohort) {
  out << kCohortHeader << '\n';
  for (const auto& r : cohort.rows) {
    out << r.id;
    for (double v : r.personality) out << ',' << format_real(v);
    for (int c : r.social) out << ',' << c;
    out << ',' << format_real(r.sleep_quality) << ',' << format_real(r.avg_sleep_minutes) << ','
        << format_real(r.avg_steps);
    for (double v : r.wellbeing) out << ',' << format_real(v);
    out << ',' << format_real(r.cesd) << ',' << format_real(r.stai) << ',' << r.sms_total << '\n';
  }
}

void write_sms_csv(std::ostream& out, const SmsEdgeList& sms) {
  out << kSmsHeader << '\n';
  for (const auto& s : sms) out << s.id_a << ',' << s.id_b << ',' << s.count << '\n';
}

}  // namespace hinmhp
