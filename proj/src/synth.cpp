#include "hinmhp/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include "hinmhp/rng.hpp"

namespace hinmhp {

void check_params(const SynthParams& p) {
  auto fail = [](const std::string& m) { throw Error("invalid synth params: " + m); };
  if (p.n < 10) fail("n must be >= 10");
  if (!(p.depression_rate > 0 && p.depression_rate < 1)) fail("depression_rate must be in (0,1)");
  if (!(p.anxiety_rate > 0 && p.anxiety_rate < 1)) fail("anxiety_rate must be in (0,1)");
  const std::array<std::pair<const char*, double>, 5> loads = {{{"personality", p.signal.personality},
                                                                 {"physical", p.signal.physical},
                                                                 {"wellbeing", p.signal.wellbeing},
                                                                 {"social", p.signal.social},
                                                                 {"sms_homophily", p.signal.sms_homophily}}};
  for (const auto& [name, v] : loads)
    if (!(v >= 0 && v <= 1)) fail(std::string("signal.") + name + " must be in [0,1]");
  if (p.communities < 1) fail("communities must be >= 1");
  if (!(p.inter_p >= 0 && p.inter_p <= p.intra_p && p.intra_p <= 1)) fail("need 0 <= inter_p <= intra_p <= 1");
  if (!(p.mean_sms >= 1)) fail("mean_sms must be >= 1");
  if (!(p.label_noise >= 0) || !std::isfinite(p.label_noise)) fail("label_noise must be >= 0");
}

nlohmann::json to_json(const SynthParams& p) {
  return {{"n", p.n},
          {"depression_rate", p.depression_rate},
          {"anxiety_rate", p.anxiety_rate},
          {"signal",
           {{"personality", p.signal.personality},
            {"physical", p.signal.physical},
            {"wellbeing", p.signal.wellbeing},
            {"social", p.signal.social},
            {"sms_homophily", p.signal.sms_homophily}}},
          {"communities", p.communities},
          {"intra_p", p.intra_p},
          {"inter_p", p.inter_p},
          {"mean_sms", p.mean_sms},
          {"label_noise", p.label_noise},
          {"seed", p.seed}};
}

SynthParams synth_params_from_json(const nlohmann::json& j) {
  SynthParams p;
  p.n = j.value("n", p.n);
  p.depression_rate = j.value("depression_rate", p.depression_rate);
  p.anxiety_rate = j.value("anxiety_rate", p.anxiety_rate);
  if (j.contains("signal")) {
    const auto& s = j["signal"];
    p.signal.personality = s.value("personality", p.signal.personality);
    p.signal.physical = s.value("physical", p.signal.physical);
    p.signal.wellbeing = s.value("wellbeing", p.signal.wellbeing);
    p.signal.social = s.value("social", p.signal.social);
    p.signal.sms_homophily = s.value("sms_homophily", p.signal.sms_homophily);
  }
  p.communities = j.value("communities", p.communities);
  p.intra_p = j.value("intra_p", p.intra_p);
  p.inter_p = j.value("inter_p", p.inter_p);
  p.mean_sms = j.value("mean_sms", p.mean_sms);
  p.label_noise = j.value("label_noise", p.label_noise);
  p.seed = j.value("seed", p.seed);
  return p;
}

std::size_t quota(std::size_t n, double rate) {
  return static_cast<std::size_t>(std::floor(static_cast<double>(n) * rate + 0.5));
}

namespace {

double round2(double v) { return std::round(v * 100.0) / 100.0; }

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// Category from a uniform draw through the cumulative of `weights`.
template <std::size_t N>
int inverse_cdf(const std::array<double, N>& weights, double u) {
  double acc = 0;
  for (std::size_t i = 0; i < N; ++i) {
    acc += weights[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(N - 1);
}

std::vector<bool> top_k(const std::vector<double>& score, std::size_t k) {
  std::vector<std::size_t> order(score.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return score[a] > score[b]; });
  std::vector<bool> out(score.size(), false);
  for (std::size_t i = 0; i < k; ++i) out[order[i]] = true;
  return out;
}

constexpr std::array<double, 2> kGender = {0.45, 0.55};
constexpr std::array<double, 5> kRace = {0.62, 0.14, 0.11, 0.08, 0.05};
constexpr std::array<double, 4> kReligion = {0.52, 0.22, 0.16, 0.10};
constexpr std::array<double, 3> kParentsEducation = {0.18, 0.30, 0.52};

// Direction of association with latent distress.
constexpr std::array<double, 5> kPersonalitySign = {-1, -1, -1, +1, -1};
constexpr std::array<double, 5> kWellbeingSign = {-1, -1, -1, +1, -1};

void recompute_sms_totals(SyntheticCohort& data) {
  std::unordered_map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < data.cohort.size(); ++i) {
    idx.emplace(data.cohort.rows[i].id, i);
    data.cohort.rows[i].sms_total = 0;
  }
  for (const auto& s : data.sms) {
    data.cohort.rows[idx.at(s.id_a)].sms_total += s.count;
    data.cohort.rows[idx.at(s.id_b)].sms_total += s.count;
  }
}

std::int64_t draw_sms_count(Rng& rng, double mean) {
  if (mean <= 1.0) return 1;
  std::geometric_distribution<std::int64_t> geo(1.0 / mean);
  return 1 + geo(rng);
}

}  // namespace

SyntheticCohort generate(const SynthParams& p) {
  check_params(p);
  Rng rng(p.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto n = static_cast<std::size_t>(p.n);

  std::vector<double> z(n);
  for (auto& v : z) v = normal(rng);

  std::vector<double> dep_score(n), anx_score(n);
  for (std::size_t i = 0; i < n; ++i) dep_score[i] = z[i] + p.label_noise * normal(rng);
  for (std::size_t i = 0; i < n; ++i) anx_score[i] = z[i] + p.label_noise * normal(rng);
  const auto depressed = top_k(dep_score, quota(n, p.depression_rate));
  const auto anxious = top_k(anx_score, quota(n, p.anxiety_rate));

  SyntheticCohort out;
  out.cohort.rows.resize(n);
  const int width = static_cast<int>(std::to_string(n).size());
  for (std::size_t i = 0; i < n; ++i) {
    auto& r = out.cohort.rows[i];
    std::string num = std::to_string(i + 1);
    r.id = "s" + std::string(static_cast<std::size_t>(std::max(0, width - static_cast<int>(num.size()))), '0') + num;

    for (std::size_t c = 0; c < 5; ++c) {
      const double x = p.signal.personality * kPersonalitySign[c] * z[i] + normal(rng);
      r.personality[c] = round2(std::clamp(3.2 + 0.6 * x, 1.0, 5.0));
    }
    {
      const double xq = p.signal.physical * z[i] + normal(rng);
      const double xs = -p.signal.physical * z[i] + normal(rng);
      const double xa = -p.signal.physical * z[i] + normal(rng);
      r.sleep_quality = round2(std::clamp(6.0 + 2.5 * xq, 0.0, 21.0));
      r.avg_sleep_minutes = round2(std::clamp(410.0 + 35.0 * xs, 180.0, 720.0));
      r.avg_steps = round2(std::max(500.0, 9000.0 + 2500.0 * xa));
    }
    for (std::size_t c = 0; c < 5; ++c) {
      const double x = p.signal.wellbeing * kWellbeingSign[c] * z[i] + normal(rng);
      r.wellbeing[c] = round2(std::clamp(3.0 + 0.7 * x, 1.0, 5.0));
    }
    // Social categories: with probability `social` the category is read off
    // the distress quantile, otherwise drawn from the marginal.
    const double u_z = std_normal_cdf(z[i]);
    auto pick = [&](auto weights) {
      const double u = uniform01(rng);
      const double fresh = uniform01(rng);
      return inverse_cdf(weights, u < p.signal.social ? u_z : fresh);
    };
    r.social = {pick(kGender), pick(kRace), pick(kReligion), pick(kParentsEducation)};

    const double e1 = std::abs(normal(rng));
    const double e2 = std::abs(normal(rng));
    r.cesd = depressed[i] ? std::min(60.0, 16.0 + std::floor(6.0 * e1)) : std::max(0.0, 15.0 - std::floor(6.0 * e1));
    r.stai = anxious[i] ? std::min(80.0, 41.0 + std::floor(8.0 * e2)) : std::max(20.0, 40.0 - std::floor(8.0 * e2));
  }

  // SBM communities: homophilous placement bands individuals by distress rank.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return z[a] < z[b]; });
  std::vector<int> rank(n);
  for (std::size_t k = 0; k < n; ++k) rank[order[k]] = static_cast<int>(k);
  std::vector<int> community(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool homophilous = uniform01(rng) < p.signal.sms_homophily;
    const int band = static_cast<int>((static_cast<long long>(rank[i]) * p.communities) / static_cast<long long>(n));
    community[i] = homophilous ? band : static_cast<int>(uniform_index(rng, static_cast<std::size_t>(p.communities)));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double prob = community[i] == community[j] ? p.intra_p : p.inter_p;
      if (uniform01(rng) < prob)
        out.sms.push_back({out.cohort.rows[i].id, out.cohort.rows[j].id, draw_sms_count(rng, p.mean_sms)});
    }
  }
  recompute_sms_totals(out);
  return out;
}

// NetHealth-shaped fixture ---------------------------------------------------

namespace {

double& component(Individual& r, NodeKind dim, std::size_t c) {
  switch (dim) {
    case NodeKind::PersonalityTraits: return r.personality[c];
    case NodeKind::WellBeing: return r.wellbeing[c];
    case NodeKind::PhysicalHealth:
      return c == 0 ? r.sleep_quality : c == 1 ? r.avg_sleep_minutes : r.avg_steps;
    default: throw Error("component: not a numeric dimension");
  }
}

/// Moves individuals between bins (swaps keep every marginal at exactly the
/// nearest-rank sizes) until the number of distinct bin tuples equals
/// `target`, then rewrites the values so that binning reproduces the labels.
void shape_numeric(CohortTable& cohort, NodeKind dim, std::size_t arity, int target, Rng& rng) {
  const auto n = cohort.size();
  const std::size_t n_low = static_cast<std::size_t>(std::ceil(0.25 * static_cast<double>(n)));
  const std::size_t n_high = n - static_cast<std::size_t>(std::ceil(0.75 * static_cast<double>(n)));

  std::vector<std::vector<double>> original(arity, std::vector<double>(n));
  std::vector<std::vector<int>> bin(arity, std::vector<int>(n));
  for (std::size_t c = 0; c < arity; ++c) {
    for (std::size_t i = 0; i < n; ++i) original[c][i] = component(cohort.rows[i], dim, c);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return original[c][a] < original[c][b]; });
    for (std::size_t k = 0; k < n; ++k) bin[c][order[k]] = k < n_low ? 0 : (k >= n - n_high ? 2 : 1);
  }

  auto code = [&](std::size_t i) {
    int v = 0;
    for (std::size_t c = 0; c < arity; ++c) v = v * 3 + bin[c][i];
    return v;
  };
  std::vector<int> count(243, 0);
  int distinct = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (count[code(i)]++ == 0) ++distinct;
  auto remove = [&](int k) {
    if (--count[k] == 0) --distinct;
  };
  auto add = [&](int k) {
    if (count[k]++ == 0) ++distinct;
  };

  for (long iter = 0; distinct != target; ++iter) {
    if (iter > 5'000'000) throw Error("nethealth_shaped: could not reach the requested combination count");
    const std::size_t c = uniform_index(rng, arity);
    const std::size_t a = uniform_index(rng, n);
    const std::size_t b = uniform_index(rng, n);
    if (bin[c][a] == bin[c][b]) continue;
    const int before = distinct;
    remove(code(a));
    remove(code(b));
    std::swap(bin[c][a], bin[c][b]);
    add(code(a));
    add(code(b));
    if (std::abs(distinct - target) > std::abs(before - target)) {
      remove(code(a));
      remove(code(b));
      std::swap(bin[c][a], bin[c][b]);
      add(code(a));
      add(code(b));
    }
  }

  // Hand the sorted original values back out bin by bin; strictly increasing
  // values make the rank rule exact.
  for (std::size_t c = 0; c < arity; ++c) {
    std::vector<double> values = original[c];
    std::sort(values.begin(), values.end());
    for (std::size_t k = 1; k < n; ++k)
      if (values[k] <= values[k - 1]) values[k] = values[k - 1] + 0.001;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
      if (bin[c][a] != bin[c][b]) return bin[c][a] < bin[c][b];
      return original[c][a] < original[c][b];
    });
    for (std::size_t k = 0; k < n; ++k) component(cohort.rows[order[k]], dim, c) = std::round(values[k] * 1000.0) / 1000.0;
  }
}

void shape_social(CohortTable& cohort, int target, Rng& rng) {
  auto code = [](const Individual& r) { return ((r.social[0] * 5 + r.social[1]) * 4 + r.social[2]) * 3 + r.social[3]; };
  std::vector<int> count(120, 0);
  int distinct = 0;
  for (const auto& r : cohort.rows)
    if (count[code(r)]++ == 0) ++distinct;
  const auto n = cohort.size();
  for (long iter = 0; distinct != target; ++iter) {
    if (iter > 5'000'000) throw Error("nethealth_shaped: could not reach the social combination count");
    auto& r = cohort.rows[uniform_index(rng, n)];
    const int old = code(r);
    if (distinct > target) {
      // Merge a singleton into another individual's tuple.
      if (count[old] != 1) continue;
      const auto& other = cohort.rows[uniform_index(rng, n)];
      if (code(other) == old) continue;
      r.social = other.social;
      --count[old];
      ++count[code(r)];
      --distinct;
    } else {
      if (count[old] < 2) continue;
      std::array<int, 4> fresh;
      for (std::size_t c = 0; c < 4; ++c) fresh[c] = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(kSocialCardinality[c])));
      Individual probe = r;
      probe.social = fresh;
      if (count[code(probe)] != 0) continue;
      r.social = fresh;
      --count[old];
      ++count[code(r)];
      ++distinct;
    }
  }
}

void shape_sms(SyntheticCohort& data, int target, double mean_sms, Rng& rng) {
  auto& sms = data.sms;
  if (static_cast<int>(sms.size()) > target) {
    std::shuffle(sms.begin(), sms.end(), rng);
    sms.resize(static_cast<std::size_t>(target));
  }
  std::set<std::pair<std::string, std::string>> present;
  for (const auto& s : sms) present.insert(std::minmax(s.id_a, s.id_b));
  const auto n = data.cohort.size();
  while (static_cast<int>(sms.size()) < target) {
    const auto& a = data.cohort.rows[uniform_index(rng, n)].id;
    const auto& b = data.cohort.rows[uniform_index(rng, n)].id;
    if (a == b || !present.insert(std::minmax(a, b)).second) continue;
    sms.push_back({std::min(a, b), std::max(a, b), draw_sms_count(rng, mean_sms)});
  }
  std::sort(sms.begin(), sms.end(), [](const SmsLink& x, const SmsLink& y) {
    return std::tie(x.id_a, x.id_b) < std::tie(y.id_a, y.id_b);
  });
  recompute_sms_totals(data);
}

}  // namespace

SyntheticCohort nethealth_shaped(const ShapeTargets& t, std::uint64_t seed) {
  SynthParams p;
  p.n = t.n;
  p.depression_rate = static_cast<double>(t.depressed) / t.n;
  p.anxiety_rate = static_cast<double>(t.anxious) / t.n;
  p.seed = seed;
  auto data = generate(p);
  Rng rng(derive_seed(seed, {0x5A4E}));
  shape_numeric(data.cohort, NodeKind::PersonalityTraits, 5, t.personality_nodes, rng);
  shape_numeric(data.cohort, NodeKind::PhysicalHealth, 3, t.physical_nodes, rng);
  shape_numeric(data.cohort, NodeKind::WellBeing, 5, t.wellbeing_nodes, rng);
  shape_social(data.cohort, t.social_nodes, rng);
  shape_sms(data, t.sms_edges, p.mean_sms, rng);
  return data;
}

void write_synthetic(const std::filesystem::path& dir, const SyntheticCohort& data, const nlohmann::json& params) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* file) {
    std::ofstream out(dir / file, std::ios::binary);
    if (!out) throw Error("cannot write " + (dir / file).string());
    return out;
  };
  {
    auto out = open("cohort.csv");
    write_cohort_csv(out, data.cohort);
  }
  {
    auto out = open("sms.csv");
    write_sms_csv(out, data.sms);
  }
  {
    auto out = open("params.json");
    out << params.dump(2) << '\n';
  }
}

}  // namespace hinmhp
