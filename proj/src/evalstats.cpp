#include "hinmhp/evalstats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "hinmhp/rng.hpp"
#include "hinmhp/types.hpp"

namespace hinmhp {

std::vector<std::uint32_t> FoldAssignment::members(std::uint32_t f) const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < fold.size(); ++i)
    if (fold[i] == f) out.push_back(i);
  return out;
}

std::vector<std::uint32_t> FoldAssignment::complement(std::uint32_t f) const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < fold.size(); ++i)
    if (fold[i] != f) out.push_back(i);
  return out;
}

FoldAssignment stratified_kfold(const std::vector<bool>& labels, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw Error("stratified_kfold: k must be >= 2");
  if (labels.size() < k) throw Error("stratified_kfold: fewer individuals than folds");
  std::vector<std::uint32_t> pos, neg;
  for (std::uint32_t i = 0; i < labels.size(); ++i) (labels[i] ? pos : neg).push_back(i);
  if (pos.empty() || neg.empty()) throw Error("stratified_kfold: labels must contain both classes");

  Rng rng(derive_seed(seed, {0xF01D}));
  std::shuffle(pos.begin(), pos.end(), rng);
  std::shuffle(neg.begin(), neg.end(), rng);
  FoldAssignment out{k, std::vector<std::uint32_t>(labels.size())};
  std::size_t next = 0;
  for (const auto* group : {&pos, &neg})
    for (auto i : *group) out.fold[i] = static_cast<std::uint32_t>(next++ % k);
  return out;
}

ConfusionCounts confusion(const std::vector<bool>& pred, const std::vector<bool>& truth) {
  if (pred.size() != truth.size()) throw Error("confusion: prediction and truth lengths differ");
  ConfusionCounts c;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i]) (truth[i] ? c.tp : c.fp)++;
    else (truth[i] ? c.fn : c.tn)++;
  }
  return c;
}

MetricSet metrics(const ConfusionCounts& c) {
  MetricSet m;
  auto ratio = [](std::size_t num, std::size_t den, bool& undefined) {
    undefined = den == 0;
    return undefined ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  m.precision = ratio(c.tp, c.tp + c.fp, m.precision_undefined);
  m.recall = ratio(c.tp, c.tp + c.fn, m.recall_undefined);
  m.f1 = ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn, m.f1_undefined);
  m.accuracy = ratio(c.tp + c.tn, c.total(), m.accuracy_undefined);
  return m;
}

std::string_view name(Metric m) noexcept {
  switch (m) {
    case Metric::Precision: return "precision";
    case Metric::Recall: return "recall";
    case Metric::F1: return "f1";
    case Metric::Accuracy: return "accuracy";
  }
  return "?";
}

double value(const MetricSet& s, Metric m) noexcept {
  switch (m) {
    case Metric::Precision: return s.precision;
    case Metric::Recall: return s.recall;
    case Metric::F1: return s.f1;
    case Metric::Accuracy: return s.accuracy;
  }
  return 0;
}

double relative_gain(double a, double b) {
  if (!(b > 0)) throw Error("relative_gain: reference value must be positive");
  return (a - b) / b;
}

MeanStd mean_std(std::span<const double> v) {
  if (v.empty()) throw Error("mean_std: empty input");
  MeanStd out;
  out.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0;
    for (double x : v) ss += (x - out.mean) * (x - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return out;
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y, Alternative alternative) {
  if (x.size() != y.size() || x.empty()) throw Error("wilcoxon: samples must be non-empty and of equal length");
  std::vector<double> d;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != y[i]) d.push_back(x[i] - y[i]);
  if (d.empty()) throw Error("wilcoxon: all differences are zero");

  const auto m = d.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return std::abs(d[a]) < std::abs(d[b]); });
  // Ranks are kept doubled so tied (half-integer) ranks stay integral.
  std::vector<std::int64_t> rank2(m);
  double tie_term = 0;
  for (std::size_t i = 0; i < m;) {
    std::size_t j = i;
    while (j + 1 < m && std::abs(d[order[j + 1]]) == std::abs(d[order[i]])) ++j;
    const auto t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    for (std::size_t r = i; r <= j; ++r) rank2[order[r]] = static_cast<std::int64_t>(i + j + 2);
    i = j + 1;
  }
  std::int64_t w2 = 0;
  for (std::size_t i = 0; i < m; ++i)
    if (d[i] > 0) w2 += rank2[i];

  WilcoxonResult res;
  res.statistic = static_cast<double>(w2) / 2.0;
  res.n_used = m;
  if (m <= kWilcoxonExactMax) {
    res.exact = true;
    std::uint64_t ge = 0, le = 0;
    const std::uint64_t patterns = std::uint64_t{1} << m;
    for (std::uint64_t mask = 0; mask < patterns; ++mask) {
      std::int64_t s = 0;
      for (std::size_t i = 0; i < m; ++i)
        if (mask >> i & 1) s += rank2[i];
      ge += s >= w2;
      le += s <= w2;
    }
    const double pg = static_cast<double>(ge) / static_cast<double>(patterns);
    const double pl = static_cast<double>(le) / static_cast<double>(patterns);
    res.p_value = alternative == Alternative::Greater ? pg
                  : alternative == Alternative::Less  ? pl
                                                      : std::min(1.0, 2.0 * std::min(pg, pl));
    return res;
  }
  const double md = static_cast<double>(m);
  const double mean = md * (md + 1) / 4.0;
  const double sd = std::sqrt(md * (md + 1) * (2 * md + 1) / 24.0 - tie_term / 48.0);
  auto upper = [](double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); };
  const double w = res.statistic;
  switch (alternative) {
    case Alternative::Greater: res.p_value = upper((w - mean - 0.5) / sd); break;
    case Alternative::Less: res.p_value = 1.0 - upper((w - mean + 0.5) / sd); break;
    case Alternative::TwoSided:
      res.p_value = std::min(1.0, 2.0 * upper(std::max(0.0, std::abs(w - mean) - 0.5) / sd));
      break;
  }
  return res;
}

std::vector<double> bh_fdr(std::span<const double> pvals) {
  for (double p : pvals)
    if (!(p >= 0.0 && p <= 1.0)) throw Error("bh_fdr: p-values must lie in [0, 1]");
  const auto m = pvals.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return pvals[a] < pvals[b]; });
  std::vector<double> out(m);
  double running = 1.0;
  for (std::size_t r = m; r-- > 0;) {
    const double adj = pvals[order[r]] * static_cast<double>(m) / static_cast<double>(r + 1);
    running = std::min(running, adj);
    out[order[r]] = std::min(1.0, running);
  }
  return out;
}

double hypergeom_tail(std::size_t s, std::size_t a, std::size_t b, std::size_t o) {
  if (a > s || b > s || o > std::min(a, b)) throw Error("hypergeom_tail: inconsistent counts");
  const std::size_t lo = b + a > s ? b + a - s : 0;
  if (o <= lo) return 1.0;
  auto lchoose = [](std::size_t n, std::size_t k) {
    return std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
           std::lgamma(static_cast<double>(n - k) + 1);
  };
  const double denom = lchoose(s, b);
  const std::size_t hi = std::min(a, b);
  std::vector<double> logs;
  for (std::size_t i = o; i <= hi; ++i) logs.push_back(lchoose(a, i) + lchoose(s - a, b - i) - denom);
  const double top = *std::max_element(logs.begin(), logs.end());
  double sum = 0;
  for (double l : logs) sum += std::exp(l - top);
  return std::min(1.0, std::exp(top) * sum);
}

std::vector<OverlapTest> overlap_analysis(std::span<const NamedSet> sets, std::span<const std::uint32_t> universe) {
  const std::set<std::uint32_t> u(universe.begin(), universe.end());
  std::vector<std::set<std::uint32_t>> members;
  for (const auto& s : sets) {
    members.emplace_back(s.members.begin(), s.members.end());
    for (auto v : members.back())
      if (!u.count(v)) throw Error("overlap_analysis: set '" + s.name + "' is not contained in the universe");
  }
  std::vector<OverlapTest> out;
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      OverlapTest t{sets[i].name, sets[j].name, u.size(), members[i].size(), members[j].size()};
      for (auto v : members[i]) t.overlap += members[j].count(v);
      t.p_value = hypergeom_tail(t.universe, t.a, t.b, t.overlap);
      t.significant = t.p_value < 0.05;
      out.push_back(std::move(t));
    }
  return out;
}

std::array<std::size_t, 7> venn3(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                                 std::span<const std::uint32_t> c) {
  const std::set<std::uint32_t> sa(a.begin(), a.end()), sb(b.begin(), b.end()), sc(c.begin(), c.end());
  std::set<std::uint32_t> all = sa;
  all.insert(sb.begin(), sb.end());
  all.insert(sc.begin(), sc.end());
  std::array<std::size_t, 7> out{};
  // Indexed by membership bits (A=1, B=2, C=4) then mapped to the documented order.
  static constexpr std::array<int, 8> slot = {-1, 0, 1, 3, 2, 4, 5, 6};
  for (auto v : all) out[slot[sa.count(v) + 2 * sb.count(v) + 4 * sc.count(v)]]++;
  return out;
}

}  // namespace hinmhp
