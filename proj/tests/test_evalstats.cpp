#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include "hinmhp/evalstats.hpp"
#include "hinmhp/types.hpp"

using namespace hinmhp;

namespace {

using Big = boost::multiprecision::cpp_int;

Big choose(unsigned n, unsigned k) {
  if (k > n) return 0;
  Big r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Exact rational upper tail, converted to double at the end.
double hypergeom_oracle(unsigned s, unsigned a, unsigned b, unsigned o) {
  Big num = 0;
  for (unsigned i = o; i <= std::min(a, b); ++i) num += choose(a, i) * choose(s - a, b - i);
  const boost::rational<Big> p(num, choose(s, b));
  return static_cast<double>(boost::multiprecision::cpp_rational(p.numerator(), p.denominator()));
}

// Brute force: average ranks by counting, then all 2^m sign flips.
double wilcoxon_oracle(const std::vector<double>& d, Alternative alt) {
  const auto m = d.size();
  std::vector<double> rank(m);
  for (std::size_t i = 0; i < m; ++i) {
    double less = 0, equal = 0;
    for (std::size_t j = 0; j < m; ++j) {
      less += std::abs(d[j]) < std::abs(d[i]);
      equal += std::abs(d[j]) == std::abs(d[i]);
    }
    rank[i] = less + (equal + 1) / 2;
  }
  double w = 0;
  for (std::size_t i = 0; i < m; ++i)
    if (d[i] > 0) w += rank[i];
  double ge = 0, le = 0;
  const std::size_t total = std::size_t{1} << m;
  for (std::size_t mask = 0; mask < total; ++mask) {
    double s = 0;
    for (std::size_t i = 0; i < m; ++i)
      if (mask >> i & 1) s += rank[i];
    ge += s >= w - 1e-9;
    le += s <= w + 1e-9;
  }
  ge /= static_cast<double>(total);
  le /= static_cast<double>(total);
  if (alt == Alternative::Greater) return ge;
  if (alt == Alternative::Less) return le;
  return std::min(1.0, 2 * std::min(ge, le));
}

std::vector<bool> bools(std::initializer_list<int> v) { return std::vector<bool>(v.begin(), v.end()); }

}  // namespace

TEST_CASE("stratified folds") {
  const auto small = bools({1, 0, 1, 0, 0, 1, 0, 0, 1, 0});
  const auto f = stratified_kfold(small, 5, 3);
  std::vector<int> pos(5, 0), size(5, 0);
  for (std::size_t i = 0; i < small.size(); ++i) {
    pos[f.fold[i]] += small[i];
    size[f.fold[i]]++;
  }
  std::sort(pos.begin(), pos.end());
  CHECK(pos == std::vector<int>{0, 1, 1, 1, 1});
  CHECK(*std::max_element(size.begin(), size.end()) - *std::min_element(size.begin(), size.end()) <= 1);

  std::vector<bool> big(274, false);
  for (int i = 0; i < 67; ++i) big[static_cast<std::size_t>(i * 4 + 1)] = true;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = stratified_kfold(big, 5, seed);
    std::vector<int> p(5, 0), s(5, 0);
    for (std::size_t i = 0; i < big.size(); ++i) {
      REQUIRE(g.fold[i] < 5);
      p[g.fold[i]] += big[i];
      s[g.fold[i]]++;
    }
    for (int k = 0; k < 5; ++k) {
      CHECK((p[k] == 13 || p[k] == 14));
      CHECK((s[k] == 54 || s[k] == 55));
      CHECK(g.members(k).size() + g.complement(k).size() == 274);
    }
  }
  CHECK(stratified_kfold(big, 5, 9).fold == stratified_kfold(big, 5, 9).fold);
  CHECK(stratified_kfold(big, 5, 9).fold != stratified_kfold(big, 5, 10).fold);
  CHECK_THROWS_AS(stratified_kfold(bools({1, 0, 1}), 5, 1), Error);
  CHECK_THROWS_AS(stratified_kfold(std::vector<bool>(10, true), 5, 1), Error);
}

TEST_CASE("confusion and metrics") {
  const auto truth = bools({1, 1, 1, 0, 1, 1, 0, 0, 0, 0});
  const auto c = confusion(bools({1, 1, 0, 0, 1, 0, 0, 0, 0, 1}), truth);
  CHECK(c == ConfusionCounts{3, 1, 4, 2});
  const auto m = metrics(c);
  CHECK(m.precision == doctest::Approx(0.75));
  CHECK(m.recall == doctest::Approx(0.6));
  CHECK(m.f1 == doctest::Approx(6.0 / 9.0));
  CHECK(m.accuracy == doctest::Approx(0.7));
  CHECK(m.accuracy * 10 == c.tp + c.tn);
  CHECK(m.f1 == doctest::Approx(2 * m.precision * m.recall / (m.precision + m.recall)));

  CHECK(confusion(bools({1, 1, 1, 1, 1}), bools({1, 1, 1, 1, 1})) == ConfusionCounts{5, 0, 0, 0});
  const auto flipped = confusion(bools({0, 1, 0, 1}), bools({1, 0, 1, 0}));
  CHECK(flipped.tp == 0);
  CHECK(flipped.tn == 0);

  const auto none = metrics({0, 0, 6, 4});
  CHECK(none.precision == 0);
  CHECK(none.precision_undefined);
  CHECK(!none.recall_undefined);
  const auto perfect = metrics({3, 0, 7, 0});
  CHECK(perfect.precision == 1.0);
  CHECK(perfect.recall == 1.0);
  CHECK(perfect.f1 == 1.0);
  CHECK(perfect.accuracy == 1.0);
  CHECK(metrics({}).accuracy_undefined);
  CHECK_THROWS_AS(confusion(bools({1}), bools({1, 0})), Error);
}

TEST_CASE("relative gain and summaries") {
  CHECK(relative_gain(0.612, 0.245) == doctest::Approx(1.498).epsilon(1e-3));
  CHECK(relative_gain(0.3, 0.3) == 0.0);
  CHECK_THROWS_AS(relative_gain(0.245, 0), Error);
  const double v[] = {1, 2, 3, 4};
  const auto s = mean_std(v);
  CHECK(s.mean == 2.5);
  CHECK(s.std == doctest::Approx(std::sqrt(5.0 / 3.0)));
  const double one[] = {0.4};
  CHECK(mean_std(one).std == 0.0);
}

TEST_CASE("wilcoxon exact values") {
  const double x5[] = {2, 3, 4, 5, 6}, y5[] = {1, 1, 1, 1, 1};
  CHECK(wilcoxon_signed_rank(x5, y5, Alternative::Greater).p_value == 1.0 / 32);
  CHECK(wilcoxon_signed_rank(x5, y5, Alternative::TwoSided).p_value == 2.0 / 32);
  CHECK(wilcoxon_signed_rank(x5, y5, Alternative::Less).p_value == 1.0);
  CHECK(wilcoxon_signed_rank(x5, y5).statistic == 15);
  const double x6[] = {1, 2, 3, 4, 5, 6}, y6[] = {0, 0, 0, 0, 0, 0};
  CHECK(wilcoxon_signed_rank(x6, y6, Alternative::Greater).p_value == 1.0 / 64);
  CHECK_THROWS_AS(wilcoxon_signed_rank(x6, x6), Error);
  const double shorter[] = {1, 2};
  CHECK_THROWS_AS(wilcoxon_signed_rank(x6, shorter), Error);
}

TEST_CASE("wilcoxon exact mode equals enumeration oracle") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = 1 + t % 12;
    std::vector<double> x(m), y(m);
    for (std::size_t i = 0; i < m; ++i) {
      // Small integer grid produces ties and zero differences.
      x[i] = static_cast<double>(rng() % 7);
      y[i] = static_cast<double>(rng() % 7);
    }
    std::vector<double> d;
    for (std::size_t i = 0; i < m; ++i)
      if (x[i] != y[i]) d.push_back(x[i] - y[i]);
    if (d.empty()) continue;
    for (auto alt : {Alternative::TwoSided, Alternative::Greater, Alternative::Less}) {
      const auto r = wilcoxon_signed_rank(x, y, alt);
      CHECK(r.exact);
      CHECK(r.n_used == d.size());
      CHECK(r.p_value == doctest::Approx(wilcoxon_oracle(d, alt)).epsilon(1e-12));
    }
  }
}

TEST_CASE("wilcoxon normal approximation") {
  std::vector<double> x(30), y(30, 0.0);
  for (int i = 0; i < 30; ++i) x[i] = i % 3 == 0 ? -(i + 1.0) : i + 1.0;
  const auto r = wilcoxon_signed_rank(x, y, Alternative::Greater);
  CHECK(!r.exact);
  // Negative ranks 1, 4, ..., 28 sum to 145: W = 465 - 145 = 320, mean 232.5.
  CHECK(r.statistic == 320);
  const double z = (320 - 232.5 - 0.5) / std::sqrt(30.0 * 31 * 61 / 24);
  CHECK(r.p_value == doctest::Approx(0.5 * std::erfc(z / std::sqrt(2.0))));
  const auto two = wilcoxon_signed_rank(x, y);
  CHECK(two.p_value == doctest::Approx(2 * r.p_value));

  // m = 15 sits just past the exact range; the approximation should stay close.
  std::vector<double> a(15), b(15, 0.0);
  for (int i = 0; i < 15; ++i) a[i] = i % 4 == 0 ? -(i + 1.0) : i + 1.0;
  const auto approx = wilcoxon_signed_rank(a, b, Alternative::Greater);
  std::vector<double> d(a.begin(), a.end());
  CHECK(std::abs(approx.p_value - wilcoxon_oracle(d, Alternative::Greater)) < 0.01);
}

TEST_CASE("benjamini hochberg") {
  const double p[] = {0.01, 0.02, 0.04};
  const auto adj = bh_fdr(p);
  CHECK(adj[0] == doctest::Approx(0.03));
  CHECK(adj[1] == doctest::Approx(0.03));
  CHECK(adj[2] == doctest::Approx(0.04));
  const double single[] = {0.2};
  CHECK(bh_fdr(single)[0] == 0.2);
  const double mixed[] = {0.5, 0.001, 0.04, 0.03, 0.9};
  const auto m = bh_fdr(mixed);
  CHECK(m[1] == doctest::Approx(0.005));
  CHECK(m[2] == doctest::Approx(0.2 / 3));
  CHECK(m[3] == doctest::Approx(0.2 / 3));
  CHECK(m[0] == doctest::Approx(0.625));
  CHECK(m[4] == doctest::Approx(0.9));
  // The monotone step (running minimum from the largest p) leaves adjusted values unchanged.
  std::vector<double> sorted(m.begin(), m.end());
  std::sort(sorted.begin(), sorted.end());
  auto suffix_min = sorted;
  for (std::size_t r = suffix_min.size() - 1; r-- > 0;) suffix_min[r] = std::min(suffix_min[r], suffix_min[r + 1]);
  CHECK(suffix_min == sorted);
  const double bad[] = {0.1, 1.5};
  CHECK_THROWS_AS(bh_fdr(bad), Error);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u;
  for (int t = 0; t < 50; ++t) {
    std::vector<double> q(1 + t % 9);
    for (auto& v : q) v = u(rng);
    const auto a = bh_fdr(q);
    std::vector<std::size_t> o(q.size());
    std::iota(o.begin(), o.end(), 0);
    std::sort(o.begin(), o.end(), [&](auto i, auto j) { return q[i] < q[j]; });
    for (std::size_t r = 1; r < o.size(); ++r) CHECK(a[o[r]] >= a[o[r - 1]]);
    for (std::size_t r = 0; r < q.size(); ++r) CHECK(a[r] >= q[r] * (1 - 1e-15));
  }
}

TEST_CASE("hypergeometric tail") {
  CHECK(hypergeom_tail(10, 5, 5, 0) == 1.0);
  CHECK(hypergeom_tail(10, 5, 5, 5) == doctest::Approx(1.0 / 252).epsilon(1e-12));
  CHECK(std::abs(hypergeom_tail(67, 41, 30, 25) - hypergeom_oracle(67, 41, 30, 25)) < 1e-10);
  CHECK_THROWS_AS(hypergeom_tail(10, 11, 5, 0), Error);
  CHECK_THROWS_AS(hypergeom_tail(10, 5, 5, 6), Error);

  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const unsigned s = 1 + rng() % 200, a = rng() % (s + 1), b = rng() % (s + 1);
    const unsigned o = rng() % (std::min(a, b) + 1);
    const double p = hypergeom_tail(s, a, b, o);
    CHECK(std::abs(p - hypergeom_oracle(s, a, b, o)) < 1e-10);
    CHECK(std::abs(p - hypergeom_tail(s, b, a, o)) < 1e-12);
  }
}

TEST_CASE("overlap analysis and venn regions") {
  const std::vector<std::uint32_t> universe{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  const std::vector<NamedSet> same{{"dmf", {0, 1, 2}}, {"dmf_again", {0, 1, 2}}};
  const auto t = overlap_analysis(same, universe);
  REQUIRE(t.size() == 1);
  CHECK(t[0].overlap == 3);
  CHECK(t[0].p_value == doctest::Approx(hypergeom_oracle(10, 3, 3, 3)));
  CHECK(t[0].p_value <= hypergeom_tail(10, 3, 3, 2));

  const std::vector<NamedSet> disjoint{{"a", {0, 1}}, {"b", {5, 6, 7}}, {"c", {1, 5, 9}}};
  const auto d = overlap_analysis(disjoint, universe);
  REQUIRE(d.size() == 3);
  CHECK(d[0].overlap == 0);
  CHECK(d[0].p_value == 1.0);
  CHECK(!d[0].significant);
  CHECK(d[1].method_a == "a");
  CHECK(d[1].method_b == "c");

  const std::vector<NamedSet> outside{{"a", {0, 11}}};
  CHECK_THROWS_AS(overlap_analysis(outside, universe), Error);

  const auto v = venn3(disjoint[0].members, disjoint[1].members, disjoint[2].members);
  // a only {0}, b only {6,7}, c only {9}, ab {}, ac {1}, bc {5}, abc {}.
  CHECK(v == std::array<std::size_t, 7>{1, 2, 1, 0, 1, 1, 0});
  CHECK(std::accumulate(v.begin(), v.end(), std::size_t{0}) == 6);
}
