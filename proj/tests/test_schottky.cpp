#include "fup/schottky.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace fup;

namespace {

// Reduced words by depth-first recursion.
void words_rec(int r, int n, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == n) {
    out.push_back(cur);
    return;
  }
  for (int w = 0; w < 2 * r; ++w) {
    if (!cur.empty() && w == (cur.back() + r) % (2 * r)) continue;
    cur.push_back(w);
    words_rec(r, n, cur, out);
    cur.pop_back();
  }
}

Interval image(const SchottkyData& d, const std::vector<int>& w) {
  // I_w = gamma_{w1} ... gamma_{w(n-1)} (I_{wn}) by pointwise endpoint transport
  Mat2 g = Mat2::Identity();
  for (std::size_t i = 0; i + 1 < w.size(); ++i) g = g * d.generators[w[i]];
  const Interval base = d.intervals[w.back()];
  const double x = mobius_apply(g, base.a), y = mobius_apply(g, base.b);
  return {std::min(x, y), std::max(x, y)};
}

}  // namespace

TEST_CASE("mobius_apply") {
  const Mat2 id = Mat2::Identity();
  CHECK(mobius_apply(id, 2.5) == 2.5);
  const SchottkyData d = builtin_schottky("fig-sch1");
  const Mat2& g1 = d.generators[0];
  CHECK(mobius_apply(g1, 0.0) == doctest::Approx(-3.0).epsilon(1e-15));
  CHECK(mobius_apply(g1, 1.0) == doctest::Approx(-4.0).epsilon(1e-15));
  CHECK(mobius_apply(g1, INFINITY) == doctest::Approx(-3.5).epsilon(1e-15));
  CHECK(d.intervals[0].contains(mobius_apply(g1, INFINITY)));

  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int i = 0; i < 100; ++i) {
    const double x = u(rng);
    const double y = mobius_apply(sl2_inverse(g1), mobius_apply(g1, x));
    CHECK(std::abs(y - x) <= 1e-12 * std::max(1.0, std::abs(x)));
  }
  CHECK(mobius_derivative(g1, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("validate_schottky") {
  const SchottkyData d = builtin_schottky("fig-sch1");
  CHECK(validate_schottky(d).ok);

  SchottkyData overlap = d;
  overlap.intervals[1] = {-3.5, -1};
  const auto r1 = validate_schottky(overlap);
  CHECK(!r1.ok);
  CHECK(!r1.violation.empty());

  SchottkyData det = d;
  det.generators[1].row(1) *= -1;
  CHECK(!validate_schottky(det).ok);

  SchottkyData inv = d;
  inv.generators[3] = d.generators[1];
  CHECK(!validate_schottky(inv).ok);

  SchottkyData count = d;
  count.generators.pop_back();
  CHECK(!validate_schottky(count).ok);
}

TEST_CASE("word counts and enumeration") {
  for (int r : {1, 2, 3})
    for (int n = 1; n <= 10; ++n) {
      std::int64_t expect = 2 * r;
      for (int i = 1; i < n; ++i) expect *= 2 * r - 1;
      CHECK(word_count(r, n) == expect);
    }
  const SchottkyData d = builtin_schottky("fig-sch1");
  CHECK(enumerate_words(d, 1).size() == 4);
  CHECK(enumerate_words(d, 3).size() == 36);
  std::vector<std::vector<int>> ref;
  std::vector<int> cur;
  words_rec(2, 4, cur, ref);
  CHECK(enumerate_words(d, 4) == ref);
  for (std::size_t i = 0; i < ref.size(); ++i) CHECK(word_at(2, 4, static_cast<std::int64_t>(i)) == ref[i]);

  std::vector<std::vector<int>> ref3;
  words_rec(3, 4, cur, ref3);
  CHECK(ref3.size() == 750);
  CHECK(word_count(3, 4) == 750);
  CHECK_THROWS_AS(word_count(2, 40), BudgetError);
}

TEST_CASE("refine: nesting, disjointness, endpoint transport") {
  const SchottkyData d = builtin_schottky("fig-sch1");
  const WordTree t1 = refine(d, 1);
  REQUIRE(t1.size() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(t1.interval(i).a == d.intervals[i].a);
    CHECK(t1.interval(i).b == d.intervals[i].b);
  }

  WordTree prev = t1;
  double prev_total = t1.total_length();
  for (int n = 2; n <= 8; ++n) {
    const WordTree t = refine(d, n);
    CHECK(static_cast<std::int64_t>(t.size()) == word_count(2, n));
    for (std::size_t i = 0; i < t.size(); ++i) {
      const Interval I = t.interval(i), P = prev.interval(t.parent(i));
      CHECK(I.a >= P.a - 1e-12);
      CHECK(I.b <= P.b + 1e-12);
      CHECK(I.length() > 0);
    }
    std::vector<Interval> sorted;
    for (std::size_t i = 0; i < t.size(); ++i) sorted.push_back(t.interval(i));
    std::sort(sorted.begin(), sorted.end(), [](auto x, auto y) { return x.a < y.a; });
    for (std::size_t i = 1; i < sorted.size(); ++i) CHECK(sorted[i - 1].b <= sorted[i].a + 1e-12);
    CHECK(t.total_length() < prev_total);
    prev_total = t.total_length();
    prev = t;
  }

  const WordTree t3 = refine(d, 3);
  CHECK(t3.size() == 36);
  for (std::size_t i = 0; i < t3.size(); ++i) {
    const Interval ref = image(d, t3.word(i));
    CHECK(std::abs(t3.interval(i).a - ref.a) < 1e-12);
    CHECK(std::abs(t3.interval(i).b - ref.b) < 1e-12);
  }
  const WordTree next = refine_next(d, refine(d, 4));
  const WordTree direct = refine(d, 5);
  CHECK(next.left == direct.left);
  CHECK(next.length == direct.length);
}

TEST_CASE("pressure_root") {
  // four pieces of 1/9 against two of 1/3: 4 * 9^-s = 2 * 3^-s at s = log_3 2
  const double s = pressure_root({1.0 / 9, 1.0 / 9, 1.0 / 9, 1.0 / 9}, {1.0 / 3, 1.0 / 3});
  CHECK(std::abs(s - std::log(2.0) / std::log(3.0)) < 1e-10);
  CHECK_THROWS_AS(pressure_root({0.5, 0.5}, {0.1}), InputError);
}

TEST_CASE("estimate_dimension") {
  const SchottkyData d = builtin_schottky("fig-sch1");
  const auto est = estimate_dimension(d);
  CHECK(std::abs(est.delta - 0.31038) < 2e-3);
  CHECK(est.converged);
  for (std::size_t i = 2; i < est.levels.size(); ++i) CHECK(est.levels[i].words == word_count(2, est.levels[i].n));

  // conjugation by x -> 2x + 1
  Mat2 t;
  t << std::sqrt(2.0), 1 / std::sqrt(2.0), 0, 1 / std::sqrt(2.0);
  const SchottkyData c = conjugate(d, t);
  CHECK(validate_schottky(c).ok);
  CHECK(c.intervals[0].a == doctest::Approx(-7.0));
  CHECK(std::abs(estimate_dimension(c).delta - est.delta) < 1e-6);
}

TEST_CASE("three_funnel_schottky") {
  const SchottkyData d = three_funnel_schottky(2, 3, 3);
  CHECK(validate_schottky(d).ok);
  CHECK(std::abs(std::abs(d.generators[0].trace()) - 2 * std::cosh(1.0)) < 1e-10);
  CHECK(std::abs(std::abs(d.generators[1].trace()) - 2 * std::cosh(1.5)) < 1e-10);
  CHECK(std::abs(std::abs((d.generators[0] * sl2_inverse(d.generators[1])).trace()) - 2 * std::cosh(1.5)) < 1e-9);
  CHECK(std::abs(estimate_dimension(d).delta - 0.46932) < 2e-3);

  for (auto l : std::vector<std::array<double, 3>>{{1, 1, 1}, {2, 2, 2}, {4, 3, 5}}) {
    const SchottkyData e = three_funnel_schottky(l[0], l[1], l[2]);
    CHECK(validate_schottky(e).ok);
  }
  CHECK_THROWS_AS(three_funnel_schottky(0, 1, 1), InputError);
  CHECK_THROWS_AS(builtin_schottky("nope"), InputError);
}
