#include "fup/covers.hpp"

#include <doctest.h>

#include <random>

using namespace fup;

namespace {

std::vector<double> uniform_weights(const IntervalCover& c) {
  return std::vector<double>(c.size(), 1.0 / static_cast<double>(c.size()));
}

// Largest uncovered piece of [x, y] by scanning the sorted intervals.
double gap_scan(const IntervalCover& c, double x, double y) {
  double best = 0, cur = x;
  for (const Interval& I : c.intervals) {
    if (I.b < x) continue;
    if (I.a > y) break;
    best = std::max(best, std::min(I.a, y) - cur);
    cur = std::max(cur, I.b);
  }
  return std::max(best, y - cur);
}

// Mass by numerical integration of the spread weights.
double mass_scan(const IntervalCover& c, const std::vector<double>& w, double x, double y) {
  double m = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Interval& I = c.intervals[i];
    if (I.length() == 0) {
      if (x <= I.a && I.a <= y) m += w[i];
      continue;
    }
    const double lo = std::max(x, I.a), hi = std::min(y, I.b);
    if (hi > lo) m += w[i] * (hi - lo) / I.length();
  }
  return m;
}

}  // namespace

TEST_CASE("IntervalCover invariants") {
  const IntervalCover c({{2, 3}, {0, 1}});
  CHECK(c.intervals[0].a == 0);
  CHECK(c.lo() == 0);
  CHECK(c.hi() == 3);
  CHECK_THROWS_AS(IntervalCover({{0, 2}, {1, 3}}), InputError);
  CHECK_THROWS_AS(IntervalCover({{1, 0}}), InputError);
  CHECK_NOTHROW(IntervalCover({{0, 1}, {1, 2}, {3, 3}}));
  CHECK_NOTHROW(cover_with_rounding({{0, 1 + 1e-15}, {1, 2}}));
}

TEST_CASE("cantor covers and volume") {
  CHECK(volume(IntervalCover({{0, 1}})) == 1.0);
  const double delta = std::log(2.0) / std::log(3.0);
  for (int k = 1; k <= 10; ++k) {
    const IntervalCover c = cantor_interval_cover(3, {0, 2}, k);
    CHECK(c.size() == static_cast<std::size_t>(1) << k);
    const double h = std::pow(3.0, -k);
    CHECK(std::abs(volume(c) - std::pow(2.0 / 3, k)) < 1e-13);
    CHECK(std::abs(volume(c) - std::pow(h, 1 - delta)) < 1e-12);
    CHECK(check_volume_bound(c, delta, h, 1.0));
    CHECK(!check_volume_bound(c, delta, h, 0.99));
  }
}

TEST_CASE("largest_gap and cover_mass against scans") {
  const IntervalCover c = cantor_interval_cover(3, {0, 2}, 5);
  const auto w = uniform_weights(c);
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(-0.2, 1.2);
  for (int i = 0; i < 2000; ++i) {
    double x = u(rng), y = u(rng);
    if (y < x) std::swap(x, y);
    CHECK(std::abs(largest_gap(c, x, y) - gap_scan(c, x, y)) < 1e-13);
    CHECK(std::abs(cover_mass(c, w, x, y) - mass_scan(c, w, x, y)) < 1e-12);
  }
}

TEST_CASE("check_porosity") {
  const IntervalCover c8 = cantor_interval_cover(3, {0, 2}, 8);
  const double h = std::pow(3.0, -8);
  CHECK(check_porosity(c8, {0.19, 3 * h, 1}).pass);
  const auto bad = check_porosity(c8, {0.45, 3 * h, 1});
  CHECK(!bad.pass);
  REQUIRE(bad.witness.has_value());
  CHECK(gap_scan(c8, bad.witness->a, bad.witness->b) < 0.45 * bad.witness->length());

  const auto unit = check_porosity(IntervalCover({{0, 1}}), {0.1, 0.01, 0.5});
  CHECK(!unit.pass);
  CHECK(check_porosity(IntervalCover({{0, 0}}), {1.0 / 3}).pass);
  CHECK(check_porosity(IntervalCover(), {0.2}).vacuous);

  // shrinking nu never turns a pass into a fail
  for (double nu : {0.19, 0.1, 0.05, 0.01}) CHECK(check_porosity(c8, {nu, 3 * h, 1}).pass);
}

TEST_CASE("check_regularity: examples") {
  const IntervalCover point({{0, 0}});
  CHECK(check_regularity(point, {1.0}, {0, 1}).pass);

  for (double a : {0.3, 1.0, 7.0}) {
    const IntervalCover seg({{0, a}});
    // Lebesgue measure on [0, a]
    CHECK(check_regularity(seg, {a}, {1, 2, 0, a}).pass);
  }

  const IntervalCover mixed({{0, 0}, {1, 2}});
  int passes = 0;
  for (int d = 0; d <= 10; ++d)
    for (double C : {1.0, 2.0, 5.0, 10.0})
      for (auto w : std::vector<std::vector<double>>{{0.5, 0.5}, {0.1, 0.9}, {0.9, 0.1}, {0.01, 0.99}})
        passes += check_regularity(mixed, w, {d / 10.0, C, 0, 1}).pass;
  CHECK(passes == 0);

  const IntervalCover c = cantor_interval_cover(3, {0, 2}, 8);
  const double delta = std::log(2.0) / std::log(3.0);
  const auto w = uniform_weights(c);
  CHECK(check_regularity(c, w, {delta, 4, std::pow(3.0, -8), 1}).pass);
  CHECK(!check_regularity(c, w, {delta, 1.01, std::pow(3.0, -8), 1}).pass);
  // growing C_R never turns a pass into a fail
  for (double C : {4.0, 8.0, 100.0}) CHECK(check_regularity(c, w, {delta, C, std::pow(3.0, -8), 1}).pass);

  CHECK_THROWS_AS(check_regularity(c, {1.0}, {delta, 2}), InputError);
}

TEST_CASE("neighborhood") {
  const IntervalCover n = neighborhood(IntervalCover({{0, 0}}), 1);
  REQUIRE(n.size() == 1);
  CHECK(n.intervals[0].a == -1);
  CHECK(n.intervals[0].b == 1);
  CHECK(neighborhood(IntervalCover({{0, 1}, {1.5, 2}}), 0.3).size() == 1);
  CHECK(neighborhood(IntervalCover({{0, 1}, {1.5, 2}}), 0.2).size() == 2);
  CHECK_THROWS_AS(neighborhood(IntervalCover({{0, 1}}), 0), InputError);

  // dyadic data: exact composition
  const IntervalCover c({{0, 0.25}, {0.5, 0.625}, {1, 1}});
  const IntervalCover a = neighborhood(neighborhood(c, 0.0625), 0.125);
  const IntervalCover b = neighborhood(c, 0.1875);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.intervals[i].a == b.intervals[i].a);
    CHECK(a.intervals[i].b == b.intervals[i].b);
  }

  for (int k : {4, 6}) {
    const double h = std::pow(3.0, -k) / 2;
    const double nu = 0.19;
    const IntervalCover X = neighborhood(cantor_interval_cover(3, {0, 2}, k), h);
    CHECK(check_porosity(X, {nu / 3, 3 * h / nu, 1}).pass);
  }
}

TEST_CASE("porous_to_regular_cover") {
  // the middle gap serves level 1 only; [0, 1/3] has no gap at scale 1/49
  const IntervalCover two({{0, 1.0 / 3}, {2.0 / 3, 1}});
  const auto one = porous_to_regular_cover(two, 0.3, 7, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].cells == std::vector<std::int64_t>{0, 1, 2, 4, 5, 6});
  try {
    porous_to_regular_cover(two, 0.3, 7, 3);
    CHECK(false);
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("level 1 cell 0") != std::string::npos);
  }

  const IntervalCover c = cantor_interval_cover(3, {0, 2}, 10);
  const auto levels = porous_to_regular_cover(c, 0.19, 11, 4);
  REQUIRE(levels.size() == 4);
  std::int64_t bound = 1;
  for (int j = 0; j < 4; ++j) {
    bound *= 10;
    CHECK(static_cast<std::int64_t>(levels[j].cells.size()) <= bound);
    CHECK(levels[j].cell_length == doctest::Approx(std::pow(11.0, -(j + 1))).epsilon(1e-15));
    // output contains the input
    const IntervalCover Y = levels[j].cover();
    for (const Interval& I : c.intervals) {
      double covered = 0;
      for (const Interval& J : Y.intervals) covered += std::max(0.0, std::min(I.b, J.b) - std::max(I.a, J.a));
      CHECK(covered == doctest::Approx(I.length()).epsilon(1e-12));
    }
  }
  // nested
  for (int j = 1; j < 4; ++j)
    for (std::int64_t cell : levels[j].cells)
      CHECK(std::binary_search(levels[j - 1].cells.begin(), levels[j - 1].cells.end(), cell / 11));

  CHECK_THROWS_AS(porous_to_regular_cover(IntervalCover({{0, 1}}), 0.3, 7, 1), InputError);
  CHECK_THROWS_AS(porous_to_regular_cover(two, 0.3, 6, 1), InputError);
  try {
    porous_to_regular_cover(IntervalCover({{0, 1}}), 0.3, 7, 1);
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("level 0 cell 0") != std::string::npos);
  }
}

TEST_CASE("scale_grid") {
  const auto g = scale_grid(0.25, 1, 2, 1);
  REQUIRE(g.size() == 5);
  CHECK(g.front() == 0.25);
  CHECK(g.back() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(scale_grid(0, INFINITY, 1, 2).front() == doctest::Approx(2e-12));
  CHECK_THROWS_AS(scale_grid(1, 0.5, 1, 1), InputError);
}
