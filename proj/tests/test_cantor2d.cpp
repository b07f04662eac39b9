#include "fup/cantor2d.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>

using namespace fup;

namespace {

Alphabet2 line_h(int M, int s) {
  Alphabet2 a;
  for (int j = 0; j < M; ++j) a.push_back({j, s});
  return a;
}

Alphabet2 line_v(int M, int s) {
  Alphabet2 a;
  for (int j = 0; j < M; ++j) a.push_back({s, j});
  return a;
}

Alphabet2 sierpinski() {
  Alphabet2 a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (!(i == 1 && j == 1)) a.push_back({i, j});
  return a;
}

Alphabet2 from_mask(int M, std::uint32_t mask) {
  Alphabet2 a;
  for (int i = 0; i < M * M; ++i)
    if (mask >> i & 1u) a.push_back({i / M, i % M});
  return a;
}

bool brute_pairing(const Alphabet2& A, const Alphabet2& B) {
  for (auto a : A)
    for (auto a2 : A)
      for (auto b : B)
        for (auto b2 : B)
          if ((a[0] - a2[0]) * (b[0] - b2[0]) + (a[1] - a2[1]) * (b[1] - b2[1]) != 0) return true;
  return false;
}

bool has(const Alphabet2& A, int x, int y) {
  return std::find(A.begin(), A.end(), Digit2{x, y}) != A.end();
}

bool brute_hds1(int M, const Alphabet2& A, const Alphabet2& B) {
  bool column = false;
  for (int s = 0; s < M; ++s) {
    bool empty = true;
    for (int j = 0; j < M; ++j) empty = empty && !has(A, s, j);
    column = column || empty;
  }
  bool rows_missing = true;
  for (int t = 0; t < M; ++t) {
    bool full = true;
    for (int l = 0; l < M; ++l) full = full && has(B, l, t);
    rows_missing = rows_missing && !full;
  }
  return column && rows_missing;
}

bool brute_hds2(int M, const Alphabet2& A, const Alphabet2& B) {
  bool col = false, row = false;
  for (int s = 0; s < M; ++s) {
    bool e = true;
    for (int j = 0; j < M; ++j) e = e && !has(A, s, j);
    col = col || e;
  }
  for (int t = 0; t < M; ++t) {
    bool e = true;
    for (int j = 0; j < M; ++j) e = e && !has(A, j, t);
    row = row || e;
  }
  return col && row && static_cast<int>(B.size()) < M * M;
}

}  // namespace

TEST_CASE("build_cantor2") {
  CHECK(build_cantor2(3, {{0, 0}}, 2) == std::vector<Point2>{{0, 0}});
  CHECK(build_cantor2(2, {{0, 0}, {1, 1}}, 2) == std::vector<Point2>{{0, 0}, {1, 1}, {2, 2}, {3, 3}});
  CHECK(build_cantor2(3, sierpinski(), 2).size() == 64);
  const auto pts = build_cantor2(3, sierpinski(), 3);
  const auto ref = oracle::cantor2_set(3, sierpinski(), 3);
  REQUIRE(pts.size() == ref.size());
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK(pts[i] == ref[i]);

  CHECK_THROWS_AS(build_cantor2(3, {{0, 3}}, 2), InputError);
  CHECK_THROWS_AS(build_cantor2(3, {{0, 1}, {0, 1}}, 2), InputError);
  CHECK_THROWS_AS(build_cantor2(3, {}, 2), InputError);
}

TEST_CASE("fup_norm2: examples") {
  CHECK(std::abs(fup_norm2({3, full_alphabet2(3), full_alphabet2(3), 2}).r - 1) < 1e-10);
  CHECK(std::abs(fup_norm2({3, line_h(3, 0), line_v(3, 0), 2}).r - 1) < 1e-10);
  CHECK(std::abs(fup_norm2({3, {{0, 0}}, {{0, 0}}, 2}).r - 1.0 / 9) < 1e-12);
  for (int k : {1, 2}) CHECK(std::abs(fup_norm2({3, sierpinski(), sierpinski(), k}).r - 1) < 1e-9);
}

TEST_CASE("fup_norm2: dense and matrix-free agree with SVD oracle") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<std::uint32_t> pick(1, (1u << 9) - 1);
  for (int trial = 0; trial < 8; ++trial) {
    const Alphabet2 A = from_mask(3, pick(rng)), B = from_mask(3, pick(rng));
    const CantorSpec2D spec{3, A, B, 2};
    const double ref = oracle::cantor2_norm(3, A, B, 2);
    CHECK(std::abs(fup_norm2(spec).r - ref) < 1e-12);
    const auto kry = fup_norm2(spec, {.dense_limit = 0});
    CHECK(kry.method == "krylov");
    CHECK(std::abs(kry.r - ref) / ref < 1e-8);
  }
}

TEST_CASE("fup_norm2: easy bound and submultiplicativity") {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<std::uint32_t> pick(1, (1u << 9) - 1);
  for (int trial = 0; trial < 10; ++trial) {
    const Alphabet2 A = from_mask(3, pick(rng)), B = from_mask(3, pick(rng));
    double r[5] = {1, 0, 0, 0, 0};
    for (int k = 1; k <= 4; ++k) {
      if (std::pow(static_cast<double>(std::max(A.size(), B.size())), k) > 2048) break;
      const CantorSpec2D spec{3, A, B, k};
      r[k] = fup_norm2(spec).r;
      CHECK(r[k] <= 1 + 1e-10);
      CHECK(r[k] <= easy_bound2(spec) + 1e-10);
    }
    for (int k1 = 1; k1 <= 3; ++k1)
      for (int k2 = 1; k1 + k2 <= 4; ++k2)
        if (r[k1 + k2] > 0) CHECK(r[k1 + k2] <= r[k1] * r[k2] + 1e-9);
  }
}

TEST_CASE("check_nondegenerate_pairing") {
  CHECK(!check_nondegenerate_pairing({{0, 0}}, {{0, 0}}).nondegenerate);
  const auto p = check_nondegenerate_pairing({{0, 0}, {1, 0}}, {{0, 0}, {1, 0}});
  CHECK(p.nondegenerate);
  const auto [a, a2, b, b2] = p.witness;
  CHECK((a[0] - a2[0]) * (b[0] - b2[0]) + (a[1] - a2[1]) * (b[1] - b2[1]) != 0);

  // subsets of the horizontal and vertical axes
  for (std::uint32_t ma = 1; ma < 8; ++ma)
    for (std::uint32_t mb = 1; mb < 8; ++mb) {
      Alphabet2 A, B;
      for (int j = 0; j < 3; ++j) {
        if (ma >> j & 1u) A.push_back({j, 0});
        if (mb >> j & 1u) B.push_back({0, j});
      }
      CHECK(!check_nondegenerate_pairing(A, B).nondegenerate);
    }

  std::mt19937_64 rng(31);
  std::uniform_int_distribution<std::uint32_t> pick(1, (1u << 9) - 1);
  for (int trial = 0; trial < 200; ++trial) {
    const Alphabet2 A = from_mask(3, pick(rng)), B = from_mask(3, pick(rng));
    CHECK(check_nondegenerate_pairing(A, B).nondegenerate == brute_pairing(A, B));
  }
}

TEST_CASE("degenerate pairing gives the easy bound exactly") {
  for (std::uint32_t ma = 1; ma < 8; ++ma)
    for (std::uint32_t mb = 1; mb < 8; ++mb) {
      Alphabet2 A, B;
      for (int j = 0; j < 3; ++j) {
        if (ma >> j & 1u) A.push_back({j, 1});
        if (mb >> j & 1u) B.push_back({2, j});
      }
      for (int k = 1; k <= 3; ++k) {
        const CantorSpec2D spec{3, A, B, k};
        const double beta = 1 - (spec.delta_A() + spec.delta_B()) / 2;
        CHECK(std::abs(fup_norm2(spec).r - std::pow(static_cast<double>(spec.N()), -beta)) < 1e-9);
      }
    }
}

TEST_CASE("classify_exceptional") {
  const auto c1 = classify_exceptional({3, line_h(3, 1), line_v(3, 2), 2});
  CHECK(c1.kind == ExceptionalKind::case1_lines);
  CHECK(c1.s_first == 1);
  CHECK(c1.s_second == 2);
  CHECK(classify_exceptional({3, {{0, 0}}, {{0, 0}}, 2}).kind == ExceptionalKind::none);

  // diagonal / antidiagonal with no full lines in the digit alphabet
  const Alphabet2 diag{{0, 0}, {1, 1}, {2, 2}};
  const Alphabet2 anti{{0, 2}, {1, 1}, {2, 0}};
  const auto c2 = classify_exceptional({3, diag, anti, 2});
  CHECK(c2.kind == ExceptionalKind::case2_diagonals);
  CHECK(std::abs(fup_norm2({3, diag, anti, 2}).r - 1) < 1e-9);

  // Sierpinski level 2 contains the diagonal {(j, j + 4)}, s = (3^2 - 1)/2
  std::set<Point2> pts;
  for (const auto& p : build_cantor2(3, sierpinski(), 2)) pts.insert(p);
  bool diagonal = true;
  for (int j = 0; j < 9; ++j) diagonal = diagonal && pts.count({j, (j + 4) % 9}) > 0;
  CHECK(diagonal);
  CHECK(classify_exceptional({3, sierpinski(), sierpinski(), 2}).kind != ExceptionalKind::none);
}

TEST_CASE("hds conditions match brute predicates") {
  // column s = 2 empty in A; every row of B misses an element
  const Alphabet2 A{{0, 0}, {0, 1}, {1, 2}, {1, 0}};
  const Alphabet2 B{{0, 0}, {1, 0}, {1, 1}, {2, 1}, {0, 2}, {2, 2}};
  const auto h = check_hds1(3, A, B);
  CHECK(h.pass);
  REQUIRE(h.s.has_value());
  CHECK(*h.s == 2);
  CHECK(!check_hds1(3, full_alphabet2(3), B).pass);

  const Alphabet2 A2{{0, 0}, {1, 1}};  // column 2 and row 2 empty
  CHECK(check_hds2(3, A2, sierpinski()).pass);
  CHECK(!check_hds2(3, A2, full_alphabet2(3)).pass);

  std::mt19937_64 rng(37);
  std::uniform_int_distribution<std::uint32_t> pick(1, (1u << 16) - 1);
  for (int trial = 0; trial < 20; ++trial) {
    const Alphabet2 a = from_mask(4, pick(rng)), b = from_mask(4, pick(rng));
    CHECK(check_hds1(4, a, b).pass == brute_hds1(4, a, b));
    CHECK(check_hds2(4, a, b).pass == brute_hds2(4, a, b));
  }
}

TEST_CASE("thin_count") {
  CHECK(thin_count(3, 4, 4, 1).count == 81);
  CHECK(thin_count(3, 4, 0, 1).count == 16);
  for (int t = 0; t < 3; ++t) {
    std::int64_t brute = 0;
    for (int b = 0; b < 243; ++b) {
      int n = 0;
      for (int x = b, i = 0; i < 5; ++i, x /= 3) n += (x % 3 == t);
      brute += (n <= 2);
    }
    const auto tc = thin_count(3, 5, 2, t);
    CHECK(tc.count == brute);
    CHECK(tc.bound_applies);
    CHECK(tc.bound_holds);
  }
  CHECK_THROWS_AS(thin_count(3, 2, 3, 0), InputError);
}

TEST_CASE("hds conditions give r_4 < 1 - 1e-6 for M = 3") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::uint32_t> pick(1, (1u << 9) - 1);
  int found = 0;
  for (int trial = 0; trial < 20000 && found < 40; ++trial) {
    const Alphabet2 A = from_mask(3, pick(rng)), B = from_mask(3, pick(rng));
    if (!check_hds1(3, A, B).pass && !check_hds2(3, A, B).pass) continue;
    ++found;
    CHECK(fup_norm2({3, A, B, 4}).r < 1 - 1e-6);
  }
  CHECK(found == 40);
}
