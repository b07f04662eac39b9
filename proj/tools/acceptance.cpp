// Acceptance runner: one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria (capped at 100).

#include "fup/cantor1d.hpp"
#include "fup/cantor2d.hpp"
#include "fup/covers.hpp"
#include "fup/dft.hpp"
#include "fup/energy.hpp"
#include "fup/measure.hpp"
#include "fup/parallel.hpp"
#include "fup/schottky.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <sys/wait.h>

using namespace fup;

namespace {

// Pinned tolerances.
constexpr double kUnitaryTol = 1e-12;
constexpr double kFullTol = 1e-10;
constexpr double kSingletonTol = 1e-12;
constexpr double kHsMargin = 1e-10;
constexpr double kSubmultTol = 1e-9;
constexpr double kDipTol = 1e-2;
constexpr double kProductTol = 1e-12;
constexpr double kCrossTol = 1e-10;
constexpr double kPointTol = 1e-12;
constexpr double kSierpinskiTol = 1e-9;
constexpr double kDegenerateTol = 1e-9;
constexpr double kDimTol = 2e-3;
constexpr double kKernelTol = 1e-9;
constexpr double kNonDecayTol = 2e-3;
constexpr double kDecaySplit = 0.02;
constexpr double kEnergyTol = 0.05;
constexpr double kBandSlack = 0.1;
constexpr double kCantorRegularityC = 32;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Clock {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

VectorXc random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  VectorXc v(n);
  for (auto& x : v) x = cplx(nd(rng), nd(rng));
  return v;
}

std::vector<std::vector<int>> alphabets(int M) {
  std::vector<std::vector<int>> out;
  for (std::uint32_t mask = 1; mask < (1u << M); ++mask) out.push_back(alphabet_from_mask(mask));
  return out;
}

std::string show(const std::vector<int>& A) {
  std::string s = "{";
  for (std::size_t i = 0; i < A.size(); ++i) s += (i ? "," : "") + std::to_string(A[i]);
  return s + "}";
}

double hs_ceiling(int M, std::size_t size, int k) {
  const double N = std::pow(static_cast<double>(M), k);
  return std::min(1.0, std::pow(N, dimension(M, size) - 0.5));
}

Outcome unitarity() {
  std::mt19937_64 rng(1);
  double worst = 0, t = 0;
  for (int N : {243, 256, 1000}) {
    const VectorXc v = random_vector(N, rng);
    MatrixXc u(N, N);
    for (int c = 0; c < N; ++c) u.col(c) = random_vector(N, rng);
    Clock clock;
    const VectorXc f = dft_apply(v);
    const VectorXc fi = idft_apply(f);
    const MatrixXc g = dft2_apply(u);
    const MatrixXc gi = idft2_apply(g);
    t += clock.seconds();
    worst = std::max(worst, std::abs(f.norm() - v.norm()) / v.norm());
    worst = std::max(worst, (fi - v).norm() / v.norm());
    worst = std::max(worst, std::abs(g.norm() - u.norm()) / u.norm());
    worst = std::max(worst, (gi - u).norm() / u.norm());
  }
  return {worst <= kUnitaryTol && t < 1.0, "worst_rel=" + fmt(worst) + " transform_time_s=" + fmt(t)};
}

Outcome trivial_norms() {
  double worst_full = 0, worst_single = 0;
  for (int M = 2; M <= 10; ++M)
    for (int k = 1; k <= 5; ++k) {
      std::vector<int> full(M);
      for (int a = 0; a < M; ++a) full[a] = a;
      worst_full = std::max(worst_full, std::abs(fup_norm({M, full, k}).r - 1));
      const double N = std::pow(static_cast<double>(M), k);
      worst_single = std::max(worst_single, std::abs(fup_norm({M, {M - 1}, k}).r - 1 / std::sqrt(N)));
    }
  return {worst_full <= kFullTol && worst_single <= kSingletonTol,
          "full_err=" + fmt(worst_full) + " singleton_err=" + fmt(worst_single)};
}

Outcome hs_ceiling_scan() {
  Clock clock;
  int checked = 0;
  std::string bad;
  for (int M = 2; M <= 6; ++M)
    for (const auto& A : alphabets(M)) {
      const double delta = dimension(M, A.size());
      for (int k = 1; k <= 4; ++k) {
        const double r = fup_norm({M, A, k}).r;
        const double ceil = hs_ceiling(M, A.size(), k);
        ++checked;
        if (r > ceil + kHsMargin && bad.empty()) bad = "M=" + std::to_string(M) + " A=" + show(A) + " k=" + std::to_string(k);
        if (k == 2 && delta > 0 && delta < 1) {
          const double N = static_cast<double>(M) * M;
          if (!(r < std::pow(N, delta - 0.5) - kHsMargin) && bad.empty())
            bad = "not strict at k=2: M=" + std::to_string(M) + " A=" + show(A);
        }
      }
    }
  const double t = clock.seconds();
  return {bad.empty() && t < 300, "norms=" + std::to_string(checked) + " time_s=" + fmt(t) + (bad.empty() ? "" : " first_violation=" + bad)};
}

Outcome witness() {
  int total = 0;
  std::vector<std::string> missing;
  for (int M = 2; M <= 5; ++M)
    for (const auto& A : alphabets(M)) {
      if (A.size() <= 1 || static_cast<int>(A.size()) == M) continue;
      ++total;
      const auto w = strictness_witness(M, A, 6, kHsMargin);
      if (!w.k) missing.push_back("M=" + std::to_string(M) + " A=" + show(A));
    }
  std::string detail = "alphabets=" + std::to_string(total) + " without_witness=" + std::to_string(missing.size());
  for (std::size_t i = 0; i < std::min<std::size_t>(missing.size(), 3); ++i) detail += " " + missing[i];
  return {missing.empty(), detail};
}

Outcome submultiplicativity() {
  int checked = 0;
  double worst = -INFINITY;
  for (int M = 2; M <= 4; ++M)
    for (const auto& A : alphabets(M)) {
      std::vector<double> r(7);
      for (int k = 1; k <= 6; ++k) r[k] = fup_norm({M, A, k}).r;
      for (int k1 = 1; k1 <= 5; ++k1)
        for (int k2 = 1; k1 + k2 <= 6; ++k2) {
          worst = std::max(worst, r[k1 + k2] - r[k1] * r[k2]);
          ++checked;
        }
    }
  return {worst <= kSubmultTol, "pairs=" + std::to_string(checked) + " max(r12-r1*r2)=" + fmt(worst)};
}

Outcome dilated_dip() {
  std::string detail;
  bool pass = true;
  for (int k : {6, 8}) {
    const double rt = schur_dilated_bound(4, {0, 1}, k, 2.0);
    const double beta = -std::log(rt) / (k * std::log(4.0));
    pass = pass && std::abs(beta - 0.25) <= kDipTol;
    detail += "beta_tilde_k" + std::to_string(k) + "=" + fmt(beta) + " ";
  }
  // |F_{k,alpha}(j)| against the defining sum over C_k
  double worst = 0;
  for (int k : {6, 8})
    for (double alpha : {1.0, 2.0, (1 + std::sqrt(5.0)) / 2})
      for (std::int64_t j : {1, 3, 17, 100, 1023, 4095}) {
        const auto C = build_cantor({4, {0, 1}, k});
        const long double N = std::pow(4.0L, k);
        std::complex<long double> acc = 0;
        for (auto c : C) {
          const long double t = -2 * std::numbers::pi_v<long double> * alpha * j * c / N;
          acc += std::complex<long double>(std::cos(t), std::sin(t));
        }
        const double direct = static_cast<double>(std::abs(acc) / N);
        double prod = std::pow(2.0, -k);
        for (int q = 1; q <= k; ++q) prod *= std::abs(std::cos(std::pow(4.0, -q) * std::numbers::pi * alpha * j));
        worst = std::max({worst, std::abs(prod - direct), std::abs(std::abs(kernel_F(4, std::vector<int>{0, 1}, k, alpha, j)) - direct)});
      }
  pass = pass && worst <= kProductTol;
  return {pass, detail + "product_err=" + fmt(worst)};
}

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

Outcome cross_example() {
  double cross = 0;
  Alphabet2 A = line_h(3, 0), B = line_v(3, 0);
  cross = std::max(cross, std::abs(fup_norm2({3, A, B, 2}).r - 1));
  A.push_back({1, 2});
  B.push_back({2, 1});
  B.push_back({1, 1});
  cross = std::max(cross, std::abs(fup_norm2({3, A, B, 2}).r - 1));
  const double point = std::abs(fup_norm2({3, {{0, 0}}, {{0, 0}}, 2}).r - 1.0 / 9);
  Alphabet2 S;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (!(i == 1 && j == 1)) S.push_back({i, j});
  double sier = 0;
  for (int k : {1, 2}) sier = std::max(sier, std::abs(fup_norm2({3, S, S, k}).r - 1));
  return {cross <= kCrossTol && point <= kPointTol && sier <= kSierpinskiTol,
          "cross_err=" + fmt(cross) + " point_err=" + fmt(point) + " sierpinski_err=" + fmt(sier)};
}

Outcome degenerate_pairing() {
  std::mt19937_64 rng(20240131);
  int degenerate = 0;
  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int M = 2 + static_cast<int>(rng() % 2);
    auto draw = [&] {
      Alphabet2 a;
      const int size = 1 + static_cast<int>(rng() % 3);
      while (static_cast<int>(a.size()) < size) {
        const Digit2 d{static_cast<int>(rng() % M), static_cast<int>(rng() % M)};
        if (std::find(a.begin(), a.end(), d) == a.end()) a.push_back(d);
      }
      std::sort(a.begin(), a.end());
      return a;
    };
    const Alphabet2 A = draw(), B = draw();
    if (check_nondegenerate_pairing(A, B).nondegenerate) continue;
    ++degenerate;
    for (int k = 1; k <= 3; ++k) {
      const CantorSpec2D spec{M, A, B, k};
      const double beta = 1 - (spec.delta_A() + spec.delta_B()) / 2;
      worst = std::max(worst, std::abs(fup_norm2(spec).r - std::pow(static_cast<double>(spec.N()), -beta)));
    }
  }
  return {degenerate > 0 && worst <= kDegenerateTol,
          "pairs=50 degenerate=" + std::to_string(degenerate) + " max_err=" + fmt(worst)};
}

Outcome schottky_structure() {
  const SchottkyData d = builtin_schottky("fig-sch1");
  bool pass = validate_schottky(d).ok;
  for (int n = 1; n <= 10; ++n) {
    std::int64_t expect = 2 * d.r;
    for (int i = 1; i < n; ++i) expect *= 2 * d.r - 1;
    pass = pass && word_count(d.r, n) == expect && static_cast<std::int64_t>(refine(d, n).size()) == expect;
  }
  const WordTree t2 = refine(d, 2), t3 = refine(d, 3);
  bool nested = true, disjoint = true;
  std::vector<Interval> ivs;
  for (std::size_t i = 0; i < t3.size(); ++i) {
    const Interval I = t3.interval(i), P = t2.interval(t3.parent(i));
    nested = nested && I.a >= P.a && I.b <= P.b && I.length() > 0;
    ivs.push_back(I);
  }
  std::sort(ivs.begin(), ivs.end(), [](auto x, auto y) { return x.a < y.a; });
  for (std::size_t i = 1; i < ivs.size(); ++i) disjoint = disjoint && ivs[i - 1].b < ivs[i].a;
  pass = pass && t3.size() == 36 && nested && disjoint;
  return {pass, "depth3=" + std::to_string(t3.size()) + " nested=" + std::to_string(nested) + " disjoint=" + std::to_string(disjoint)};
}

Outcome dimension_values() {
  Clock c1;
  const auto a = estimate_dimension(builtin_schottky("fig-sch1"));
  const double t1 = c1.seconds();
  Clock c2;
  const SchottkyData three = builtin_schottky("three-funnel-233");
  const auto b = estimate_dimension(three);
  const double t2 = c2.seconds();
  const bool ok = std::abs(a.delta - 0.31038) <= kDimTol && std::abs(b.delta - 0.46932) <= kDimTol &&
                  validate_schottky(three).ok && t1 < 120 && t2 < 120;
  return {ok, "fig-sch1=" + fmt(a.delta) + " three-funnel-233=" + fmt(b.delta) + " time_s=" + fmt(t1) + "," + fmt(t2)};
}

// (2 pi h)^{-1} |int_X exp(i x y / h) dx| in closed form.
double exact_kernel(const IntervalCover& X, double h, double y) {
  std::complex<long double> acc = 0;
  const long double w = static_cast<long double>(y) / h;
  for (const Interval& I : X.intervals) {
    if (w == 0) {
      acc += I.length();
      continue;
    }
    const std::complex<long double> eb(std::cos(w * I.b), std::sin(w * I.b)), ea(std::cos(w * I.a), std::sin(w * I.a));
    acc += (eb - ea) / std::complex<long double>(0, w);
  }
  return static_cast<double>(std::abs(acc) / (2 * std::numbers::pi_v<long double> * h));
}

Outcome middle_third_kernel() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-20, 20);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const int k = 1 + i % 8;
    const double y = u(rng);
    const double h = std::pow(3.0, -k);
    const double b = exact_kernel(cantor_neighborhood_cover(k), h, y);
    worst = std::max(worst, std::abs(cantor_kernel_KX(k, y) - b) / std::max(1.0, b));
  }
  const WeightedCover wc = cantor_measure(3, {0, 2}, 12);
  std::vector<double> xi;
  for (int m = 0; m <= 6; ++m) xi.push_back(2 * std::numbers::pi * std::pow(3.0, m));
  const auto fs = fourier_transform_measure(wc, xi);
  double lo = INFINITY, hi = 0;
  for (const cplx& v : fs.values) {
    lo = std::min(lo, std::abs(v));
    hi = std::max(hi, std::abs(v));
  }
  return {worst <= kKernelTol && hi - lo <= kNonDecayTol, "kernel_err=" + fmt(worst) + " nondecay_spread=" + fmt(hi - lo)};
}

Outcome fourier_ordering(int threads) {
  const auto grid = uniform_grid(0, 0.1, 100001);
  const auto slope = [&](const WeightedCover& wc) {
    return decay_slope(envelope(fourier_transform_measure(wc, grid, threads), 25), 1e2, 1e4).exponent;
  };
  const double cantor = slope(cantor_measure(3, {0, 2}, 12));
  const SchottkyData d = builtin_schottky("fig-sch1");
  const double delta = estimate_dimension(d).delta;
  const double sch = slope(ps_weights(refine(d, 7), delta));
  return {cantor <= kDecaySplit && sch > kDecaySplit, "middle_third=" + fmt(cantor) + " fig-sch1=" + fmt(sch)};
}

Outcome additive_energy() {
  std::mt19937_64 rng(5);
  bool ok = true;
  for (int trial = 0; trial < 200 && ok; ++trial) {
    const int size = 1 + trial % 64;
    std::uniform_int_distribution<std::int64_t> u(0, 4 * size);
    std::vector<std::int64_t> S;
    for (int i = 0; i < size; ++i) S.push_back(u(rng));
    std::sort(S.begin(), S.end());
    S.erase(std::unique(S.begin(), S.end()), S.end());
    ok = additive_energy_discrete(S) == additive_energy_brute(S);
  }
  for (std::int64_t N = 1; N <= 256 && ok; ++N) {
    std::vector<std::int64_t> z(N);
    for (std::int64_t i = 0; i < N; ++i) z[i] = i;
    ok = additive_energy_discrete(z) == (2 * N * N * N + N) / 3;
  }
  const auto fit = energy_exponent(3, {0, 2}, 4, 9);
  const double target = std::log(4.0 / 3) / std::log(3.0);
  return {ok && std::abs(fit.beta_A - target) <= kEnergyTol,
          "exact_counts=" + std::string(ok ? "ok" : "mismatch") + " beta_A=" + fmt(fit.beta_A) + " target=" + fmt(target)};
}

Outcome ps_band() {
  const SchottkyData d = builtin_schottky("fig-sch1");
  const double delta = estimate_dimension(d).delta;
  const WeightedCover wc = ps_weights(refine(d, 10), delta);
  const double y = wc.midpoints().front();
  std::vector<double> hs;
  for (int i = 0; i <= 12; ++i) hs.push_back(std::pow(10.0, -4 + 0.25 * i));
  const auto curve = ps_additive_energy_curve(wc, y, d.intervals[0], hs);
  std::vector<double> mass;
  bool monotone = true;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    mass.push_back(curve.number(i, "mass"));
    if (i > 0 && mass[i] < mass[i - 1]) monotone = false;
  }
  const double s = loglog_slope(hs, mass);
  const double lo = delta - kBandSlack, hi = delta + std::min(delta, 1 - delta) + kBandSlack;
  return {monotone && s >= lo && s <= hi,
          "slope=" + fmt(s) + " band=[" + fmt(lo) + "," + fmt(hi) + "] monotone=" + std::to_string(monotone)};
}

Outcome covers() {
  const IntervalCover c8 = cantor_interval_cover(3, {0, 2}, 8);
  const double h8 = std::pow(3.0, -8);
  const bool p19 = check_porosity(c8, {0.19, 3 * h8, 1}).pass;
  const bool p45 = check_porosity(c8, {0.45, 3 * h8, 1}).pass;

  const bool ex1 = check_regularity(IntervalCover({{0, 0}}), {1.0}, {0, 1}).pass;
  bool ex4 = true;
  for (double a : {0.3, 1.0, 7.0}) ex4 = ex4 && check_regularity(IntervalCover({{0, a}}), {a}, {1, 2, 0, a}).pass;
  bool ex5 = false;
  const IntervalCover mixed({{0, 0}, {1, 2}});
  for (int d = 0; d <= 10; ++d)
    for (double C : {1.0, 2.0, 5.0, 10.0})
      for (auto w : std::vector<std::vector<double>>{{0.5, 0.5}, {0.1, 0.9}, {0.9, 0.1}})
        ex5 = ex5 || check_regularity(mixed, w, {d / 10.0, C, 0, 1}).pass;

  const int L = 11, depth = 4;
  const auto levels = porous_to_regular_cover(cantor_interval_cover(3, {0, 2}, 10), 0.19, L, depth);
  const IntervalCover Y = levels.back().cover();
  const std::vector<double> w(Y.size(), 1.0 / static_cast<double>(Y.size()));
  const double delta = std::log(L - 1.0) / std::log(static_cast<double>(L));
  const bool reg = check_regularity(Y, w, {delta, kCantorRegularityC, std::pow(L, -depth), 1}).pass;

  const bool pass = p19 && !p45 && ex1 && ex4 && !ex5 && reg;
  return {pass, "porosity_0.19=" + std::to_string(p19) + " porosity_0.45=" + std::to_string(p45) +
                    " examples=" + std::to_string(ex1) + std::to_string(ex4) + std::to_string(ex5) +
                    " porous_to_regular=" + std::to_string(reg)};
}

std::string run_cli(const std::string& args, int& code) {
  const auto out = std::filesystem::temp_directory_path() / "fuplab_acceptance_out";
  const std::string cmd = std::string(FUPLAB_BIN) + " " + args + " >" + out.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const std::vector<std::string> configs{
      "cantor norm --M 3 --A 0,2 --k 5 --schur",
      "cantor exponent --M 4 --A 0,1,3 --k-max 5",
      "cantor witness --M 3 --A 0,2 --k-cap 4",
      "cantor submult --M 3 --A 0,2 --k1 2 --k2 3",
      "cantor scan --M-max 6 --k 3",
      "cantor scan --M-max 5 --k 3 --alpha 1.618033988749895",
      "cantor dilated-curve --M 4 --A 0,1 --k 5 --alpha-step 0.01",
      "cantor2 norm --M 3 --A 0:0,1:0,2:0 --B 0:0,0:1,0:2 --k 2",
      "cantor2 classify --M 3 --A 0:0,1:1,2:2 --B 0:2,1:1,2:0 --k 2",
      "schottky validate --builtin fig-sch1",
      "schottky refine --builtin fig-sch1 --depth 4 --all-levels",
      "schottky dimension --builtin three-funnel-233",
      "schottky three-funnel",
      "measure fourier --builtin fig-sch1 --depth 6 --xi-max 500",
      "measure envelope --cantor-k 8 --xi-max 1000",
      "measure slope --builtin fig-sch1 --depth 5 --xi-max 2000",
      "measure schur-bound --k-max 4",
      "energy discrete --M 3 --A 0,2 --k 8",
      "energy exponent --M 3 --A 0,2",
      "energy schottky --builtin fig-sch1 --depth 9",
      "covers check --cantor-k 6 --nu 0.19",
  };
  int identical = 0;
  std::string bad;
  for (const auto& cfg : configs) {
    int c1 = 0, c8 = 0;
    const std::string a = run_cli("--threads 1 " + cfg, c1);
    const std::string b = run_cli("--threads 8 " + cfg, c8);
    if (c1 == 0 && c8 == 0 && !a.empty() && a == b)
      ++identical;
    else if (bad.empty())
      bad = " first_mismatch=\"" + cfg + "\" exit=" + std::to_string(c1) + "," + std::to_string(c8);
  }
  return {identical == static_cast<int>(configs.size()),
          "configs=" + std::to_string(configs.size()) + " identical=" + std::to_string(identical) + bad};
}

}  // namespace

int main() {
  const int threads = std::max(1, default_threads());
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"unitarity-inversion", unitarity},
      {"trivial-norms", trivial_norms},
      {"hilbert-schmidt-ceiling", hs_ceiling_scan},
      {"strictness-witness", witness},
      {"submultiplicativity", submultiplicativity},
      {"dilated-dip", dilated_dip},
      {"cross-example-2d", cross_example},
      {"degenerate-pairing", degenerate_pairing},
      {"schottky-structure", schottky_structure},
      {"dimension-values", dimension_values},
      {"middle-third-kernel", middle_third_kernel},
      {"fourier-decay-ordering", [&] { return fourier_ordering(threads); }},
      {"additive-energy", additive_energy},
      {"ps-energy-band", ps_band},
      {"covers", covers},
      {"determinism", determinism},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Clock clock;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << " " << o.detail << " wall_s=" << fmt(clock.seconds())
              << std::endl;
  }
  std::cout << (failures ? "FAILED " : "ALL PASSED ") << failures << "/" << criteria.size() << std::endl;
  return std::min(failures, 100);
}
