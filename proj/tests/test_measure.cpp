#include "fup/measure.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

using namespace fup;

namespace {

cplx direct_mu(const WeightedCover& wc, double xi) {
  std::complex<long double> acc = 0;
  const auto mids = wc.midpoints();
  for (std::size_t v = 0; v < mids.size(); ++v) {
    const long double t = static_cast<long double>(xi) * mids[v];
    acc += static_cast<long double>(wc.weights[v]) * std::complex<long double>(std::cos(t), std::sin(t));
  }
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

// Composite Simpson rule for (2 pi h)^{-1} |int_X exp(i x y / h) dx|.
double simpson_kernel(const IntervalCover& X, double h, double y, int panels) {
  std::complex<double> acc = 0;
  for (const Interval& I : X.intervals) {
    const double d = I.length() / panels;
    for (int p = 0; p <= panels; ++p) {
      const double wgt = (p == 0 || p == panels) ? 1 : (p % 2 ? 4 : 2);
      const double x = I.a + p * d;
      acc += wgt * std::polar(1.0, x * y / h) * d / 3.0;
    }
  }
  return std::abs(acc) / (2 * std::numbers::pi * h);
}

}  // namespace

TEST_CASE("ps_weights and cantor_measure") {
  const SchottkyData d = builtin_schottky("fig-sch1");
  const WordTree t = refine(d, 4);
  const WeightedCover wc = ps_weights(t, 0.31);
  CHECK(wc.size() == t.size());
  double s = 0;
  for (double w : wc.weights) s += w;
  CHECK(std::abs(s - 1) < 1e-14);
  for (std::size_t i = 1; i < wc.size(); ++i) CHECK(wc.cover.intervals[i - 1].b <= wc.cover.intervals[i].a);
  // weights follow |I|^delta
  const double r = wc.weights[0] / wc.weights[1];
  CHECK(r == doctest::Approx(std::pow(wc.cover.intervals[0].length() / wc.cover.intervals[1].length(), 0.31)));

  const WeightedCover cm = cantor_measure(3, {0, 2}, 5);
  CHECK(cm.size() == 32);
  CHECK(cm.delta == doctest::Approx(std::log(2.0) / std::log(3.0)));
  CHECK(cm.weights[7] == 1.0 / 32);
}

TEST_CASE("fourier_transform_measure") {
  const WeightedCover wc = ps_weights(refine(builtin_schottky("fig-sch1"), 5), 0.31038);
  const auto grid = uniform_grid(-500, 0.37, 2703);
  const FourierSamples fs = fourier_transform_measure(wc, grid, 3);
  double worst = 0;
  for (std::size_t i = 0; i < grid.size(); i += 17) worst = std::max(worst, std::abs(fs.values[i] - direct_mu(wc, grid[i])));
  CHECK(worst < 1e-12);
  for (const cplx& v : fs.values) CHECK(std::abs(v) <= 1 + 1e-12);

  const std::vector<double> xi{0.0, 1.3, -1.3, 77.7, -77.7};
  const FourierSamples sym = fourier_transform_measure(wc, xi);
  CHECK(sym.values[0] == cplx(1, 0));
  CHECK(std::abs(sym.values[1] - std::conj(sym.values[2])) < 1e-15);
  CHECK(std::abs(sym.values[3] - std::conj(sym.values[4])) < 1e-15);
  CHECK(std::abs(sym.values[3] - direct_mu(wc, 77.7)) < 1e-13);

  // thread count does not change values
  const FourierSamples one = fourier_transform_measure(wc, grid, 1);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(one.values[i] == fs.values[i]);

  CHECK(!fs.truncated);
  const FourierSamples far = fourier_transform_measure(wc, {1e6});
  CHECK(far.truncated);
}

TEST_CASE("envelope and decay fit") {
  FourierSamples s;
  for (int i = 1; i <= 20000; ++i) {
    const double xi = 0.5 * i;
    s.xi.push_back(xi);
    s.values.push_back(std::pow(xi, -0.25));
  }
  const DecayFit fit = decay_slope(s, 100, 1e4);
  CHECK(std::abs(fit.exponent - 0.25) < 1e-6);
  CHECK(fit.points >= 8);

  const FourierSamples env = envelope(s, 25);
  CHECK(env.xi.size() == 800);
  CHECK(env.values[0].real() == doctest::Approx(std::pow(0.5, -0.25)));
  CHECK(std::abs(decay_slope(env, 100, 1e4).exponent - 0.25) < 1e-3);

  CHECK_THROWS_AS(decay_slope(s, 100, 110), InputError);
  CHECK_THROWS_AS(envelope(s, 0), InputError);
}

TEST_CASE("middle third kernel: product formula against interval integrals") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(-10, 10);
  double worst = 0;
  for (int k = 1; k <= 8; ++k) {
    const IntervalCover X = cantor_neighborhood_cover(k);
    const double h = std::pow(3.0, -k);
    for (int i = 0; i < 125; ++i) {
      const double y = u(rng);
      const double a = cantor_kernel_KX(k, y), b = kernel_KX_cover(X, h, y);
      worst = std::max(worst, std::abs(a - b) / std::max(1.0, b));
    }
  }
  CHECK(worst < 1e-9);

  const IntervalCover X = cantor_neighborhood_cover(3);
  for (double y : {0.3, 2.0, 7.1})
    CHECK(std::abs(kernel_KX_cover(X, 1.0 / 27, y) - simpson_kernel(X, 1.0 / 27, y, 400)) < 1e-8);
}

TEST_CASE("middle third measure does not decay along 2 pi 3^m") {
  const WeightedCover wc = cantor_measure(3, {0, 2}, 12);
  std::vector<double> xi;
  for (int m = 0; m <= 6; ++m) xi.push_back(2 * std::numbers::pi * std::pow(3.0, m));
  const FourierSamples fs = fourier_transform_measure(wc, xi);
  double lo = 1, hi = 0;
  for (const cplx& v : fs.values) {
    lo = std::min(lo, std::abs(v));
    hi = std::max(hi, std::abs(v));
  }
  CHECK(hi - lo < 2e-3);
  CHECK(lo > 0.35);
}

TEST_CASE("schur_fup_bound dominates the discretized operator norm") {
  const double h = 1e-2;
  const IntervalCover X = cantor_interval_cover(3, {0, 2}, 4);
  const IntervalCover& Y = X;
  const auto b = schur_fup_bound(X, std::log(2.0) / std::log(3.0), Y, h, h / 4, 2);

  const double d = 2.5e-4;
  std::vector<double> xs;
  for (const Interval& I : X.intervals) {
    const int n = static_cast<int>(std::ceil(I.length() / d));
    for (int s = 0; s < n; ++s) xs.push_back(I.a + (s + 0.5) * I.length() / n);
  }
  const double w = X.intervals[0].length() / std::ceil(X.intervals[0].length() / d);
  const auto n = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXcd F(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index l = 0; l < n; ++l) F(j, l) = std::polar(w / std::sqrt(2 * std::numbers::pi * h), -xs[j] * xs[l] / h);
  const Eigen::MatrixXcd G = F.adjoint() * F;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G, Eigen::EigenvaluesOnly);
  const double norm2 = es.eigenvalues().maxCoeff();
  CHECK(norm2 <= 1.05 * b.bound);
  CHECK(b.bound <= b.baseline * (1 + 1e-9));
  CHECK(b.basic == doctest::Approx(std::pow(h, 1 - 2 * std::log(2.0) / std::log(3.0))));
  CHECK_THROWS_AS(schur_fup_bound(X, 0.6, Y, h, 1.0, 1), InputError);
}

TEST_CASE("fourier_fup_exponent") {
  CHECK(fourier_fup_exponent(0.5, 0) == 0);
  CHECK(fourier_fup_exponent(0.3, 0.4) == doctest::Approx(0.3));
}
