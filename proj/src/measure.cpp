#include "fup/measure.hpp"

#include "fup/parallel.hpp"

#include <algorithm>
#include <numeric>

namespace fup {

std::vector<double> WeightedCover::midpoints() const {
  std::vector<double> out;
  out.reserve(cover.size());
  for (const Interval& I : cover.intervals) out.push_back(0.5 * (I.a + I.b));
  return out;
}

WeightedCover ps_weights(const WordTree& tree, double delta) {
  if (tree.size() == 0) throw InputError("ps_weights: empty refinement");
  std::vector<std::size_t> order(tree.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return tree.left[i] < tree.left[j]; });
  std::vector<Interval> ivs;
  std::vector<double> w;
  ivs.reserve(order.size());
  w.reserve(order.size());
  for (std::size_t i : order) {
    ivs.push_back(tree.interval(i));
    w.push_back(std::pow(tree.length[i], delta));
  }
  const double total = pairwise_sum(w);
  for (double& x : w) x /= total;
  return {cover_with_rounding(std::move(ivs)), std::move(w), tree.depth, delta};
}

WeightedCover cantor_measure(int M, const std::vector<int>& A, int k) {
  IntervalCover cover = cantor_interval_cover(M, A, k);
  const double w = 1.0 / static_cast<double>(cover.size());
  std::vector<double> weights(cover.size(), w);
  return {std::move(cover), std::move(weights), k, std::log(static_cast<double>(A.size())) / std::log(M)};
}

std::vector<double> uniform_grid(double lo, double step, std::size_t count) {
  std::vector<double> xi(count);
  for (std::size_t i = 0; i < count; ++i) xi[i] = lo + static_cast<double>(i) * step;
  return xi;
}

namespace {

constexpr std::size_t kReseed = 64;

bool is_uniform(const std::vector<double>& xi, double& step) {
  if (xi.size() < 3) return false;
  step = (xi.back() - xi.front()) / static_cast<double>(xi.size() - 1);
  if (!(step > 0)) return false;
  for (std::size_t i = 0; i < xi.size(); ++i) {
    const double expect = xi.front() + static_cast<double>(i) * step;
    if (std::abs(xi[i] - expect) > 1e-12 * std::max(1.0, std::abs(expect))) return false;
  }
  return true;
}

}  // namespace

FourierSamples fourier_transform_measure(const WeightedCover& wc, const std::vector<double>& xi, int threads) {
  if (wc.size() == 0) throw InputError("fourier_transform_measure: empty cover");
  if (wc.weights.size() != wc.cover.size()) throw InputError("weight count does not match interval count");
  const std::vector<double> x = wc.midpoints();
  const std::vector<double>& w = wc.weights;
  const std::size_t V = x.size();

  FourierSamples out;
  out.xi = xi;
  out.values.assign(xi.size(), cplx{});
  double max_len = 0, max_xi = 0;
  for (const Interval& I : wc.cover.intervals) max_len = std::max(max_len, I.length());
  for (double q : xi) max_xi = std::max(max_xi, std::abs(q));
  out.truncated = max_xi * max_len > 0.5;

  double step = 0;
  const bool uniform = is_uniform(xi, step);
  const std::size_t blocks = (xi.size() + kReseed - 1) / kReseed;
  parallel_for(blocks, threads, [&](std::size_t b) {
    const std::size_t i0 = b * kReseed;
    const std::size_t i1 = std::min(xi.size(), i0 + kReseed);
    std::vector<cplx> terms(V), z(V), rot(V);
    if (uniform) {
      for (std::size_t v = 0; v < V; ++v) {
        z[v] = std::polar(1.0, xi[i0] * x[v]);
        rot[v] = std::polar(1.0, step * x[v]);
      }
    }
    for (std::size_t i = i0; i < i1; ++i) {
      if (xi[i] == 0) {
        out.values[i] = 1.0;
      } else {
        for (std::size_t v = 0; v < V; ++v) terms[v] = w[v] * (uniform ? z[v] : std::polar(1.0, xi[i] * x[v]));
        out.values[i] = pairwise_sum(terms);
      }
      if (uniform)
        for (std::size_t v = 0; v < V; ++v) z[v] *= rot[v];
    }
  });
  return out;
}

FourierSamples envelope(const FourierSamples& samples, int W) {
  if (W < 1) throw InputError("envelope window must be >= 1");
  FourierSamples out;
  out.window = W;
  out.truncated = samples.truncated;
  const std::size_t n = samples.values.size();
  for (std::size_t i0 = 0; i0 < n; i0 += static_cast<std::size_t>(W)) {
    const std::size_t i1 = std::min(n, i0 + static_cast<std::size_t>(W));
    std::size_t best = i0;
    for (std::size_t i = i0 + 1; i < i1; ++i)
      if (std::abs(samples.values[i]) > std::abs(samples.values[best])) best = i;
    out.xi.push_back(samples.xi[best]);
    out.values.push_back(std::abs(samples.values[best]));
  }
  return out;
}

DecayFit decay_slope(const FourierSamples& samples, double lo, double hi, int bins_per_decade) {
  if (!(lo > 0 && hi > lo)) throw InputError("decay_slope needs 0 < lo < hi");
  if (bins_per_decade < 1) throw InputError("bins_per_decade must be >= 1");
  const int nb = std::max(1, static_cast<int>(std::lround(std::log10(hi / lo) * bins_per_decade)));
  std::vector<double> best_x(nb, 0.0), best_v(nb, -1.0);
  for (std::size_t i = 0; i < samples.xi.size(); ++i) {
    const double q = samples.xi[i];
    const double v = std::abs(samples.values[i]);
    if (q < lo || q > hi || !(v > 0)) continue;
    int bin = static_cast<int>(std::floor(std::log10(q / lo) * bins_per_decade));
    bin = std::clamp(bin, 0, nb - 1);
    if (v > best_v[bin]) {
      best_v[bin] = v;
      best_x[bin] = q;
    }
  }
  Eigen::MatrixX2d design(nb, 2);
  Eigen::VectorXd rhs(nb);
  int n = 0;
  for (int b = 0; b < nb; ++b) {
    if (best_v[b] <= 0) continue;
    design(n, 0) = std::log(best_x[b]);
    design(n, 1) = 1.0;
    rhs(n) = std::log(best_v[b]);
    ++n;
  }
  if (n < 8) throw InputError("decay_slope: fewer than 8 points in the fit range");
  const auto D = design.topRows(n);
  const auto y = rhs.head(n);
  const Eigen::Vector2d coef = D.colPivHouseholderQr().solve(y);
  DecayFit fit;
  fit.exponent = -coef(0);
  fit.lo = lo;
  fit.hi = hi;
  fit.points = n;
  fit.residual = std::sqrt((D * coef - y).squaredNorm() / n);
  return fit;
}

double cantor_kernel_KX(int k, double y) {
  if (k < 1) throw InputError("cantor_kernel_KX needs k >= 1");
  const double lead = std::ldexp(1.0, k);  // h^{-delta} = 2^k
  const double s = std::abs(y) < 1e-8 ? 1.0 / std::numbers::pi : std::abs(std::sin(2 * y) / (2 * std::numbers::pi * y));
  double prod = 1.0, p3 = 1.0;
  for (int j = 1; j < k; ++j) {
    p3 *= 3.0;
    prod *= std::abs(std::cos(p3 * y));
  }
  return lead * s * prod;
}

double kernel_KX_cover(const IntervalCover& X, double h, double y) {
  if (!(h > 0)) throw InputError("kernel_KX_cover needs h > 0");
  std::vector<cplx> parts;
  parts.reserve(X.size());
  for (const Interval& I : X.intervals) {
    const double len = I.length();
    const double u = 0.5 * len * y / h;
    const double sinc = std::abs(u) < 1e-8 ? 1.0 : std::sin(u) / u;
    parts.push_back(std::polar(len * sinc, 0.5 * (I.a + I.b) * y / h));
  }
  return std::abs(pairwise_sum(parts)) / (2 * std::numbers::pi * h);
}

IntervalCover cantor_neighborhood_cover(int k) {
  const double h = std::pow(3.0, -k);
  return neighborhood(cantor_interval_cover(3, {0, 2}, k), 0.5 * h);
}

SchurBound schur_fup_bound(const IntervalCover& X, double delta, const IntervalCover& Y, double h, double step,
                           int threads) {
  if (!(h > 0)) throw InputError("schur_fup_bound needs h > 0");
  if (!(step > 0)) throw InputError("schur_fup_bound needs a positive quadrature step");
  if (X.empty() || Y.empty()) throw InputError("schur_fup_bound: empty cover");
  double shortest = INFINITY;
  for (const Interval& I : Y.intervals) shortest = std::min(shortest, I.length());
  if (step > shortest) throw InputError("quadrature step exceeds the shortest Y interval");

  std::vector<double> pts, wts;
  for (const Interval& I : Y.intervals) {
    const auto n = static_cast<std::int64_t>(std::ceil(I.length() / step * (1 - 1e-12)));
    const double d = I.length() / static_cast<double>(n);
    for (std::int64_t s = 0; s < n; ++s) {
      pts.push_back(I.a + (static_cast<double>(s) + 0.5) * d);
      wts.push_back(d);
    }
  }
  std::vector<double> row(pts.size());
  parallel_for(pts.size(), threads, [&](std::size_t i) {
    std::vector<double> terms(pts.size());
    for (std::size_t s = 0; s < pts.size(); ++s) terms[s] = wts[s] * kernel_KX_cover(X, h, pts[s] - pts[i]);
    row[i] = pairwise_sum(terms);
  });
  SchurBound out;
  out.bound = *std::max_element(row.begin(), row.end());
  out.baseline = volume(X) * volume(Y) / (2 * std::numbers::pi * h);
  out.basic = std::pow(h, 1 - 2 * delta);
  out.samples = static_cast<std::int64_t>(pts.size());
  return out;
}

}  // namespace fup
