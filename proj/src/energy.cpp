#include "fup/energy.hpp"

#include "fup/cantor1d.hpp"
#include "fup/dft.hpp"

#include <algorithm>
#include <bit>

namespace fup {

namespace {

std::vector<std::int64_t> normalized_set(const std::vector<std::int64_t>& S) {
  std::vector<std::int64_t> s(S);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  if (!s.empty() && s.front() < 0) throw InputError("additive energy needs nonnegative integers");
  return s;
}

// Linear self-convolution of a real sequence via a power-of-two FFT.
std::vector<double> self_convolution(const std::vector<double>& h) {
  const std::size_t len = 2 * h.size() - 1;
  const std::size_t n = std::bit_ceil(len);
  std::vector<cplx> buf(n, cplx{});
  for (std::size_t i = 0; i < h.size(); ++i) buf[i] = h[i];
  fft_inplace(buf, false);
  for (auto& z : buf) z *= z;
  fft_inplace(buf, true);
  std::vector<double> out(len);
  for (std::size_t i = 0; i < len; ++i) out[i] = buf[i].real() / static_cast<double>(n);
  return out;
}

constexpr std::int64_t kMaxBins = std::int64_t{1} << 22;
constexpr std::size_t kExactAtoms = 2048;

struct Atoms {
  std::vector<double> t;
  std::vector<double> w;
};

Atoms project_atoms(const WeightedCover& wc, double y, const Interval& excluded) {
  if (!excluded.contains(y)) throw InputError("the point y must lie in the excluded interval");
  if (wc.weights.size() != wc.cover.size()) throw InputError("weight count does not match interval count");
  Atoms at;
  const auto mids = wc.midpoints();
  for (std::size_t v = 0; v < mids.size(); ++v) {
    if (excluded.contains(mids[v])) continue;
    at.t.push_back(stereographic(y, mids[v]));
    at.w.push_back(wc.weights[v]);
  }
  if (at.t.empty()) throw InputError("no atoms outside the excluded interval");
  const double total = pairwise_sum(at.w);
  for (double& x : at.w) x /= total;
  return at;
}

// Sorted pair sums with product weights; band mass by a sliding window.
class ExactPairs {
 public:
  explicit ExactPairs(const Atoms& at) {
    const std::size_t V = at.t.size();
    std::vector<std::pair<double, double>> ps;
    ps.reserve(V * V);
    for (std::size_t u = 0; u < V; ++u)
      for (std::size_t v = 0; v < V; ++v) ps.emplace_back(at.t[u] + at.t[v], at.w[u] * at.w[v]);
    std::sort(ps.begin(), ps.end());
    s_.reserve(ps.size());
    prefix_.assign(ps.size() + 1, 0.0);
    for (std::size_t i = 0; i < ps.size(); ++i) {
      s_.push_back(ps[i].first);
      w_.push_back(ps[i].second);
      prefix_[i + 1] = prefix_[i] + ps[i].second;
    }
  }

  double band(double h) const {
    std::vector<double> terms(s_.size());
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 0; i < s_.size(); ++i) {
      while (s_[lo] < s_[i] - h) ++lo;
      while (hi < s_.size() && s_[hi] <= s_[i] + h) ++hi;
      terms[i] = w_[i] * (prefix_[hi] - prefix_[lo]);
    }
    return pairwise_sum(terms);
  }

 private:
  std::vector<double> s_, w_, prefix_;
};

// Pair-sum distribution on bins of a fixed width.
class BinnedPairs {
 public:
  BinnedPairs(const Atoms& at, double width) : width_(width) {
    const double t0 = *std::min_element(at.t.begin(), at.t.end());
    const double t1 = *std::max_element(at.t.begin(), at.t.end());
    const double span = (t1 - t0) / width;
    if (span + 1 > static_cast<double>(kMaxBins))
      throw BudgetError("pair-sum binning needs more than " + std::to_string(kMaxBins) + " bins");
    const auto nb = static_cast<std::size_t>(span) + 1;
    std::vector<double> hist(nb, 0.0);
    for (std::size_t v = 0; v < at.t.size(); ++v) {
      const auto i = std::min(nb - 1, static_cast<std::size_t>(std::floor((at.t[v] - t0) / width)));
      hist[i] += at.w[v];
    }
    p_ = self_convolution(hist);
    for (double& x : p_) x = std::max(x, 0.0);
    prefix_.assign(p_.size() + 1, 0.0);
    for (std::size_t i = 0; i < p_.size(); ++i) prefix_[i + 1] = prefix_[i] + p_[i];
  }

  double band(double h) const {
    const auto m = static_cast<std::size_t>(std::floor(h / width_ + 1e-9));
    std::vector<double> terms(p_.size());
    for (std::size_t i = 0; i < p_.size(); ++i) {
      const std::size_t lo = i > m ? i - m : 0;
      const std::size_t hi = std::min(p_.size(), i + m + 1);
      terms[i] = p_[i] * (prefix_[hi] - prefix_[lo]);
    }
    return pairwise_sum(terms);
  }

 private:
  double width_;
  std::vector<double> p_, prefix_;
};

}  // namespace

std::int64_t additive_energy_discrete(const std::vector<std::int64_t>& S) {
  const auto s = normalized_set(S);
  if (s.empty()) return 0;
  if (s.back() >= kMaxBins) throw BudgetError("additive energy: set element exceeds the convolution budget");
  std::vector<double> ind(static_cast<std::size_t>(s.back()) + 1, 0.0);
  for (std::int64_t x : s) ind[static_cast<std::size_t>(x)] = 1.0;
  const auto r = self_convolution(ind);
  std::int64_t E = 0;
  for (double v : r) {
    const double rounded = std::round(v);
    if (std::abs(v - rounded) > 0.25) throw ConvergenceError("additive energy: convolution rounding failed", {}, v, std::abs(v - rounded));
    const auto c = static_cast<std::int64_t>(rounded);
    E += c * c;
  }
  return E;
}

std::int64_t additive_energy_brute(const std::vector<std::int64_t>& S) {
  const auto s = normalized_set(S);
  std::int64_t E = 0;
  for (std::int64_t a : s)
    for (std::int64_t b : s)
      for (std::int64_t c : s) {
        const std::int64_t d = a + b - c;
        if (std::binary_search(s.begin(), s.end(), d)) ++E;
      }
  return E;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InputError("loglog_slope needs two equal-length series");
  Eigen::MatrixX2d D(static_cast<Eigen::Index>(x.size()), 2);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0 && y[i] > 0)) throw InputError("loglog_slope needs positive data");
    D(static_cast<Eigen::Index>(i), 0) = std::log(x[i]);
    D(static_cast<Eigen::Index>(i), 1) = 1.0;
    rhs(static_cast<Eigen::Index>(i)) = std::log(y[i]);
  }
  return D.colPivHouseholderQr().solve(rhs)(0);
}

EnergyFit energy_exponent(int M, const std::vector<int>& A, int k_min, int k_max) {
  if (k_max - k_min + 1 < 3) throw InputError("energy_exponent needs at least 3 orders");
  if (k_min < 1) throw InputError("energy_exponent needs k_min >= 1");
  if (A.size() < 2) throw InputError("energy_exponent: alphabet of size 1 gives a degenerate fit");
  EnergyFit fit;
  fit.delta = dimension(M, A.size());
  std::vector<double> logN, logE;
  for (int k = k_min; k <= k_max; ++k) {
    const CantorSpec1D spec{M, A, k};
    spec.validate();
    const std::int64_t E = additive_energy_discrete(build_cantor(spec));
    fit.k.push_back(k);
    fit.energy.push_back(E);
    logN.push_back(k * std::log(static_cast<double>(M)));
    logE.push_back(std::log(static_cast<double>(E)));
  }
  Eigen::MatrixX2d D(static_cast<Eigen::Index>(logN.size()), 2);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(logN.size()));
  for (std::size_t i = 0; i < logN.size(); ++i) {
    D(static_cast<Eigen::Index>(i), 0) = logN[i];
    D(static_cast<Eigen::Index>(i), 1) = 1.0;
    rhs(static_cast<Eigen::Index>(i)) = logE[i];
  }
  const Eigen::Vector2d coef = D.colPivHouseholderQr().solve(rhs);
  fit.slope = coef(0);
  fit.beta_A = 3 * fit.delta - fit.slope;
  fit.residual = std::sqrt((D * coef - rhs).squaredNorm() / static_cast<double>(logN.size()));
  return fit;
}

double stereographic(double y, double x) {
  if (x == y) throw InputError("stereographic projection has a pole at x = y");
  return (1 + x * y) / (y - x);
}

double ps_additive_energy(const WeightedCover& wc, double y, const Interval& excluded, double h) {
  if (!(h > 0)) throw InputError("band width h must be positive");
  const Atoms at = project_atoms(wc, y, excluded);
  if (at.t.size() <= kExactAtoms) return ExactPairs(at).band(h);
  return BinnedPairs(at, h / 4).band(h);
}

ResultTable ps_additive_energy_curve(const WeightedCover& wc, double y, const Interval& excluded,
                                     const std::vector<double>& h_grid) {
  if (h_grid.empty()) throw InputError("empty h grid");
  for (double h : h_grid)
    if (!(h > 0)) throw InputError("band width h must be positive");
  const Atoms at = project_atoms(wc, y, excluded);
  std::vector<double> hs(h_grid);
  std::sort(hs.begin(), hs.end());
  ResultTable table({"h", "mass", "h_delta", "h_2delta"});
  auto emit = [&](auto& pairs) {
    for (double h : hs)
      table.add_row({h, pairs.band(h), std::pow(h, wc.delta), std::pow(h, 2 * wc.delta)});
  };
  if (at.t.size() <= kExactAtoms) {
    ExactPairs pairs(at);
    emit(pairs);
  } else {
    BinnedPairs pairs(at, hs.front() / 4);
    emit(pairs);
  }
  table.meta.emplace_back("delta", format_double(wc.delta));
  table.meta.emplace_back("y", format_double(y));
  table.meta.emplace_back("atoms", std::to_string(at.t.size()));
  return table;
}

}  // namespace fup
