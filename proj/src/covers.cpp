#include "fup/covers.hpp"

#include "fup/cantor1d.hpp"

#include <algorithm>
#include <sstream>

namespace fup {

IntervalCover::IntervalCover(std::vector<Interval> ivs) : intervals(std::move(ivs)) {
  for (const Interval& iv : intervals) {
    if (!std::isfinite(iv.a) || !std::isfinite(iv.b) || iv.a > iv.b)
      throw InputError("interval [" + std::to_string(iv.a) + ", " + std::to_string(iv.b) + "] is not valid");
  }
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& x, const Interval& y) { return x.a < y.a || (x.a == y.a && x.b < y.b); });
  for (std::size_t i = 1; i < intervals.size(); ++i) {
    if (intervals[i].a < intervals[i - 1].b)
      throw InputError("cover intervals " + std::to_string(i - 1) + " and " + std::to_string(i) + " overlap");
  }
}

IntervalCover cantor_interval_cover(int M, const std::vector<int>& A, int k) {
  const CantorSpec1D spec{M, A, k};
  const auto pts = build_cantor(spec);
  const double N = static_cast<double>(spec.N());
  std::vector<Interval> ivs;
  ivs.reserve(pts.size());
  for (std::int64_t c : pts) ivs.push_back({static_cast<double>(c) / N, static_cast<double>(c + 1) / N});
  return IntervalCover(std::move(ivs));
}

IntervalCover cover_with_rounding(std::vector<Interval> ivs, double rel_tol) {
  std::sort(ivs.begin(), ivs.end(), [](const Interval& x, const Interval& y) { return x.a < y.a; });
  for (std::size_t i = 1; i < ivs.size(); ++i) {
    const double overlap = ivs[i - 1].b - ivs[i].a;
    if (overlap > 0 && overlap <= rel_tol * std::max(1.0, std::abs(ivs[i].a))) ivs[i - 1].b = ivs[i].a;
  }
  return IntervalCover(std::move(ivs));
}

IntervalCover cover_from_tree(const WordTree& tree) {
  std::vector<Interval> ivs;
  ivs.reserve(tree.size());
  for (std::size_t i = 0; i < tree.size(); ++i) ivs.push_back(tree.interval(i));
  return cover_with_rounding(std::move(ivs));
}

std::vector<double> scale_grid(double alpha_min, double alpha_max, int density, double diameter) {
  if (density < 1) throw InputError("scale grid density must be >= 1");
  if (!(alpha_min >= 0) || !(alpha_max >= alpha_min)) throw InputError("need 0 <= alpha_min <= alpha_max");
  const double unit = diameter > 0 ? diameter : 1.0;
  const double lo = alpha_min > 0 ? alpha_min : 1e-12 * unit;
  const double hi = std::isfinite(alpha_max) ? alpha_max : 1e12 * unit;
  std::vector<double> out;
  if (hi < lo) return out;
  const double ratio = std::exp2(1.0 / density);
  const auto steps = static_cast<std::int64_t>(std::floor(std::log2(hi / lo) * density + 1e-9));
  for (std::int64_t j = 0; j <= steps; ++j) out.push_back(lo * std::pow(ratio, static_cast<double>(j)));
  if (out.back() < hi * (1 - 1e-12)) out.push_back(hi);
  return out;
}

namespace {

// Complement of the cover as open gaps G_0 = (-inf, a_0), G_j = (b_{j-1}, a_j),
// G_n = (b_{n-1}, inf); interior gap lengths answered by a sparse table.
class GapIndex {
 public:
  explicit GapIndex(const IntervalCover& cover) : iv_(cover.intervals) {
    const std::size_t n = iv_.size();
    a_.reserve(n);
    b_.reserve(n);
    for (const Interval& x : iv_) {
      a_.push_back(x.a);
      b_.push_back(x.b);
    }
    std::vector<double> len(n + 1, 0.0);
    for (std::size_t j = 1; j < n; ++j) len[j] = a_[j] - b_[j - 1];
    table_.push_back(std::move(len));
    for (std::size_t w = 1; 2 * w <= n + 1; w *= 2) {
      const auto& prev = table_.back();
      std::vector<double> next(n + 1, 0.0);
      for (std::size_t j = 0; j + 2 * w <= n + 1; ++j) next[j] = std::max(prev[j], prev[j + w]);
      table_.push_back(std::move(next));
    }
  }

  double gap_left(std::size_t j) const { return j == 0 ? -INFINITY : b_[j - 1]; }
  double gap_right(std::size_t j) const { return j == iv_.size() ? INFINITY : a_[j]; }

  double largest(double x, double y) const {
    if (iv_.empty()) return y - x;
    // gaps whose right end exceeds x and whose left end is below y
    const std::size_t p = static_cast<std::size_t>(std::upper_bound(a_.begin(), a_.end(), x) - a_.begin());
    const std::size_t q = static_cast<std::size_t>(std::lower_bound(b_.begin(), b_.end(), y) - b_.begin());
    if (p > q) return 0.0;
    auto clipped = [&](std::size_t j) {
      return std::max(0.0, std::min(gap_right(j), y) - std::max(gap_left(j), x));
    };
    double best = std::max(clipped(p), clipped(q));
    if (q > p + 1) best = std::max(best, range_max(p + 1, q - 1));
    return best;
  }

 private:
  double range_max(std::size_t lo, std::size_t hi) const {
    const std::size_t span = hi - lo + 1;
    std::size_t level = 0;
    while ((std::size_t{2} << level) <= span) ++level;
    const std::size_t w = std::size_t{1} << level;
    return std::max(table_[level][lo], table_[level][hi + 1 - w]);
  }

  const std::vector<Interval>& iv_;
  std::vector<double> a_, b_;
  std::vector<std::vector<double>> table_;
};

double diameter(const IntervalCover& cover) { return cover.empty() ? 0.0 : cover.hi() - cover.lo(); }

constexpr std::int64_t kMaxOffsetsPerScale = 1 << 14;
constexpr double kRelTol = 1e-9;

}  // namespace

double largest_gap(const IntervalCover& cover, double x, double y) {
  if (y < x) throw InputError("largest_gap needs x <= y");
  return GapIndex(cover).largest(x, y);
}

PorosityResult check_porosity(const IntervalCover& cover, const PorosityParams& params, int density) {
  if (!(params.nu > 0 && params.nu < 1)) throw InputError("porosity nu must lie in (0, 1)");
  PorosityResult res;
  if (cover.empty()) {
    res.vacuous = true;
    return res;
  }
  const GapIndex gaps(cover);
  const double lo = cover.lo(), hi = cover.hi();
  for (double L : scale_grid(params.alpha_min, params.alpha_max, density, diameter(cover))) {
    const double need = params.nu * L;
    auto test = [&](double x) {
      ++res.tested;
      const double g = gaps.largest(x, x + L);
      if (g < need * (1 - kRelTol)) {
        res.pass = false;
        res.witness = Interval{x, x + L};
        res.witness_gap = g;
        return false;
      }
      return true;
    };
    for (const Interval& iv : cover.intervals) {
      for (double x : {iv.a, iv.b, iv.a - L, iv.b - L})
        if (!test(x)) return res;
    }
    const double step = L / density;
    const double span = hi - lo + L;
    if (span / step <= static_cast<double>(kMaxOffsetsPerScale)) {
      const auto count = static_cast<std::int64_t>(std::ceil(span / step));
      for (std::int64_t j = 0; j <= count; ++j)
        if (!test(lo - L + static_cast<double>(j) * step)) return res;
    }
  }
  return res;
}

namespace {

// Mass of [c - r, c + r] with each weight spread uniformly over its interval.
// Offsets are taken relative to c so intervals centered at cover points keep
// full relative accuracy at small r.
class MassIndex {
 public:
  MassIndex(const IntervalCover& cover, const std::vector<double>& weights) : iv_(cover.intervals), w_(weights) {
    if (weights.size() != cover.size()) throw InputError("weight count does not match interval count");
    prefix_.assign(w_.size() + 1, 0.0);
    for (std::size_t i = 0; i < w_.size(); ++i) prefix_[i + 1] = prefix_[i] + w_[i];
  }

  double centered(double c, double r) const {
    const double x = c - r, y = c + r;
    const auto first = std::lower_bound(iv_.begin(), iv_.end(), x, [](const Interval& I, double v) { return I.b < v; });
    const auto last = std::upper_bound(iv_.begin(), iv_.end(), y, [](double v, const Interval& I) { return v < I.a; });
    if (first >= last) return 0.0;
    auto part = [&](std::size_t i) {
      const double lo = iv_[i].a - c, hi = iv_[i].b - c;
      const double len = iv_[i].length();
      if (len == 0 || (lo >= -r && hi <= r)) return w_[i];
      return w_[i] * std::max(0.0, std::min(hi, r) - std::max(lo, -r)) / len;
    };
    const std::size_t i0 = static_cast<std::size_t>(first - iv_.begin());
    const std::size_t i1 = static_cast<std::size_t>(last - iv_.begin()) - 1;
    if (i0 == i1) return part(i0);
    return part(i0) + part(i1) + (prefix_[i1] - prefix_[i0 + 1]);
  }

 private:
  const std::vector<Interval>& iv_;
  const std::vector<double>& w_;
  std::vector<double> prefix_;
};

}  // namespace

double cover_mass(const IntervalCover& cover, const std::vector<double>& weights, double x, double y) {
  if (y < x) throw InputError("cover_mass needs x <= y");
  return MassIndex(cover, weights).centered(0.5 * (x + y), 0.5 * (y - x));
}

RegularityResult check_regularity(const IntervalCover& cover, const std::vector<double>& weights,
                                  const RegularityParams& params, int density) {
  if (!(params.delta >= 0 && params.delta <= 1)) throw InputError("regularity delta must lie in [0, 1]");
  if (!(params.C_R >= 1)) throw InputError("regularity constant C_R must be >= 1");
  for (double w : weights)
    if (!(w >= 0)) throw InputError("weights must be nonnegative");
  const MassIndex index(cover, weights);
  RegularityResult res;
  if (cover.empty()) return res;

  std::vector<double> centers;
  centers.reserve(3 * cover.size());
  for (const Interval& I : cover.intervals) {
    centers.push_back(I.a);
    if (I.b > I.a) {
      centers.push_back(0.5 * (I.a + I.b));
      centers.push_back(I.b);
    }
  }
  for (double L : scale_grid(params.alpha_min, params.alpha_max, density, diameter(cover))) {
    const double target = std::pow(L, params.delta);
    const double lower = target / params.C_R * (1 - kRelTol);
    const double upper = target * params.C_R * (1 + kRelTol);
    for (double c : centers) {
      ++res.tested;
      const double m = index.centered(c, 0.5 * L);
      if (m < lower || m > upper) {
        res.pass = false;
        res.witness = Interval{c - 0.5 * L, c + 0.5 * L};
        res.witness_mass = m;
        return res;
      }
    }
  }
  return res;
}

IntervalCover neighborhood(const IntervalCover& cover, double h) {
  if (!(h > 0)) throw InputError("neighborhood radius must be positive");
  std::vector<Interval> out;
  for (const Interval& I : cover.intervals) {
    const Interval grown{I.a - h, I.b + h};
    if (!out.empty() && grown.a <= out.back().b)
      out.back().b = std::max(out.back().b, grown.b);
    else
      out.push_back(grown);
  }
  return IntervalCover(std::move(out));
}

IntervalCover GridLevel::cover() const {
  std::vector<Interval> ivs;
  ivs.reserve(cells.size());
  for (std::int64_t c : cells) {
    ivs.push_back({static_cast<double>(c) * cell_length, static_cast<double>(c + 1) * cell_length});
  }
  return IntervalCover(std::move(ivs));
}

std::vector<GridLevel> porous_to_regular_cover(const IntervalCover& cover, double nu, int L, int depth) {
  if (!(nu > 0 && nu < 1)) throw InputError("porosity nu must lie in (0, 1)");
  if (L < 2 || !(L > 2.0 / nu)) throw InputError("need L > 2/nu");
  if (depth < 1) throw InputError("depth must be >= 1");
  if (!cover.empty() && (cover.lo() < 0 || cover.hi() > 1)) throw InputError("cover must lie in [0, 1]");
  const std::int64_t budget = std::int64_t{1} << 24;
  const auto& iv = cover.intervals;
  auto hits = [&](double x0, double x1) {
    const auto it = std::lower_bound(iv.begin(), iv.end(), x0, [](const Interval& I, double v) { return I.b < v; });
    return it != iv.end() && it->a <= x1;
  };

  std::vector<GridLevel> levels;
  GridLevel cur{0, 1.0, {0}};
  for (int j = 1; j <= depth; ++j) {
    if (static_cast<double>(cur.cells.size()) * (L - 1) > static_cast<double>(budget))
      throw BudgetError("porous_to_regular_cover: level " + std::to_string(j) + " exceeds cell budget");
    GridLevel next{j, cur.cell_length / L, {}};
    next.cells.reserve(cur.cells.size() * static_cast<std::size_t>(L - 1));
    for (std::int64_t parent : cur.cells) {
      int removed = -1;
      for (int c = 0; c < L && removed < 0; ++c) {
        const std::int64_t idx = parent * L + c;
        if (!hits(static_cast<double>(idx) * next.cell_length, static_cast<double>(idx + 1) * next.cell_length))
          removed = c;
      }
      if (removed < 0) {
        std::ostringstream msg;
        msg << "no removable child at level " << j - 1 << " cell " << parent << " ["
            << static_cast<double>(parent) * cur.cell_length << ", "
            << static_cast<double>(parent + 1) * cur.cell_length << "]";
        throw InputError(msg.str());
      }
      for (int c = 0; c < L; ++c)
        if (c != removed) next.cells.push_back(parent * L + c);
    }
    levels.push_back(next);
    cur = std::move(next);
  }
  return levels;
}

double volume(const IntervalCover& cover) {
  std::vector<double> lens;
  lens.reserve(cover.size());
  for (const Interval& I : cover.intervals) lens.push_back(I.length());
  return pairwise_sum(lens);
}

bool check_volume_bound(const IntervalCover& cover, double delta, double h, double C) {
  return volume(cover) <= C * std::pow(h, 1 - delta) * (1 + 1e-12);
}

}  // namespace fup
