#pragma once

#include "fup/common.hpp"
#include "fup/schottky.hpp"

#include <optional>

namespace fup {

/// Sorted, non-overlapping closed intervals a_i <= b_i <= a_{i+1}. A
/// zero-length interval is a point.
struct IntervalCover {
  std::vector<Interval> intervals;

  IntervalCover() = default;
  /// Sorts and validates; throws InputError on overlap or a > b.
  explicit IntervalCover(std::vector<Interval> ivs);

  std::size_t size() const { return intervals.size(); }
  bool empty() const { return intervals.empty(); }
  double lo() const { return intervals.front().a; }
  double hi() const { return intervals.back().b; }
};

/// Level-k cells [c/N, (c+1)/N] for c in the base-M Cantor set with digits A.
IntervalCover cantor_interval_cover(int M, const std::vector<int>& A, int k);

/// Sorts and builds a cover, clipping overlaps of at most rel_tol * max(1, |x|)
/// that arise from rounding at deep refinement levels.
IntervalCover cover_with_rounding(std::vector<Interval> ivs, double rel_tol = 1e-12);

/// Level-n Schottky refinement as a cover.
IntervalCover cover_from_tree(const WordTree& tree);

struct RegularityParams {
  double delta = 0;
  double C_R = 1;
  double alpha_min = 0;
  double alpha_max = INFINITY;
};

struct PorosityParams {
  double nu = 0.1;
  double alpha_min = 0;
  double alpha_max = INFINITY;
};

struct PorosityResult {
  bool pass = true;
  bool vacuous = false;
  std::optional<Interval> witness;  // violating I when pass is false
  double witness_gap = 0;           // largest gap found inside the witness
  std::int64_t tested = 0;
};

struct RegularityResult {
  bool pass = true;
  std::optional<Interval> witness;
  double witness_mass = 0;
  std::int64_t tested = 0;
};

/// Tests intervals I with |I| on a geometric grid of ratio 2^{1/density} in
/// [alpha_min, alpha_max], placed at cover endpoints (left- and
/// right-aligned) and at offsets |I|/density apart across the hull. Each
/// must contain a gap of length nu |I| disjoint from the cover.
PorosityResult check_porosity(const IntervalCover& cover, const PorosityParams& params, int density = 8);

/// Largest length of an open piece of [x, y] disjoint from the cover.
double largest_gap(const IntervalCover& cover, double x, double y);

/// Tests intervals centered at cover endpoints and midpoints, |I| on the
/// same scale grid: C_R^{-1} |I|^delta <= mass(I) <= C_R |I|^delta. Each
/// weight is spread uniformly over its interval (an atom for points).
RegularityResult check_regularity(const IntervalCover& cover, const std::vector<double>& weights,
                                  const RegularityParams& params, int density = 8);

/// Mass of [x, y] under uniformly spread weights.
double cover_mass(const IntervalCover& cover, const std::vector<double>& weights, double x, double y);

/// X + [-h, h], merged into disjoint intervals.
IntervalCover neighborhood(const IntervalCover& cover, double h);

/// Cells of a uniform grid on [0,1]: cell i is [i * len, (i + 1) * len].
struct GridLevel {
  int level = 0;
  double cell_length = 1;
  std::vector<std::int64_t> cells;

  IntervalCover cover() const;
};

/// Nested covers Y_1 ⊃ ... ⊃ Y_depth: each surviving cell splits into L
/// children and the lowest-index child disjoint from the input is removed.
/// Throws InputError naming the node when no child can be removed.
std::vector<GridLevel> porous_to_regular_cover(const IntervalCover& cover, double nu, int L, int depth);

double volume(const IntervalCover& cover);
bool check_volume_bound(const IntervalCover& cover, double delta, double h, double C);

/// Scale grid used by the checkers, with the effective bounds substituted
/// for alpha_min = 0 or alpha_max = inf.
std::vector<double> scale_grid(double alpha_min, double alpha_max, int density, double diameter);

}  // namespace fup
