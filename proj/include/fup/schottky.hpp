#pragma once

#include "fup/common.hpp"

#include <limits>

namespace fup {

using Mat2 = Eigen::Matrix2d;

struct Interval {
  double a = 0;
  double b = 0;
  double length() const { return b - a; }
  bool contains(double x) const { return a <= x && x <= b; }
};

/// x -> (a x + b) / (c x + d) on the extended real line; infinity is
/// represented by +inf (either sign is accepted on input).
template <typename Derived>
typename Derived::Scalar mobius_apply(const Eigen::MatrixBase<Derived>& g, typename Derived::Scalar x) {
  using S = typename Derived::Scalar;
  const S inf = std::numeric_limits<S>::infinity();
  const S a = g(0, 0), b = g(0, 1), c = g(1, 0), d = g(1, 1);
  if (std::isinf(x)) return c == S(0) ? inf : a / c;
  const S den = c * x + d;
  if (den == S(0)) return inf;
  return (a * x + b) / den;
}

/// |gamma'(x)| = 1 / (c x + d)^2 for det gamma = 1.
inline double mobius_derivative(const Mat2& g, double x) {
  const double den = g(1, 0) * x + g(1, 1);
  return 1.0 / (den * den);
}

inline Mat2 sl2_inverse(const Mat2& g) {
  Mat2 r;
  r << g(1, 1), -g(0, 1), -g(1, 0), g(0, 0);
  return r;
}

/// Generators gamma_1..gamma_{2r} and intervals I_1..I_{2r}, stored 0-based:
/// the partner of letter w is bar(w) = (w + r) mod 2r.
struct SchottkyData {
  int r = 2;
  std::vector<Interval> intervals;
  std::vector<Mat2> generators;

  int letters() const { return 2 * r; }
  int bar(int w) const { return (w + r) % (2 * r); }
};

struct ValidationReport {
  bool ok = true;
  std::string violation;  // empty when ok
  std::string detail;
};

/// Checks generator count, interval order and disjointness, unit
/// determinants, gamma_bar(w) = gamma_w^{-1}, and the mapping property
/// (endpoints of I_bar(w) go to endpoints of I_w, infinity lands inside I_w).
/// Never throws.
ValidationReport validate_schottky(const SchottkyData& data, double tol = 1e-12);

/// |W_n| = 2r (2r - 1)^{n-1}; throws BudgetError past max_words.
std::int64_t word_count(int r, int n, std::int64_t max_words = std::int64_t{1} << 26);

/// Reduced words of length n in lexicographic order, letters 0-based.
std::vector<std::vector<int>> enumerate_words(const SchottkyData& data, int n,
                                              std::int64_t max_words = std::int64_t{1} << 22);

/// Decodes position i of W_n (lexicographic) into its letters.
std::vector<int> word_at(int r, int n, std::int64_t index);

/// Level-n refinement: I_w = gamma_{w_1} ... gamma_{w_{n-1}} (I_{w_n}) for
/// w in W_n, in lexicographic order. Lengths are transported separately as
/// |I| / |(c a + d)(c b + d)| so deep levels keep relative accuracy.
struct WordTree {
  int r = 2;
  int depth = 1;
  std::vector<double> left;
  std::vector<double> length;

  std::size_t size() const { return left.size(); }
  Interval interval(std::size_t i) const { return {left[i], left[i] + length[i]}; }
  /// Index of the prefix w_1 ... w_{n-1} in the level n-1 tree.
  std::size_t parent(std::size_t i) const { return i / static_cast<std::size_t>(2 * r - 1); }
  std::vector<int> word(std::size_t i) const { return word_at(r, depth, static_cast<std::int64_t>(i)); }
  double total_length() const;
  double max_length() const;
};

WordTree refine(const SchottkyData& data, int n, std::int64_t max_words = std::int64_t{1} << 26);

/// One level deeper than `tree`.
WordTree refine_next(const SchottkyData& data, const WordTree& tree);

struct DimensionLevel {
  int n = 0;
  double delta = 0;
  std::int64_t words = 0;
  double max_length = 0;
  double total_length = 0;
};

struct DimensionEstimate {
  double delta = 0;
  bool converged = false;
  int level = 0;
  std::vector<DimensionLevel> levels;
};

/// Ratio (pressure) estimate: delta_n solves sum_{W_n} |I_w|^s = sum_{W_{n-1}} |I_w|^s.
/// Stops at the first n with |delta_n - delta_{n-1}| < tol.
DimensionEstimate estimate_dimension(const SchottkyData& data, int n_max = 14, double tol = 5e-4);

/// Root in (0, 1) of sum_{i} l1_i^s = sum_i l0_i^s by bisection to 1e-12.
double pressure_root(const std::vector<double>& finer, const std::vector<double>& coarser);

/// Conjugates generators and intervals by the Mobius map t (normalized to
/// det 1). Throws InputError if t sends a point of some interval to infinity.
SchottkyData conjugate(const SchottkyData& data, const Mat2& t);

/// Hyperbolic element with translation length l, repelling fixed point p and
/// attracting fixed point q.
Mat2 hyperbolic(double l, double p, double q);

/// Two-generator Schottky data for the pair of pants with neck lengths
/// (l1, l2, l3): |tr gamma_1| = 2 cosh(l1/2), |tr gamma_2| = 2 cosh(l2/2),
/// |tr gamma_1 gamma_2^{-1}| = 2 cosh(l3/2).
SchottkyData three_funnel_schottky(double l1, double l2, double l3);

/// Builtin datasets: "fig-sch1" and "three-funnel-233".
SchottkyData builtin_schottky(const std::string& name);
std::vector<std::string> builtin_schottky_names();

}  // namespace fup
