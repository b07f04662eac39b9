#pragma once

#include "fup/common.hpp"
#include "fup/measure.hpp"
#include "fup/table.hpp"

namespace fup {

/// #{(a,b,c,d) in S^4 : a + b = c + d} with integer addition, as
/// sum_s r(s)^2 where r is the self-convolution of the indicator of S.
std::int64_t additive_energy_discrete(const std::vector<std::int64_t>& S);

/// Same count by an O(|S|^3) loop; used for cross-checks.
std::int64_t additive_energy_brute(const std::vector<std::int64_t>& S);

struct EnergyFit {
  double beta_A = 0;  // 3 delta - slope
  double slope = 0;   // d log E / d log N
  double residual = 0;
  double delta = 0;
  std::vector<int> k;
  std::vector<std::int64_t> energy;
};

/// Least-squares fit log E(C_k) = (3 delta - beta_A) log N + c over
/// k = k_min..k_max. Needs at least 3 orders and |A| >= 2.
EnergyFit energy_exponent(int M, const std::vector<int>& A, int k_min, int k_max);

/// gamma_y(x) = (1 + x y) / (y - x); throws InputError at x = y.
double stereographic(double y, double x);

/// mu^4 of |t1 + t2 - t3 - t4| <= h with t = gamma_y(x), over atoms at
/// interval midpoints outside `excluded` (weights renormalized there).
/// Small atom sets are handled exactly through sorted pair sums; larger
/// ones bin t at width h/4 and convolve.
double ps_additive_energy(const WeightedCover& wc, double y, const Interval& excluded, double h);

/// Same statistic on a grid of h. All grid points share the bin width
/// min(h)/4, so the curve is monotone in h. Columns h, mass, h_delta, h_2delta.
ResultTable ps_additive_energy_curve(const WeightedCover& wc, double y, const Interval& excluded,
                                     const std::vector<double>& h_grid);

/// beta = (3/4)(1/2 - delta) + beta_A / 8.
inline double ae_fup_exponent(double delta, double beta_A) { return 0.75 * (0.5 - delta) + beta_A / 8; }

/// Log-log least-squares slope of mass against h.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace fup
