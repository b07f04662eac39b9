#pragma once

#include "fup/common.hpp"
#include "fup/covers.hpp"
#include "fup/schottky.hpp"

namespace fup {

/// Finite-level approximation of a fractal measure: one probability weight
/// per cover interval.
struct WeightedCover {
  IntervalCover cover;
  std::vector<double> weights;
  int level = 0;
  double delta = 0;

  std::size_t size() const { return weights.size(); }
  std::vector<double> midpoints() const;
};

/// Weights proportional to |I_w|^delta on the refinement, normalized to 1.
WeightedCover ps_weights(const WordTree& tree, double delta);

/// Uniform weights |A|^{-k} on the level-k cells of a base-M Cantor set.
WeightedCover cantor_measure(int M, const std::vector<int>& A, int k);

struct FourierSamples {
  std::vector<double> xi;
  std::vector<cplx> values;
  int window = 1;
  /// max |xi| * max interval length exceeded 0.5 (midpoint rule unreliable)
  bool truncated = false;
};

/// mu^(xi) = sum_w weight_w exp(i xi x_w) with x_w the interval midpoint.
/// Uniform grids are evaluated by a per-atom rotation recurrence reseeded
/// every 64 samples; others by direct exponentials.
FourierSamples fourier_transform_measure(const WeightedCover& wc, const std::vector<double>& xi, int threads = 1);

/// Arithmetic grid lo, lo + step, ... (count points).
std::vector<double> uniform_grid(double lo, double step, std::size_t count);

/// Block maxima of |mu^| over windows of W samples; xi is taken at the
/// maximizing sample. The last block may be shorter.
FourierSamples envelope(const FourierSamples& samples, int W);

struct DecayFit {
  double exponent = 0;  // minus the fitted log-log slope
  double lo = 0, hi = 0;
  double residual = 0;  // rms of the log residuals
  int points = 0;
};

/// Least-squares slope of log|mu^| against log xi over [lo, hi]. Samples are
/// reduced to the largest value in each of bins_per_decade logarithmic bins
/// before fitting. Throws InputError with fewer than 8 fitted points.
DecayFit decay_slope(const FourierSamples& samples, double lo, double hi, int bins_per_decade = 10);

/// |K_X(y)| for X the h/2-neighborhood of the middle third Cantor set,
/// h = 3^{-k}: h^{-delta} |sin(2y) / (2 pi y)| prod_{j=1}^{k-1} |cos(3^j y)|.
double cantor_kernel_KX(int k, double y);

/// (2 pi h)^{-1} |int_X exp(i x y / h) dx| evaluated exactly as a sum of
/// interval integrals.
double kernel_KX_cover(const IntervalCover& X, double h, double y);

/// The cover X above: intervals [c h - h/2, c h + 3h/2] for c in C_k, merged.
IntervalCover cantor_neighborhood_cover(int k);

struct SchurBound {
  double bound = 0;     // sup_{y'} int_Y |K_X(y - y')| dy
  double baseline = 0;  // (2 pi h)^{-1} vol(X) vol(Y)
  double basic = 0;     // h^{1 - 2 delta}
  std::int64_t samples = 0;
};

/// Composite midpoint quadrature over Y with the given step; the sample
/// points double as the y' candidates. Throws InputError when the step
/// exceeds the shortest Y interval.
SchurBound schur_fup_bound(const IntervalCover& X, double delta, const IntervalCover& Y, double h, double step,
                           int threads = 1);

/// beta = 1/2 - delta + beta_F / 4.
inline double fourier_fup_exponent(double delta, double beta_F) { return 0.5 - delta + beta_F / 4; }

}  // namespace fup
