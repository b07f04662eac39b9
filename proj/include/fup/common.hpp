#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fup {

using cplx = std::complex<double>;
using VectorXc = Eigen::VectorXcd;
using MatrixXc = Eigen::MatrixXcd;

inline constexpr long double kTwoPiL = 2.0L * std::numbers::pi_v<long double>;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Error taxonomy. The CLI maps each class onto a distinct exit status.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, VectorXc last_iterate, double last_value,
                   double last_residual)
      : std::runtime_error(what),
        last_iterate_(std::move(last_iterate)),
        last_value_(last_value),
        last_residual_(last_residual) {}

  const VectorXc& last_iterate() const noexcept { return last_iterate_; }
  double last_value() const noexcept { return last_value_; }
  double last_residual() const noexcept { return last_residual_; }

 private:
  VectorXc last_iterate_;
  double last_value_;
  double last_residual_;
};

/// exp(-2*pi*i * phase / modulus), with the phase already reduced to [0, modulus).
/// Evaluated in extended precision so large moduli keep full double accuracy.
inline cplx unit_root(long double phase, long double modulus) {
  const long double t = kTwoPiL * phase / modulus;
  return {static_cast<double>(std::cos(t)), static_cast<double>(-std::sin(t))};
}

/// exp(-2*pi*i * alpha * m / modulus) for an exact integer product m.
inline cplx dilated_root(double alpha, std::int64_t m, std::int64_t modulus) {
  long double phase = static_cast<long double>(alpha) * static_cast<long double>(m);
  phase = std::fmod(phase, static_cast<long double>(modulus));
  if (phase < 0) phase += static_cast<long double>(modulus);
  return unit_root(phase, static_cast<long double>(modulus));
}

/// Pairwise (cascade) summation; deterministic and O(log n) error growth.
template <typename T>
T pairwise_sum(std::span<const T> xs) {
  constexpr std::size_t kLeaf = 32;
  if (xs.size() <= kLeaf) {
    T acc{};
    for (const T& x : xs) acc += x;
    return acc;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.subspan(0, half)) + pairwise_sum(xs.subspan(half));
}

template <typename T>
T pairwise_sum(const std::vector<T>& xs) {
  return pairwise_sum(std::span<const T>(xs.data(), xs.size()));
}

/// Integer power with overflow detection.
inline std::int64_t checked_pow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && r > INT64_MAX / base) throw BudgetError("integer power overflows int64");
    r *= base;
  }
  return r;
}

}  // namespace fup
