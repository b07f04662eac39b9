#pragma once

#include "fup/common.hpp"
#include "fup/spectral.hpp"
#include "fup/table.hpp"

#include <optional>

namespace fup {

/// Base-M Cantor set of order k with digit alphabet A.
struct CantorSpec1D {
  int M = 3;
  std::vector<int> A{0, 2};
  int k = 1;

  std::int64_t N() const { return checked_pow(M, k); }
  std::int64_t size() const { return checked_pow(static_cast<std::int64_t>(A.size()), k); }
  double delta() const;
  void validate() const;
};

/// Sorted {sum_i a_i M^i : a_i in A}. Position in the result equals the
/// mixed-radix index sum_i idx(a_i) |A|^i.
std::vector<std::int64_t> build_cantor(const CantorSpec1D& spec);

/// log|A| / log M.
double dimension(int M, std::size_t alphabet_size);

std::uint32_t alphabet_mask(std::span<const int> A);
std::vector<int> alphabet_from_mask(std::uint32_t mask);

/// G = 1_C F_{N,alpha} 1_C as an operator on C^{|C|}. For alpha = 1 and
/// k >= 2 application goes through the split C_k = C_{k1} + M^{k1} C_{k2}:
/// a transform along the high digits, a twist, a transform along the low
/// digits. Other cases use direct summation.
class CantorOperator {
 public:
  explicit CantorOperator(const CantorSpec1D& spec, double alpha = 1.0);

  Eigen::Index size() const { return static_cast<Eigen::Index>(set_.size()); }
  const std::vector<std::int64_t>& points() const { return set_; }
  bool factorized() const { return factorized_; }

  VectorXc apply(const VectorXc& x) const;
  VectorXc adjoint_apply(const VectorXc& y) const;
  VectorXc gram_apply(const VectorXc& x) const;
  VectorXc apply_direct(const VectorXc& x) const;
  MatrixXc dense() const;
  /// G*G assembled from the kernel F_{k,alpha} on distinct differences.
  MatrixXc gram_dense() const;

 private:
  CantorSpec1D spec_;
  double alpha_;
  std::int64_t n_;
  std::vector<std::int64_t> set_;
  bool factorized_ = false;
  Eigen::Index n1_ = 0, n2_ = 0;
  MatrixXc g1_, g2_, twist_;
};

struct NormOptions {
  double alpha = 1.0;
  double tol = 1e-10;
  std::int64_t dense_limit = 2048;
  bool with_schur = false;
  std::uint64_t seed = 20240131;
};

/// r_k = ||1_C F_{N,alpha} 1_C||: dense Hermitian eigensolve of G*G up to
/// dense_limit points, restarted Krylov iteration on G*G above it.
NormReport fup_norm(const CantorSpec1D& spec, const NormOptions& opt = {});

struct SubmultiplicativityResult {
  bool pass = false;
  double r1 = 0, r2 = 0, r12 = 0;
};

SubmultiplicativityResult submultiplicativity_check(int M, const std::vector<int>& A, int k1, int k2,
                                                    double tol = 1e-9);

struct ExponentRow {
  int k = 0;
  double r = 0;
  double beta = 0;
};

struct ExponentTable {
  std::vector<ExponentRow> rows;
  double best = 0;
  int best_k = 0;
  bool truncated = false;
};

/// Per-k exponents for k = 1..k_max. Orders whose set exceeds max_points stop
/// the table and set the truncation flag.
ExponentTable fup_exponent(int M, const std::vector<int>& A, int k_max, double tol = 1e-10,
                           std::int64_t max_points = 1 << 14);

struct WitnessResult {
  std::optional<int> k;
  std::vector<ExponentRow> trace;
};

/// Smallest k <= k_cap with r_k < min(1, N^{delta-1/2}) - margin. Norms are
/// computed densely up to dense_limit points, since a 1e-10 margin near 1 is
/// beyond what the iterative path certifies on clustered spectra.
WitnessResult strictness_witness(int M, const std::vector<int>& A, int k_cap, double margin = 1e-10,
                                 std::int64_t dense_limit = 4096);

/// Same test against the N^{delta-1/2} side only.
bool hilbert_schmidt_strict(int M, const std::vector<int>& A, int k, double margin = 1e-10);

/// r~ with r~^2 = max_{j in C} sum_{l in C} |F_{k,alpha}(j - l)|.
double schur_dilated_bound(int M, const std::vector<int>& A, int k, double alpha);

/// Brute-force evaluation of the same max-sum from the defining sum over C_k.
double schur_dilated_bound_direct(int M, const std::vector<int>& A, int k, double alpha);

struct ScanOptions {
  int M_max = 3;
  int k = 0;  // 0: largest k with M^k <= max_N
  std::int64_t max_N = 1 << 12;
  std::int64_t max_points = 1 << 12;
  double alpha = 1.0;
  bool include_trivial = false;
  double tol = 1e-10;
  int threads = 1;
};

/// One row per (M, A), ordered by M then alphabet bitmask. Columns
/// M, alphabet_mask, delta, k, r_k, beta_k.
ResultTable alphabet_scan(const ScanOptions& opt);

/// Columns alpha, schur_bound, beta_tilde.
ResultTable dilated_exponent_curve(int M, const std::vector<int>& A, int k,
                                   const std::vector<double>& alpha_grid, int threads = 1);

}  // namespace fup
