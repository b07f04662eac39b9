#include "fup/cantor1d.hpp"

#include "fup/dft.hpp"
#include "fup/parallel.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace fup {

double CantorSpec1D::delta() const { return dimension(M, A.size()); }

void CantorSpec1D::validate() const {
  if (M < 2) throw InputError("base M must be >= 2");
  if (k < 1) throw InputError("order k must be >= 1");
  if (A.empty()) throw InputError("alphabet must be nonempty");
  std::vector<int> s = A;
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw InputError("alphabet has repeated digits");
  if (s.front() < 0 || s.back() >= M) throw InputError("alphabet digit outside {0..M-1}");
  (void)N();
}

double dimension(int M, std::size_t alphabet_size) {
  if (M < 2 || alphabet_size < 1 || alphabet_size > static_cast<std::size_t>(M))
    throw InputError("dimension needs 1 <= |A| <= M");
  return std::log(static_cast<double>(alphabet_size)) / std::log(static_cast<double>(M));
}

std::uint32_t alphabet_mask(std::span<const int> A) {
  std::uint32_t m = 0;
  for (int a : A) m |= 1u << a;
  return m;
}

std::vector<int> alphabet_from_mask(std::uint32_t mask) {
  std::vector<int> A;
  for (int a = 0; a < 32; ++a)
    if (mask >> a & 1u) A.push_back(a);
  return A;
}

std::vector<std::int64_t> build_cantor(const CantorSpec1D& spec) {
  spec.validate();
  if (spec.size() > (std::int64_t{1} << 26)) throw BudgetError("Cantor set exceeds 2^26 points");
  std::vector<int> digits = spec.A;
  std::sort(digits.begin(), digits.end());
  std::vector<std::int64_t> set{0};
  std::int64_t scale = 1;
  // Digit i is most significant at the end; building from the low digit up
  // with the new digit as the outer loop keeps the output sorted.
  for (int i = 0; i < spec.k; ++i) {
    std::vector<std::int64_t> next;
    next.reserve(set.size() * digits.size());
    for (int a : digits)
      for (std::int64_t c : set) next.push_back(c + a * scale);
    set.swap(next);
    scale *= spec.M;
  }
  return set;
}

namespace {

MatrixXc cantor_matrix(const std::vector<std::int64_t>& c, std::int64_t n, double alpha) {
  const auto m = static_cast<Eigen::Index>(c.size());
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  MatrixXc g(m, m);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index l = j; l < m; ++l) {
      const std::int64_t prod = c[j] * c[l];
      const cplx z = alpha == 1.0 ? dilated_root(1.0, prod % n, n) : dilated_root(alpha, prod, n);
      g(j, l) = g(l, j) = z * s;
    }
  return g;
}

// Sorted distinct values of |a - b| over a, b in c.
std::vector<std::int64_t> distinct_differences(const std::vector<std::int64_t>& c) {
  std::vector<std::int64_t> diffs;
  diffs.reserve(c.size() * c.size());
  for (std::int64_t a : c)
    for (std::int64_t b : c)
      if (a >= b) diffs.push_back(a - b);
  std::sort(diffs.begin(), diffs.end());
  diffs.erase(std::unique(diffs.begin(), diffs.end()), diffs.end());
  return diffs;
}

std::size_t diff_index(const std::vector<std::int64_t>& diffs, std::int64_t d) {
  return static_cast<std::size_t>(std::lower_bound(diffs.begin(), diffs.end(), d) - diffs.begin());
}

}  // namespace

CantorOperator::CantorOperator(const CantorSpec1D& spec, double alpha)
    : spec_(spec), alpha_(alpha), n_(spec.N()), set_(build_cantor(spec)) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw InputError("dilation must be finite and >= 0");
  if (alpha != 1.0 || spec.k < 2) return;
  factorized_ = true;
  const int k1 = spec.k / 2;
  const int k2 = spec.k - k1;
  const auto c1 = build_cantor({spec.M, spec.A, k1});
  const auto c2 = build_cantor({spec.M, spec.A, k2});
  n1_ = static_cast<Eigen::Index>(c1.size());
  n2_ = static_cast<Eigen::Index>(c2.size());
  g1_ = cantor_matrix(c1, checked_pow(spec.M, k1), 1.0);
  g2_ = cantor_matrix(c2, checked_pow(spec.M, k2), 1.0);
  twist_.resize(n1_, n2_);
  for (Eigen::Index a = 0; a < n1_; ++a)
    for (Eigen::Index q = 0; q < n2_; ++q) twist_(a, q) = dilated_root(1.0, (c1[a] * c2[q]) % n_, n_);
}

VectorXc CantorOperator::apply(const VectorXc& x) const {
  if (x.size() != size()) throw InputError("vector length does not match |C_k|");
  if (!factorized_) return apply_direct(x);
  // x(a + M^{k1} b) -> U(a, b); output index q + M^{k2} p is read from V(p, q).
  Eigen::Map<const MatrixXc> u(x.data(), n1_, n2_);
  MatrixXc w = u * g2_;
  w.array() *= twist_.array();
  const MatrixXc v = g1_ * w;
  const MatrixXc vt = v.transpose();
  return Eigen::Map<const VectorXc>(vt.data(), vt.size());
}

VectorXc CantorOperator::adjoint_apply(const VectorXc& y) const {
  // G is symmetric, so G* y = conj(G conj(y)).
  return apply(y.conjugate()).conjugate();
}

VectorXc CantorOperator::gram_apply(const VectorXc& x) const { return adjoint_apply(apply(x)); }

VectorXc CantorOperator::apply_direct(const VectorXc& x) const {
  if (x.size() != size()) throw InputError("vector length does not match |C_k|");
  const Eigen::Index m = size();
  const double s = 1.0 / std::sqrt(static_cast<double>(n_));
  VectorXc out(m);
  std::vector<cplx> terms(static_cast<std::size_t>(m));
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index l = 0; l < m; ++l) {
      const std::int64_t prod = set_[j] * set_[l];
      const cplx z = alpha_ == 1.0 ? dilated_root(1.0, prod % n_, n_) : dilated_root(alpha_, prod, n_);
      terms[static_cast<std::size_t>(l)] = z * x[l];
    }
    out[j] = pairwise_sum(terms) * s;
  }
  return out;
}

MatrixXc CantorOperator::dense() const { return cantor_matrix(set_, n_, alpha_); }

MatrixXc CantorOperator::gram_dense() const {
  // (G*G)(l, l') = F_{k,alpha}(c_l' - c_l), and F(-d) = conj F(d).
  const auto diffs = distinct_differences(set_);
  std::vector<cplx> f(diffs.size());
  for (std::size_t i = 0; i < diffs.size(); ++i) f[i] = kernel_F(spec_.M, spec_.A, spec_.k, alpha_, diffs[i]);
  const Eigen::Index m = size();
  MatrixXc gram(m, m);
  for (Eigen::Index l = 0; l < m; ++l)
    for (Eigen::Index lp = l; lp < m; ++lp) {
      const cplx z = f[diff_index(diffs, set_[lp] - set_[l])];
      gram(l, lp) = z;
      gram(lp, l) = std::conj(z);
    }
  return gram;
}

NormReport fup_norm(const CantorSpec1D& spec, const NormOptions& opt) {
  spec.validate();
  if (!(opt.tol > 0)) throw InputError("tolerance must be positive");
  CantorOperator op(spec, opt.alpha);
  NormReport rep;
  if (op.size() <= opt.dense_limit) {
    rep.r = std::sqrt(top_eigenvalue(op.gram_dense()));
    rep.method = "dense-svd";
  } else {
    const auto pr = krylov_norm([&](const VectorXc& x) { return op.gram_apply(x); }, op.size(),
                                {.tol = opt.tol, .seed = opt.seed});
    rep.r = pr.norm;
    rep.method = "krylov";
    rep.iterations = pr.iterations;
    rep.residual = pr.residual;
  }
  rep.beta = -std::log(rep.r) / (spec.k * std::log(static_cast<double>(spec.M))) + 0.0;
  if (opt.with_schur) rep.schur_bound = schur_dilated_bound(spec.M, spec.A, spec.k, opt.alpha);
  return rep;
}

SubmultiplicativityResult submultiplicativity_check(int M, const std::vector<int>& A, int k1, int k2,
                                                    double tol) {
  SubmultiplicativityResult res;
  res.r1 = fup_norm({M, A, k1}).r;
  res.r2 = fup_norm({M, A, k2}).r;
  res.r12 = fup_norm({M, A, k1 + k2}).r;
  res.pass = res.r12 <= res.r1 * res.r2 + tol;
  return res;
}

ExponentTable fup_exponent(int M, const std::vector<int>& A, int k_max, double tol,
                           std::int64_t max_points) {
  if (k_max < 1) throw InputError("k_max must be >= 1");
  ExponentTable t;
  t.best = -INFINITY;
  for (int k = 1; k <= k_max; ++k) {
    const CantorSpec1D spec{M, A, k};
    spec.validate();
    if (spec.size() > max_points) {
      t.truncated = true;
      break;
    }
    const auto rep = fup_norm(spec, {.tol = tol});
    t.rows.push_back({k, rep.r, rep.beta});
    if (rep.beta > t.best) {
      t.best = rep.beta;
      t.best_k = k;
    }
  }
  if (t.rows.empty()) t.best = 0;
  return t;
}

WitnessResult strictness_witness(int M, const std::vector<int>& A, int k_cap, double margin,
                                 std::int64_t dense_limit) {
  WitnessResult w;
  const double delta = dimension(M, A.size());
  if (!(delta > 0 && delta < 1)) throw InputError("strictness witness needs 0 < delta < 1");
  for (int k = 1; k <= k_cap; ++k) {
    const CantorSpec1D spec{M, A, k};
    const auto rep = fup_norm(spec, {.dense_limit = dense_limit});
    w.trace.push_back({k, rep.r, rep.beta});
    const double hs = std::pow(static_cast<double>(spec.N()), delta - 0.5);
    if (rep.r < std::min(1.0, hs) - margin) {
      w.k = k;
      break;
    }
  }
  return w;
}

bool hilbert_schmidt_strict(int M, const std::vector<int>& A, int k, double margin) {
  const CantorSpec1D spec{M, A, k};
  const double hs = std::pow(static_cast<double>(spec.N()), spec.delta() - 0.5);
  return fup_norm(spec).r < hs - margin;
}

namespace {

double schur_from_kernel(const std::vector<std::int64_t>& c, const auto& kernel_abs) {
  const auto diffs = distinct_differences(c);
  std::vector<double> vals(diffs.size());
  for (std::size_t i = 0; i < diffs.size(); ++i) vals[i] = kernel_abs(diffs[i]);
  auto lookup = [&](std::int64_t d) { return vals[diff_index(diffs, d)]; };
  double best = 0;
  std::vector<double> row(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) {
    for (std::size_t l = 0; l < c.size(); ++l) row[l] = lookup(c[j] >= c[l] ? c[j] - c[l] : c[l] - c[j]);
    best = std::max(best, pairwise_sum(row));
  }
  return std::sqrt(best);
}

}  // namespace

double schur_dilated_bound(int M, const std::vector<int>& A, int k, double alpha) {
  const CantorSpec1D spec{M, A, k};
  const auto c = build_cantor(spec);
  return schur_from_kernel(c, [&](std::int64_t d) { return std::abs(kernel_F(M, A, k, alpha, d)); });
}

double schur_dilated_bound_direct(int M, const std::vector<int>& A, int k, double alpha) {
  const CantorSpec1D spec{M, A, k};
  const auto c = build_cantor(spec);
  const std::int64_t n = spec.N();
  const auto m = c.size();
  double best = 0;
  for (std::size_t j = 0; j < m; ++j) {
    double row = 0;
    for (std::size_t l = 0; l < m; ++l) {
      const std::int64_t d = c[j] - c[l];
      cplx f = 0;
      for (std::int64_t r : c) f += dilated_root(alpha, r * d, n);
      row += std::abs(f) / static_cast<double>(n);
    }
    best = std::max(best, row);
  }
  return std::sqrt(best);
}

ResultTable alphabet_scan(const ScanOptions& opt) {
  if (opt.M_max < 2 || opt.M_max > 16) throw InputError("M_max must be in [2, 16]");
  struct Job {
    int M;
    std::uint32_t mask;
    int k;
  };
  std::vector<Job> jobs;
  bool truncated = false;
  for (int M = 2; M <= opt.M_max; ++M) {
    int k = opt.k;
    if (k == 0) {
      k = 1;
      while (checked_pow(M, k + 1) <= opt.max_N) ++k;
    }
    if (k < 1) throw InputError("order k must be >= 1");
    for (std::uint32_t mask = 1; mask < (1u << M); ++mask) {
      const int size = std::popcount(mask);
      if (!opt.include_trivial && (size == 1 || size == M)) continue;
      if (checked_pow(M, k) > opt.max_N || checked_pow(size, k) > opt.max_points) {
        truncated = true;
        continue;
      }
      jobs.push_back({M, mask, k});
    }
  }
  std::vector<NormReport> reports(jobs.size());
  parallel_for(jobs.size(), opt.threads, [&](std::size_t i) {
    const auto& j = jobs[i];
    reports[i] = fup_norm({j.M, alphabet_from_mask(j.mask), j.k}, {.alpha = opt.alpha, .tol = opt.tol});
  });
  ResultTable t({"M", "alphabet_mask", "delta", "k", "r_k", "beta_k"});
  t.truncated = truncated;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& j = jobs[i];
    t.add_row({std::int64_t{j.M}, std::int64_t{j.mask},
               dimension(j.M, static_cast<std::size_t>(std::popcount(j.mask))), std::int64_t{j.k},
               reports[i].r, reports[i].beta});
  }
  t.sort_by({"M", "alphabet_mask"});
  t.meta.emplace_back("alpha", format_double(opt.alpha));
  return t;
}

ResultTable dilated_exponent_curve(int M, const std::vector<int>& A, int k,
                                   const std::vector<double>& alpha_grid, int threads) {
  const CantorSpec1D spec{M, A, k};
  spec.validate();
  for (double a : alpha_grid)
    if (!(a >= 0) || !std::isfinite(a)) throw InputError("dilation grid must be finite and >= 0");
  std::vector<double> bounds(alpha_grid.size());
  parallel_for(alpha_grid.size(), threads,
               [&](std::size_t i) { bounds[i] = schur_dilated_bound(M, A, k, alpha_grid[i]); });
  const double logn = std::log(static_cast<double>(spec.N()));
  ResultTable t({"alpha", "schur_bound", "beta_tilde"});
  for (std::size_t i = 0; i < alpha_grid.size(); ++i)
    t.add_row({alpha_grid[i], bounds[i], -std::log(bounds[i]) / logn + 0.0});
  t.sort_by({"alpha"});
  t.meta.emplace_back("M", std::to_string(M));
  t.meta.emplace_back("alphabet_mask", std::to_string(alphabet_mask(A)));
  t.meta.emplace_back("k", std::to_string(k));
  return t;
}

}  // namespace fup
