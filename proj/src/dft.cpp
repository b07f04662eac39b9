#include "fup/dft.hpp"

#include <algorithm>

namespace fup {

namespace {

std::vector<int> prime_factors(std::int64_t n) {
  std::vector<int> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      out.push_back(static_cast<int>(p));
      n /= p;
    }
  }
  if (n > 1) out.push_back(static_cast<int>(n));
  return out;
}

std::vector<cplx> twiddle_table(std::int64_t n) {
  std::vector<cplx> tw(static_cast<std::size_t>(n));
  for (std::int64_t j = 0; j < n; ++j)
    tw[static_cast<std::size_t>(j)] = unit_root(static_cast<long double>(j), static_cast<long double>(n));
  return tw;
}

// Decimation in time. `radices[level]` splits the current length n = p * m;
// sub-transforms land in out[r*m .. r*m+m) and are combined in place.
void fft_rec(const cplx* in, std::int64_t stride, std::int64_t n, cplx* out,
             const std::vector<cplx>& tw, std::int64_t tw_step, std::span<const int> radices,
             std::vector<cplx>& scratch) {
  if (n == 1) {
    out[0] = in[0];
    return;
  }
  const std::int64_t p = radices.front();
  const std::int64_t m = n / p;
  for (std::int64_t r = 0; r < p; ++r)
    fft_rec(in + r * stride, stride * p, m, out + r * m, tw, tw_step * p, radices.subspan(1), scratch);

  const std::int64_t big_n = static_cast<std::int64_t>(tw.size());
  const std::int64_t p_step = big_n / p;
  cplx* t = scratch.data();
  for (std::int64_t k = 0; k < m; ++k) {
    for (std::int64_t r = 0; r < p; ++r) {
      const std::int64_t e = (r * k) % n;
      t[r] = tw[static_cast<std::size_t>(e * tw_step)] * out[r * m + k];
    }
    for (std::int64_t q = 0; q < p; ++q) {
      cplx acc = 0;
      std::int64_t idx = 0;
      for (std::int64_t r = 0; r < p; ++r) {
        acc += tw[static_cast<std::size_t>(idx * p_step)] * t[r];
        idx += q;
        if (idx >= p) idx -= p;
      }
      out[q * m + k] = acc;
    }
  }
}

// Twiddles and radix sequence for one length, reusable across transforms.
struct FftPlan {
  std::int64_t n;
  std::vector<int> radices;
  std::vector<cplx> tw;
  std::vector<cplx> scratch;

  FftPlan(std::int64_t len, std::vector<int> rad) : n(len), radices(std::move(rad)), tw(twiddle_table(len)) {
    const int max_p = radices.empty() ? 1 : *std::max_element(radices.begin(), radices.end());
    scratch.resize(static_cast<std::size_t>(max_p));
  }
  void run(const cplx* in, cplx* out) { fft_rec(in, 1, n, out, tw, 1, radices, scratch); }
};

void run_fft(const cplx* in, std::int64_t n, cplx* out, std::span<const int> radices) {
  FftPlan plan(n, {radices.begin(), radices.end()});
  plan.run(in, out);
}

void check_nonempty(std::int64_t n) {
  if (n < 1) throw InputError("transform length must be >= 1");
}

}  // namespace

void TransformSpec::validate() const {
  if (size < 1) throw InputError("transform size must be >= 1");
  if (dims != 1 && dims != 2) throw InputError("dimensionality must be 1 or 2");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw InputError("dilation must be finite and >= 0");
}

VectorXc dft_direct(const Eigen::Ref<const VectorXc>& v) {
  const std::int64_t n = v.size();
  check_nonempty(n);
  const auto tw = twiddle_table(n);
  VectorXc out(n);
  for (std::int64_t j = 0; j < n; ++j) {
    cplx acc = 0;
    std::int64_t idx = 0;
    for (std::int64_t l = 0; l < n; ++l) {
      acc += tw[static_cast<std::size_t>(idx)] * v[l];
      idx += j;
      if (idx >= n) idx -= n;
    }
    out[j] = acc;
  }
  return out / std::sqrt(static_cast<double>(n));
}

VectorXc dft_fast(const Eigen::Ref<const VectorXc>& v) {
  const std::int64_t n = v.size();
  check_nonempty(n);
  const VectorXc in = v;
  VectorXc out(n);
  const auto radices = prime_factors(n);
  run_fft(in.data(), n, out.data(), radices);
  return out / std::sqrt(static_cast<double>(n));
}

VectorXc dft_radix(const Eigen::Ref<const VectorXc>& v, int radix) {
  const std::int64_t n = v.size();
  check_nonempty(n);
  if (radix < 2) throw InputError("radix must be >= 2");
  std::vector<int> radices;
  std::int64_t rest = n;
  while (rest > 1) {
    if (rest % radix != 0) throw InputError("length is not a power of the radix");
    rest /= radix;
    radices.push_back(radix);
  }
  const VectorXc in = v;
  VectorXc out(n);
  run_fft(in.data(), n, out.data(), radices);
  return out / std::sqrt(static_cast<double>(n));
}

VectorXc dft_apply(const Eigen::Ref<const VectorXc>& v) {
  return v.size() <= kDirectDftLimit ? dft_direct(v) : dft_fast(v);
}

VectorXc dft_apply(const TransformSpec& spec, const Eigen::Ref<const VectorXc>& v) {
  spec.validate();
  if (spec.dims != 1) throw InputError("dft_apply needs a one-dimensional spec");
  if (v.size() != spec.size) throw InputError("input length does not match transform size");
  return spec.alpha == 1.0 ? dft_apply(v) : dilated_dft_apply(v, spec.alpha);
}

VectorXc idft_apply(const Eigen::Ref<const VectorXc>& v) {
  return dft_apply(v.conjugate()).conjugate();
}

VectorXc dilated_dft_apply(const Eigen::Ref<const VectorXc>& v, double alpha) {
  const std::int64_t n = v.size();
  check_nonempty(n);
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw InputError("dilation must be finite and >= 0");
  constexpr std::int64_t kReseed = 32;
  VectorXc out(n);
  for (std::int64_t j = 0; j < n; ++j) {
    const cplx step = dilated_root(alpha, j, n);
    // Neumaier-compensated accumulation of both components.
    double sr = 0, cr = 0, si = 0, ci = 0;
    cplx w = 1;
    for (std::int64_t l = 0; l < n; ++l) {
      if (l % kReseed == 0) w = dilated_root(alpha, j * l, n);
      const cplx term = w * v[l];
      auto add = [](double& s, double& c, double x) {
        const double t = s + x;
        c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
        s = t;
      };
      add(sr, cr, term.real());
      add(si, ci, term.imag());
      w *= step;
    }
    out[j] = cplx(sr + cr, si + ci);
  }
  return out / std::sqrt(static_cast<double>(n));
}

VectorXc dilated_dft_apply(const TransformSpec& spec, const Eigen::Ref<const VectorXc>& v) {
  spec.validate();
  if (v.size() != spec.size) throw InputError("input length does not match transform size");
  return dilated_dft_apply(v, spec.alpha);
}

MatrixXc dft2_apply(const Eigen::Ref<const MatrixXc>& u) {
  if (u.rows() != u.cols()) throw InputError("two-dimensional transform needs a square array");
  const std::int64_t n = u.rows();
  check_nonempty(n);
  if (n <= kDirectDftLimit) {
    MatrixXc tmp(n, n);
    for (Eigen::Index i = 0; i < n; ++i) tmp.row(i) = dft_direct(u.row(i).transpose()).transpose();
    for (Eigen::Index j = 0; j < n; ++j) tmp.col(j) = dft_direct(tmp.col(j));
    return tmp;
  }
  FftPlan plan(n, prime_factors(n));
  // columns first on the transposed copy keeps every pass contiguous
  MatrixXc a = u.transpose(), b(n, n);
  for (Eigen::Index j = 0; j < n; ++j) plan.run(a.col(j).data(), b.col(j).data());
  a = b.transpose();
  for (Eigen::Index j = 0; j < n; ++j) plan.run(a.col(j).data(), b.col(j).data());
  return b / static_cast<double>(n);
}

MatrixXc idft2_apply(const Eigen::Ref<const MatrixXc>& u) {
  return dft2_apply(u.conjugate()).conjugate();
}

void fft_inplace(std::vector<cplx>& data, bool inverse) {
  const auto n = static_cast<std::int64_t>(data.size());
  check_nonempty(n);
  if (inverse)
    for (auto& z : data) z = std::conj(z);
  std::vector<cplx> out(data.size());
  run_fft(data.data(), n, out.data(), prime_factors(n));
  if (inverse)
    for (auto& z : out) z = std::conj(z);
  data.swap(out);
}

cplx kernel_F(int M, std::span<const int> alphabet, int k, double alpha, std::int64_t j) {
  if (M < 2 || k < 1 || alphabet.empty()) throw InputError("invalid Cantor parameters");
  const std::int64_t n = checked_pow(M, k);
  cplx prod = 1;
  std::int64_t scale = 1;  // M^i
  for (int i = 0; i < k; ++i) {
    cplx digit_sum = 0;
    for (int a : alphabet) {
      // a * M^i * j reduced mod N before the dilation keeps the integer exact.
      const std::int64_t base = ((static_cast<std::int64_t>(a) * scale) % n) * (j % n);
      digit_sum += alpha == 1.0 ? dilated_root(1.0, base % n, n)
                                : dilated_root(alpha, static_cast<std::int64_t>(a) * scale * j, n);
    }
    prod *= digit_sum;
    scale *= M;
  }
  return prod / static_cast<double>(n);
}

}  // namespace fup
