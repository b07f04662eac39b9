#pragma once

// Brute-force reference computations used only by the tests.

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using VectorXc = Eigen::VectorXcd;
using MatrixXc = Eigen::MatrixXcd;

inline cplx expi(long double t) { return {static_cast<double>(std::cos(t)), static_cast<double>(std::sin(t))}; }

inline long double two_pi() { return 2.0L * std::numbers::pi_v<long double>; }

// (1/sqrt N) sum_l exp(sign 2 pi i alpha j l / N) v(l), accumulated in long double.
inline VectorXc naive_dft(const VectorXc& v, double alpha = 1.0, int sign = -1) {
  const auto N = v.size();
  VectorXc out(N);
  for (Eigen::Index j = 0; j < N; ++j) {
    std::complex<long double> acc = 0;
    for (Eigen::Index l = 0; l < N; ++l) {
      const long double t = sign * two_pi() * alpha * static_cast<long double>(j) * static_cast<long double>(l) /
                            static_cast<long double>(N);
      acc += std::complex<long double>(std::cos(t), std::sin(t)) *
             std::complex<long double>(v(l).real(), v(l).imag());
    }
    acc /= std::sqrt(static_cast<long double>(N));
    out(j) = {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
  }
  return out;
}

inline MatrixXc naive_dft2(const MatrixXc& u) {
  const auto N = u.rows();
  MatrixXc out(N, N);
  for (Eigen::Index j1 = 0; j1 < N; ++j1)
    for (Eigen::Index j2 = 0; j2 < N; ++j2) {
      std::complex<long double> acc = 0;
      for (Eigen::Index l1 = 0; l1 < N; ++l1)
        for (Eigen::Index l2 = 0; l2 < N; ++l2) {
          const long double t = -two_pi() * static_cast<long double>((j1 * l1 + j2 * l2) % N) / N;
          acc += std::complex<long double>(std::cos(t), std::sin(t)) *
                 std::complex<long double>(u(l1, l2).real(), u(l1, l2).imag());
        }
      acc /= static_cast<long double>(N);
      out(j1, j2) = {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
    }
  return out;
}

inline VectorXc random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  VectorXc v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = {g(rng), g(rng)};
  return v;
}

inline double rel_err(const VectorXc& a, const VectorXc& b) { return (a - b).norm() / std::max(1e-300, b.norm()); }

// Digits enumerated by recursion rather than the mixed-radix loop of the library.
inline void cantor_rec(int M, const std::vector<int>& A, int level, int k, std::int64_t value, std::int64_t scale,
                       std::set<std::int64_t>& out) {
  if (level == k) {
    out.insert(value);
    return;
  }
  for (int a : A) cantor_rec(M, A, level + 1, k, value + a * scale, scale * M, out);
}

inline std::vector<std::int64_t> cantor_set(int M, const std::vector<int>& A, int k) {
  std::set<std::int64_t> s;
  cantor_rec(M, A, 0, k, 0, 1, s);
  return {s.begin(), s.end()};
}

// Explicit matrix (1/sqrt N) exp(-2 pi i alpha j l / N) on C x C.
inline MatrixXc cantor_matrix(int M, const std::vector<int>& A, int k, double alpha = 1.0) {
  const auto C = cantor_set(M, A, k);
  std::int64_t N = 1;
  for (int i = 0; i < k; ++i) N *= M;
  const auto n = static_cast<Eigen::Index>(C.size());
  MatrixXc G(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index l = 0; l < n; ++l)
      G(j, l) = expi(-two_pi() * alpha * static_cast<long double>(C[j]) * static_cast<long double>(C[l]) / N) /
                std::sqrt(static_cast<double>(N));
  return G;
}

inline double svd_norm(const MatrixXc& G) {
  Eigen::BDCSVD<MatrixXc> svd(G);
  return svd.singularValues()(0);
}

using Pt = std::array<std::int64_t, 2>;

inline std::vector<Pt> cantor2_set(int M, const std::vector<std::array<int, 2>>& A, int k) {
  std::set<Pt> s{{0, 0}};
  std::int64_t scale = 1;
  for (int i = 0; i < k; ++i) {
    std::set<Pt> next;
    for (const Pt& p : s)
      for (const auto& d : A) next.insert({p[0] + d[0] * scale, p[1] + d[1] * scale});
    s.swap(next);
    scale *= M;
  }
  return {s.begin(), s.end()};
}

inline double cantor2_norm(int M, const std::vector<std::array<int, 2>>& A, const std::vector<std::array<int, 2>>& B,
                           int k) {
  const auto CA = cantor2_set(M, A, k), CB = cantor2_set(M, B, k);
  std::int64_t N = 1;
  for (int i = 0; i < k; ++i) N *= M;
  MatrixXc G(static_cast<Eigen::Index>(CA.size()), static_cast<Eigen::Index>(CB.size()));
  for (std::size_t j = 0; j < CA.size(); ++j)
    for (std::size_t l = 0; l < CB.size(); ++l)
      G(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) =
          expi(-two_pi() * static_cast<long double>((CA[j][0] * CB[l][0] + CA[j][1] * CB[l][1]) % N) / N) /
          static_cast<double>(N);
  return svd_norm(G);
}

}  // namespace oracle
