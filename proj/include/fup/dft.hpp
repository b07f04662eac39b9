#pragma once

#include "fup/common.hpp"

namespace fup {

/// Shape of a transform: size N, dilation alpha (1 = unitary DFT) and
/// dimensionality. Two-dimensional transforms act on N x N arrays with
/// normalization 1/N.
struct TransformSpec {
  std::int64_t size = 1;
  double alpha = 1.0;
  int dims = 1;

  void validate() const;
};

/// Sizes up to this bound use direct O(N^2) summation in dft_apply.
inline constexpr std::int64_t kDirectDftLimit = 16;

/// Unitary DFT: (1/sqrt N) sum_l exp(-2 pi i j l / N) v(l).
VectorXc dft_apply(const Eigen::Ref<const VectorXc>& v);
VectorXc dft_apply(const TransformSpec& spec, const Eigen::Ref<const VectorXc>& v);

/// Inverse of dft_apply (conjugate kernel).
VectorXc idft_apply(const Eigen::Ref<const VectorXc>& v);

/// Direct O(N^2) summation with exactly reduced integer phases.
VectorXc dft_direct(const Eigen::Ref<const VectorXc>& v);

/// Mixed-radix Cooley-Tukey over the prime factorization of N.
VectorXc dft_fast(const Eigen::Ref<const VectorXc>& v);

/// Radix-M decimation for N = M^k; each stage uses an M-point butterfly.
/// Throws InputError if N is not a power of `radix`.
VectorXc dft_radix(const Eigen::Ref<const VectorXc>& v, int radix);

/// Dilated transform (1/sqrt N) sum_l exp(-2 pi i alpha j l / N) v(l).
/// Direct summation; phases reduced modulo N in extended precision.
VectorXc dilated_dft_apply(const Eigen::Ref<const VectorXc>& v, double alpha);
VectorXc dilated_dft_apply(const TransformSpec& spec, const Eigen::Ref<const VectorXc>& v);

/// Two-dimensional unitary DFT on a square array (rows, then columns).
MatrixXc dft2_apply(const Eigen::Ref<const MatrixXc>& u);
MatrixXc idft2_apply(const Eigen::Ref<const MatrixXc>& u);

/// Non-normalized forward/inverse FFT used for convolutions (any N >= 1).
void fft_inplace(std::vector<cplx>& data, bool inverse);

/// F_{k,alpha}(j) = (1/N) sum_{r in C_k} exp(-2 pi i alpha r j / N), evaluated
/// through the digit factorization of C_k:
///   (1/N) prod_{i<k} sum_{a in A} exp(-2 pi i alpha a M^i j / N).
cplx kernel_F(int M, std::span<const int> alphabet, int k, double alpha, std::int64_t j);

}  // namespace fup
