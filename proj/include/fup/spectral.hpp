#pragma once

#include "fup/common.hpp"

#include <Eigen/Eigenvalues>

#include <optional>
#include <random>

namespace fup {

/// Operator-norm report shared by the 1D and 2D norm computations.
struct NormReport {
  double r = 0;
  double beta = 0;
  std::string method;
  int iterations = 0;
  double residual = 0;
  std::optional<double> schur_bound;
};

/// Top eigenvalue of a Hermitian positive semidefinite matrix.
template <typename Derived>
double top_eigenvalue(const Eigen::MatrixBase<Derived>& gram) {
  using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (gram.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(gram, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", {}, 0, 0);
  return std::max(0.0, static_cast<double>(es.eigenvalues().maxCoeff()));
}

/// Largest singular value of a dense matrix, via the smaller Gram matrix.
template <typename Derived>
double dense_operator_norm(const Eigen::MatrixBase<Derived>& g) {
  using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (g.size() == 0) return 0.0;
  Mat gram;
  if (g.rows() >= g.cols())
    gram.noalias() = g.adjoint() * g;
  else
    gram.noalias() = g * g.adjoint();
  return std::sqrt(top_eigenvalue(gram));
}

struct IterativeResult {
  double norm = 0;
  int iterations = 0;
  double residual = 0;
};

struct KrylovOptions {
  double tol = 1e-10;
  long max_matvecs = 0;  // 0: 10 * dimension
  int basis = 96;
  int keep = 16;
  int check_every = 4;  // basis must exceed keep + check_every
  std::uint64_t seed = 20240131;
};

/// Top eigenvalue of a positive semidefinite Gram operator by restarted
/// Krylov (Lanczos-type) subspace iteration with full reorthogonalization.
/// The start subspace is normalized all-ones plus one fixed-seed random
/// vector, so a start vector orthogonal to the top eigenspace cannot hide it.
/// Stops when the Ritz residual ||G*G u - theta u|| / theta <= tol and
/// returns sqrt(theta). An invariant subspace (no new direction from the
/// residual) also stops the iteration with the residual reached.
template <typename GramApply>
IterativeResult krylov_norm(GramApply&& gram, Eigen::Index dim, const KrylovOptions& opt = {}) {
  if (dim < 1) throw InputError("Krylov iteration needs a positive dimension");
  const long cap = opt.max_matvecs > 0 ? opt.max_matvecs : std::max(10L * static_cast<long>(dim), 50L);
  const Eigen::Index m = std::min<Eigen::Index>(opt.basis, dim);
  const Eigen::Index keep = std::min<Eigen::Index>(opt.keep, std::max<Eigen::Index>(1, m / 2));

  MatrixXc V(dim, m), W(dim, m), H = MatrixXc::Zero(m, m);
  Eigen::Index cols = 0;
  long matvecs = 0;
  auto append = [&](VectorXc t) {
    for (int pass = 0; pass < 2 && cols > 0; ++pass) t -= V.leftCols(cols) * (V.leftCols(cols).adjoint() * t);
    const double nt = t.norm();
    if (!(nt > 1e-12)) return false;
    V.col(cols) = t / nt;
    W.col(cols) = gram(VectorXc(V.col(cols)));
    ++matvecs;
    const VectorXc h = V.leftCols(cols + 1).adjoint() * W.col(cols);
    H.col(cols).head(cols + 1) = h;
    H.row(cols).head(cols + 1) = h.adjoint();
    H(cols, cols) = h[cols].real();
    ++cols;
    return true;
  };

  append(VectorXc::Ones(dim));
  {
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> nd;
    VectorXc r(dim);
    for (Eigen::Index i = 0; i < dim; ++i) r[i] = cplx(nd(rng), nd(rng));
    append(r);
  }
  double theta = 0, residual = INFINITY;
  VectorXc u = V.col(0);
  for (long step = 0;; ++step) {
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(H.topLeftCorner(cols, cols));
    const Eigen::Index top = cols - 1;
    theta = es.eigenvalues()[top];
    const VectorXc y = es.eigenvectors().col(top);
    u = V.leftCols(cols) * y;
    if (!(theta > 0)) return {0.0, static_cast<int>(matvecs), 0.0};
    VectorXc rvec = W.leftCols(cols) * y - theta * u;
    residual = rvec.norm() / theta;
    if (residual <= opt.tol) return {std::sqrt(theta), static_cast<int>(matvecs), residual};
    if (matvecs >= cap) break;
    if (cols + opt.check_every > m) {
      // Thick restart on the top Ritz vectors; u and its residual are unchanged.
      const MatrixXc Y = es.eigenvectors().rightCols(keep);
      const MatrixXc Vk = V.leftCols(cols) * Y;
      const MatrixXc Wk = W.leftCols(cols) * Y;
      V.leftCols(keep) = Vk;
      W.leftCols(keep) = Wk;
      H.setZero();
      H.topLeftCorner(keep, keep) = es.eigenvalues().tail(keep).cast<cplx>().asDiagonal();
      cols = keep;
    }
    // A few Lanczos steps from the residual before the next Rayleigh-Ritz solve.
    for (int s = 0; s < opt.check_every && matvecs < cap; ++s) {
      const VectorXc next = s == 0 ? rvec : VectorXc(W.col(cols - 1));
      if (!append(next)) {
        if (s == 0) return {std::sqrt(theta), static_cast<int>(matvecs), residual};
        break;
      }
    }
  }
  throw ConvergenceError("Krylov iteration hit the matrix-vector cap", u, std::sqrt(std::max(theta, 0.0)),
                         residual);
}

}  // namespace fup
