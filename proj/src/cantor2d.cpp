#include "fup/cantor2d.hpp"

#include "fup/dft.hpp"

#include <algorithm>
#include <set>

namespace fup {

void validate_alphabet2(int M, const Alphabet2& alphabet) {
  if (M < 2) throw InputError("base M must be >= 2");
  if (alphabet.empty()) throw InputError("alphabet must be nonempty");
  std::set<Digit2> seen;
  for (const Digit2& d : alphabet) {
    if (d[0] < 0 || d[0] >= M || d[1] < 0 || d[1] >= M)
      throw InputError("digit (" + std::to_string(d[0]) + "," + std::to_string(d[1]) + ") outside Z_" +
                       std::to_string(M) + "^2");
    if (!seen.insert(d).second)
      throw InputError("duplicate digit (" + std::to_string(d[0]) + "," + std::to_string(d[1]) + ")");
  }
}

double CantorSpec2D::delta_A() const { return std::log(static_cast<double>(A.size())) / std::log(M); }
double CantorSpec2D::delta_B() const { return std::log(static_cast<double>(B.size())) / std::log(M); }

void CantorSpec2D::validate() const {
  validate_alphabet2(M, A);
  validate_alphabet2(M, B);
  if (k < 1) throw InputError("order k must be >= 1");
  (void)N();
}

std::vector<Point2> build_cantor2(int M, const Alphabet2& alphabet, int k) {
  validate_alphabet2(M, alphabet);
  if (k < 1) throw InputError("order k must be >= 1");
  const std::int64_t count = checked_pow(static_cast<std::int64_t>(alphabet.size()), k);
  if (count > (std::int64_t{1} << 26)) throw BudgetError("2D Cantor set exceeds 2^26 points");
  std::vector<Point2> pts;
  pts.reserve(static_cast<std::size_t>(count));
  const auto q = static_cast<std::int64_t>(alphabet.size());
  for (std::int64_t idx = 0; idx < count; ++idx) {
    Point2 p{0, 0};
    std::int64_t rest = idx, scale = 1;
    for (int i = 0; i < k; ++i) {
      const Digit2& d = alphabet[static_cast<std::size_t>(rest % q)];
      p[0] += d[0] * scale;
      p[1] += d[1] * scale;
      rest /= q;
      scale *= M;
    }
    pts.push_back(p);
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

Alphabet2 full_alphabet2(int M) {
  Alphabet2 out;
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) out.push_back({i, j});
  return out;
}

double easy_bound2(const CantorSpec2D& spec) {
  const double beta = std::max(0.0, 1 - (spec.delta_A() + spec.delta_B()) / 2);
  return std::pow(static_cast<double>(spec.N()), -beta);
}

NormReport fup_norm2(const CantorSpec2D& spec, const Norm2Options& opt) {
  spec.validate();
  if (!(opt.tol > 0)) throw InputError("tolerance must be positive");
  const std::int64_t N = spec.N();
  const auto CA = build_cantor2(spec.M, spec.A, spec.k);
  const auto CB = build_cantor2(spec.M, spec.B, spec.k);
  const auto na = static_cast<Eigen::Index>(CA.size());
  const auto nb = static_cast<Eigen::Index>(CB.size());
  NormReport rep;
  if (na <= opt.dense_limit && nb <= opt.dense_limit) {
    MatrixXc G(na, nb);
    const double scale = 1.0 / static_cast<double>(N);
    for (Eigen::Index l = 0; l < nb; ++l)
      for (Eigen::Index j = 0; j < na; ++j) {
        const std::int64_t phase = (CA[j][0] * CB[l][0] + CA[j][1] * CB[l][1]) % N;
        G(j, l) = unit_root(static_cast<long double>(phase), static_cast<long double>(N)) * scale;
      }
    rep.r = dense_operator_norm(G);
    rep.method = "dense-svd";
  } else {
    if (N > (std::int64_t{1} << 12)) throw BudgetError("2D transform size exceeds the matrix-free budget");
    const auto n = static_cast<Eigen::Index>(N);
    auto gram = [&](const VectorXc& x) {
      MatrixXc U = MatrixXc::Zero(n, n);
      for (Eigen::Index l = 0; l < nb; ++l) U(CB[l][0], CB[l][1]) = x(l);
      const MatrixXc V = dft2_apply(U);
      MatrixXc W = MatrixXc::Zero(n, n);
      for (Eigen::Index j = 0; j < na; ++j) W(CA[j][0], CA[j][1]) = V(CA[j][0], CA[j][1]);
      const MatrixXc Y = idft2_apply(W);
      VectorXc out(nb);
      for (Eigen::Index l = 0; l < nb; ++l) out(l) = Y(CB[l][0], CB[l][1]);
      return out;
    };
    const auto pr = krylov_norm(gram, nb, {.tol = opt.tol, .seed = opt.seed});
    rep.r = pr.norm;
    rep.method = "krylov";
    rep.iterations = pr.iterations;
    rep.residual = pr.residual;
  }
  rep.beta = -std::log(rep.r) / (spec.k * std::log(static_cast<double>(spec.M))) + 0.0;
  return rep;
}

PairingResult check_nondegenerate_pairing(const Alphabet2& A, const Alphabet2& B) {
  PairingResult res;
  for (const Digit2& a : A)
    for (const Digit2& a2 : A)
      for (const Digit2& b : B)
        for (const Digit2& b2 : B) {
          const int ip = (a[0] - a2[0]) * (b[0] - b2[0]) + (a[1] - a2[1]) * (b[1] - b2[1]);
          if (ip != 0) {
            res.nondegenerate = true;
            res.witness = {a, a2, b, b2};
            return res;
          }
        }
  return res;
}

std::string to_string(ExceptionalKind kind) {
  switch (kind) {
    case ExceptionalKind::case1_lines:
      return "case1_lines";
    case ExceptionalKind::case2_diagonals:
      return "case2_diagonals";
    default:
      return "none";
  }
}

namespace {

// Offset s of a line {(j, s)} (horizontal) or {(s, j)} (vertical) in the alphabet.
std::optional<int> alphabet_line(int M, const Alphabet2& X, bool horizontal) {
  std::set<Digit2> set(X.begin(), X.end());
  for (int s = 0; s < M; ++s) {
    bool all = true;
    for (int j = 0; j < M && all; ++j) all = set.count(horizontal ? Digit2{j, s} : Digit2{s, j}) > 0;
    if (all) return s;
  }
  return std::nullopt;
}

class Grid {
 public:
  Grid(std::int64_t N, const std::vector<Point2>& pts) : N_(N), bits_(static_cast<std::size_t>(N * N), false) {
    for (const Point2& p : pts) bits_[static_cast<std::size_t>(p[0] * N + p[1])] = true;
  }
  bool has(std::int64_t x, std::int64_t y) const { return bits_[static_cast<std::size_t>(x * N_ + y)]; }

  // {(j, j + s)} when anti is false, {(j, s - j)} otherwise.
  std::optional<std::int64_t> line(bool anti) const {
    for (std::int64_t s = 0; s < N_; ++s) {
      bool all = true;
      for (std::int64_t j = 0; j < N_ && all; ++j) {
        const std::int64_t y = anti ? ((s - j) % N_ + N_) % N_ : (j + s) % N_;
        all = has(j, y);
      }
      if (all) return s;
    }
    return std::nullopt;
  }

 private:
  std::int64_t N_;
  std::vector<bool> bits_;
};

}  // namespace

ExceptionalResult classify_exceptional(const CantorSpec2D& spec) {
  spec.validate();
  ExceptionalResult res;
  const auto hA = alphabet_line(spec.M, spec.A, true), vA = alphabet_line(spec.M, spec.A, false);
  const auto hB = alphabet_line(spec.M, spec.B, true), vB = alphabet_line(spec.M, spec.B, false);
  if (hA && vB) return {ExceptionalKind::case1_lines, true, *hA, *vB};
  if (hB && vA) return {ExceptionalKind::case1_lines, false, *hB, *vA};

  const std::int64_t N = spec.N();
  if (N * N > (std::int64_t{1} << 26)) throw BudgetError("diagonal search exceeds the N^2 budget");
  const Grid gA(N, build_cantor2(spec.M, spec.A, spec.k));
  const Grid gB(N, build_cantor2(spec.M, spec.B, spec.k));
  const auto dA = gA.line(false), dB = gB.line(false);
  if (dA) {
    if (const auto aB = gB.line(true)) return {ExceptionalKind::case2_diagonals, true, *dA, *aB};
  }
  if (dB) {
    if (const auto aA = gA.line(true)) return {ExceptionalKind::case2_diagonals, false, *dB, *aA};
  }
  return res;
}

Hds1Result check_hds1(int M, const Alphabet2& A, const Alphabet2& B) {
  validate_alphabet2(M, A);
  validate_alphabet2(M, B);
  Hds1Result res;
  for (int s = 0; s < M && !res.s; ++s) {
    if (std::none_of(A.begin(), A.end(), [&](const Digit2& a) { return a[0] == s; })) res.s = s;
  }
  for (int t = 0; t < M; ++t) {
    const auto in_row = std::count_if(B.begin(), B.end(), [&](const Digit2& b) { return b[1] == t; });
    if (in_row == M) res.full_rows.push_back(t);
  }
  res.pass = res.s.has_value() && res.full_rows.empty();
  return res;
}

Hds2Result check_hds2(int M, const Alphabet2& A, const Alphabet2& B) {
  validate_alphabet2(M, A);
  validate_alphabet2(M, B);
  Hds2Result res;
  for (int s = 0; s < M && !res.st; ++s) {
    if (std::any_of(A.begin(), A.end(), [&](const Digit2& a) { return a[0] == s; })) continue;
    for (int t = 0; t < M && !res.st; ++t) {
      if (std::none_of(A.begin(), A.end(), [&](const Digit2& a) { return a[1] == t; }))
        res.st = std::array<int, 2>{s, t};
    }
  }
  res.b_full = static_cast<std::int64_t>(B.size()) == static_cast<std::int64_t>(M) * M;
  res.pass = res.st.has_value() && !res.b_full;
  return res;
}

ThinCount thin_count(int M, int k, int k0, int t) {
  if (M < 2) throw InputError("base M must be >= 2");
  if (k < 1) throw InputError("order k must be >= 1");
  if (k0 < 0 || k0 > k) throw InputError("need 0 <= k0 <= k");
  if (t < 0 || t >= M) throw InputError("digit t outside Z_M");
  auto binom = [](int n, int r) {
    __int128 c = 1;
    for (int i = 1; i <= r; ++i) c = c * (n - r + i) / i;
    return c;
  };
  auto ipow = [](__int128 b, int e) {
    __int128 r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
  };
  const __int128 limit = static_cast<__int128>(INT64_MAX);
  __int128 count = 0;
  for (int j = 0; j <= k0; ++j) count += binom(k, j) * ipow(M - 1, k - j);
  const __int128 bound = binom(k, k0) * ipow(M, k0) * ipow(M - 1, k - k0);
  if (count > limit || bound > limit) throw BudgetError("thin_count overflows int64");
  ThinCount res;
  res.count = static_cast<std::int64_t>(count);
  res.bound = static_cast<std::int64_t>(bound);
  res.bound_applies = static_cast<std::int64_t>(k0) * M <= static_cast<std::int64_t>(k) * (M - 1);
  res.bound_holds = !res.bound_applies || res.count <= res.bound;
  return res;
}

}  // namespace fup
