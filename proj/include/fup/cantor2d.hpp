#pragma once

#include "fup/common.hpp"
#include "fup/spectral.hpp"

#include <array>
#include <optional>

namespace fup {

using Digit2 = std::array<int, 2>;
using Point2 = std::array<std::int64_t, 2>;
using Alphabet2 = std::vector<Digit2>;

/// Two alphabets A, B in Z_M^2 and an order k.
struct CantorSpec2D {
  int M = 3;
  Alphabet2 A;
  Alphabet2 B;
  int k = 1;

  std::int64_t N() const { return checked_pow(M, k); }
  double delta_A() const;
  double delta_B() const;
  void validate() const;
};

/// Throws InputError on digits outside Z_M, duplicates or an empty alphabet.
void validate_alphabet2(int M, const Alphabet2& alphabet);

/// {a_0 + M a_1 + ... + M^{k-1} a_{k-1}} componentwise, sorted.
std::vector<Point2> build_cantor2(int M, const Alphabet2& alphabet, int k);

/// All of Z_M^2.
Alphabet2 full_alphabet2(int M);

struct Norm2Options {
  double tol = 1e-10;
  std::int64_t dense_limit = 2048;  // per side
  std::uint64_t seed = 20240131;
};

/// ||1_{C_A} F_{NxN} 1_{C_B}||: dense when both sets have at most dense_limit
/// points, else restarted Krylov on G*G with G applied by masked 2D transforms.
NormReport fup_norm2(const CantorSpec2D& spec, const Norm2Options& opt = {});

/// N^{-max(0, 1 - (delta_A + delta_B)/2)}.
double easy_bound2(const CantorSpec2D& spec);

struct PairingResult {
  bool nondegenerate = false;
  std::array<Digit2, 4> witness{};  // a, a', b, b'
};

/// True iff <a - a', b - b'> != 0 for some a, a' in A and b, b' in B.
PairingResult check_nondegenerate_pairing(const Alphabet2& A, const Alphabet2& B);

enum class ExceptionalKind { none, case1_lines, case2_diagonals };

struct ExceptionalResult {
  ExceptionalKind kind = ExceptionalKind::none;
  bool a_first = true;  // A holds the horizontal line / the diagonal
  std::int64_t s_first = 0;
  std::int64_t s_second = 0;
};

std::string to_string(ExceptionalKind kind);

/// case1: one alphabet contains a horizontal line {(j, s)} of Z_M^2 and the
/// other a vertical line {(s', j)}. case2: one of C_{k,A}, C_{k,B} contains
/// {(j, j + s mod N)} and the other {(j, s' - j mod N)}; all N offsets are
/// tested by exact membership.
ExceptionalResult classify_exceptional(const CantorSpec2D& spec);

struct Hds1Result {
  bool pass = false;
  std::optional<int> s;         // column {(s, j)} disjoint from A
  std::vector<int> full_rows;   // t with {l : (l, t) in B} = Z_M
};

Hds1Result check_hds1(int M, const Alphabet2& A, const Alphabet2& B);

struct Hds2Result {
  bool pass = false;
  std::optional<std::array<int, 2>> st;  // column s and row t disjoint from A
  bool b_full = false;
};

Hds2Result check_hds2(int M, const Alphabet2& A, const Alphabet2& B);

struct ThinCount {
  std::int64_t count = 0;
  std::int64_t bound = 0;       // C(k, k0) M^{k0} (M-1)^{k-k0}
  bool bound_applies = false;   // k0 <= k (M-1) / M
  bool bound_holds = true;
};

/// Number of b in Z_{M^k} with at most k0 base-M digits equal to t.
ThinCount thin_count(int M, int k, int k0, int t);

}  // namespace fup
