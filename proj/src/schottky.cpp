#include "fup/schottky.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace fup {

namespace {

double scale_of(const Mat2& g) { return std::max(1.0, g.cwiseAbs().maxCoeff()); }

bool close(double x, double y, double tol) { return std::abs(x - y) <= tol * std::max(1.0, std::abs(y)); }

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

ValidationReport fail(std::string what, std::string detail) { return {false, std::move(what), std::move(detail)}; }

}  // namespace

ValidationReport validate_schottky(const SchottkyData& d, double tol) {
  if (d.r < 2) return fail("generator-count", "r must be >= 2");
  const auto n = static_cast<std::size_t>(d.letters());
  if (d.intervals.size() != n || d.generators.size() != n)
    return fail("generator-count", "need 2r intervals and 2r generators");
  for (std::size_t w = 0; w < n; ++w) {
    const auto& I = d.intervals[w];
    if (!std::isfinite(I.a) || !std::isfinite(I.b) || !(I.a < I.b))
      return fail("interval-order", "interval " + std::to_string(w + 1) + " is not a finite [a,b] with a<b");
    if (!d.generators[w].allFinite()) return fail("determinant", "generator " + std::to_string(w + 1) + " not finite");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto i, auto j) { return d.intervals[i].a < d.intervals[j].a; });
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto& lo = d.intervals[order[i]];
    const auto& hi = d.intervals[order[i + 1]];
    if (!(lo.b < hi.a))
      return fail("disjointness", "intervals " + std::to_string(order[i] + 1) + " and " +
                                      std::to_string(order[i + 1] + 1) + " intersect");
  }
  for (std::size_t w = 0; w < n; ++w) {
    const Mat2& g = d.generators[w];
    const double det = g.determinant();
    if (std::abs(det - 1.0) > tol * scale_of(g) * scale_of(g))
      return fail("determinant", "generator " + std::to_string(w + 1) + " has determinant " + fmt(det));
  }
  for (std::size_t w = 0; w < n; ++w) {
    const Mat2 inv = sl2_inverse(d.generators[w]);
    const Mat2& partner = d.generators[static_cast<std::size_t>(d.bar(static_cast<int>(w)))];
    const double s = tol * scale_of(inv);
    if ((partner - inv).cwiseAbs().maxCoeff() > s && (partner + inv).cwiseAbs().maxCoeff() > s)
      return fail("inverse-pairing", "generator " + std::to_string(d.bar(static_cast<int>(w)) + 1) +
                                         " is not the inverse of generator " + std::to_string(w + 1));
  }
  for (std::size_t w = 0; w < n; ++w) {
    const Mat2& g = d.generators[w];
    const auto& src = d.intervals[static_cast<std::size_t>(d.bar(static_cast<int>(w)))];
    const auto& dst = d.intervals[w];
    double x = mobius_apply(g, src.a), y = mobius_apply(g, src.b);
    if (x > y) std::swap(x, y);
    if (!close(x, dst.a, tol) || !close(y, dst.b, tol))
      return fail("endpoint-mapping", "generator " + std::to_string(w + 1) + " maps the endpoints of interval " +
                                          std::to_string(d.bar(static_cast<int>(w)) + 1) + " to [" + fmt(x) +
                                          ", " + fmt(y) + "]");
    const double at_inf = mobius_apply(g, std::numeric_limits<double>::infinity());
    if (!(dst.a < at_inf && at_inf < dst.b))
      return fail("infinity-image", "generator " + std::to_string(w + 1) + " sends infinity to " + fmt(at_inf) +
                                        ", outside interval " + std::to_string(w + 1));
  }
  return {};
}

std::int64_t word_count(int r, int n, std::int64_t max_words) {
  if (r < 1 || n < 1) throw InputError("word length and generator count must be >= 1");
  std::int64_t count = 2 * r;
  for (int i = 1; i < n; ++i) {
    if (count > max_words / (2 * r - 1)) throw BudgetError("word set W_n exceeds the word budget");
    count *= 2 * r - 1;
  }
  if (count > max_words) throw BudgetError("word set W_n exceeds the word budget");
  return count;
}

std::vector<int> word_at(int r, int n, std::int64_t index) {
  // Reverse the parent map i -> i / (2r - 1) to recover each letter.
  std::vector<int> w(static_cast<std::size_t>(n));
  const int branch = 2 * r - 1;
  std::vector<int> choice(static_cast<std::size_t>(n));
  for (int j = n - 1; j >= 1; --j) {
    choice[static_cast<std::size_t>(j)] = static_cast<int>(index % branch);
    index /= branch;
  }
  w[0] = static_cast<int>(index);
  for (int j = 1; j < n; ++j) {
    const int forbidden = (w[static_cast<std::size_t>(j - 1)] + r) % (2 * r);
    int c = choice[static_cast<std::size_t>(j)];
    if (c >= forbidden) ++c;
    w[static_cast<std::size_t>(j)] = c;
  }
  return w;
}

std::vector<std::vector<int>> enumerate_words(const SchottkyData& data, int n, std::int64_t max_words) {
  const std::int64_t count = word_count(data.r, n, max_words);
  std::vector<std::vector<int>> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) out.push_back(word_at(data.r, n, i));
  return out;
}

double WordTree::total_length() const { return pairwise_sum(length); }

double WordTree::max_length() const { return length.empty() ? 0.0 : *std::max_element(length.begin(), length.end()); }

WordTree refine_next(const SchottkyData& data, const WordTree& tree) {
  const int letters = data.letters();
  const std::size_t block = tree.size() / static_cast<std::size_t>(letters);
  WordTree out;
  out.r = data.r;
  out.depth = tree.depth + 1;
  out.left.reserve(tree.size() * static_cast<std::size_t>(letters - 1));
  out.length.reserve(tree.size() * static_cast<std::size_t>(letters - 1));
  for (int w1 = 0; w1 < letters; ++w1) {
    const Mat2& g = data.generators[static_cast<std::size_t>(w1)];
    const double c = g(1, 0), d = g(1, 1);
    for (int first = 0; first < letters; ++first) {
      if (first == data.bar(w1)) continue;
      const std::size_t begin = static_cast<std::size_t>(first) * block;
      for (std::size_t i = begin; i < begin + block; ++i) {
        const double a = tree.left[i];
        const double len = tree.length[i];
        const double b = a + len;
        out.left.push_back(mobius_apply(g, a));
        out.length.push_back(len / std::abs((c * a + d) * (c * b + d)));
      }
    }
  }
  return out;
}

WordTree refine(const SchottkyData& data, int n, std::int64_t max_words) {
  word_count(data.r, n, max_words);
  WordTree t;
  t.r = data.r;
  t.depth = 1;
  for (const auto& I : data.intervals) {
    t.left.push_back(I.a);
    t.length.push_back(I.b - I.a);
  }
  for (int level = 2; level <= n; ++level) t = refine_next(data, t);
  return t;
}

double pressure_root(const std::vector<double>& finer, const std::vector<double>& coarser) {
  auto logs = [](const std::vector<double>& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!(v[i] > 0)) throw InputError("nonpositive interval length in pressure equation");
      out[i] = std::log(v[i]);
    }
    return out;
  };
  const auto l1 = logs(finer), l0 = logs(coarser);
  auto log_sum = [](const std::vector<double>& lg, double s) {
    double mx = -INFINITY;
    for (double x : lg) mx = std::max(mx, s * x);
    std::vector<double> terms(lg.size());
    for (std::size_t i = 0; i < lg.size(); ++i) terms[i] = std::exp(s * lg[i] - mx);
    return mx + std::log(pairwise_sum(terms));
  };
  auto f = [&](double s) { return log_sum(l1, s) - log_sum(l0, s); };
  double lo = 0, hi = 1;
  if (!(f(lo) > 0 && f(hi) < 0)) throw InputError("pressure equation does not bracket a root in (0,1)");
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

DimensionEstimate estimate_dimension(const SchottkyData& data, int n_max, double tol) {
  const auto rep = validate_schottky(data);
  if (!rep.ok) throw InputError("invalid Schottky data: " + rep.violation + ": " + rep.detail);
  if (n_max < 2) throw InputError("n_max must be >= 2");
  word_count(data.r, n_max);
  DimensionEstimate est;
  WordTree prev = refine(data, 1);
  est.levels.push_back({1, NAN, static_cast<std::int64_t>(prev.size()), prev.max_length(), prev.total_length()});
  for (int n = 2; n <= n_max; ++n) {
    WordTree cur = refine_next(data, prev);
    const double delta = pressure_root(cur.length, prev.length);
    est.levels.push_back({n, delta, static_cast<std::int64_t>(cur.size()), cur.max_length(), cur.total_length()});
    est.delta = delta;
    est.level = n;
    if (n >= 3 && std::abs(delta - est.levels[est.levels.size() - 2].delta) < tol) {
      est.converged = true;
      break;
    }
    prev = std::move(cur);
  }
  return est;
}

SchottkyData conjugate(const SchottkyData& data, const Mat2& t_in) {
  const double det = t_in.determinant();
  if (!(det > 0)) throw InputError("conjugating map must preserve orientation");
  const Mat2 t = t_in / std::sqrt(det);
  const Mat2 ti = sl2_inverse(t);
  SchottkyData out;
  out.r = data.r;
  for (const auto& I : data.intervals) {
    if (t(1, 0) != 0) {
      const double pole = -t(1, 1) / t(1, 0);
      if (I.contains(pole)) throw InputError("conjugating map sends a point of an interval to infinity");
    }
    out.intervals.push_back({mobius_apply(t, I.a), mobius_apply(t, I.b)});
  }
  for (const auto& g : data.generators) out.generators.push_back(t * g * ti);
  return out;
}

Mat2 hyperbolic(double l, double p, double q) {
  Mat2 c;
  c << q, p, 1, 1;
  const double det = c.determinant();
  if (det == 0) throw InputError("fixed points must differ");
  c /= std::sqrt(std::abs(det));
  if (det < 0) c.col(1) *= -1;
  const double lam = std::exp(l / 2);
  return c * Eigen::Vector2d(lam, 1 / lam).asDiagonal() * sl2_inverse(c);
}

namespace {

// Arc of the circle R u {inf} running counterclockwise (increasing
// stereographic angle) from `from` to `to`.
struct Arc {
  double from, to;
};

Arc arc_through(const Mat2& half, double fixed) {
  const double x = mobius_apply(half, 1.0), y = mobius_apply(half, -1.0);
  const double lo = std::min(x, y), hi = std::max(x, y);
  if (lo < fixed && fixed < hi) return {lo, hi};
  return {hi, lo};  // passes through infinity
}

double angle(double x) { return 2 * std::atan(x); }

}  // namespace

SchottkyData three_funnel_schottky(double l1, double l2, double l3) {
  if (!(l1 > 0 && l2 > 0 && l3 > 0)) throw InputError("neck lengths must be positive");
  const double target = 2 * std::cosh(l3 / 2);
  auto make = [&](double p) {
    return std::pair{hyperbolic(l1, -1 / p, -p), hyperbolic(l2, 1 / p, p)};
  };
  auto g = [&](double p) {
    const auto [A, B] = make(p);
    return std::abs((A * sl2_inverse(B)).trace()) - target;
  };
  // First sign change on a uniform grid of p in (0, 1), refined by bisection.
  constexpr int kGrid = 2000;
  double lo = NAN, hi = NAN;
  double prev_p = 0.5 / kGrid, prev_v = g(prev_p);
  for (int i = 1; i < kGrid; ++i) {
    const double p = (i + 0.5) / kGrid;
    const double v = g(p);
    if ((prev_v < 0) != (v < 0)) {
      lo = prev_p;
      hi = p;
      break;
    }
    prev_p = p;
    prev_v = v;
  }
  if (std::isnan(lo)) throw InputError("no axis separation in (0,1) matches the third neck length");
  const bool lo_negative = g(lo) < 0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    ((g(mid) < 0) == lo_negative ? lo : hi) = mid;
  }
  const double p = 0.5 * (lo + hi);
  const auto [A, B] = make(p);
  const double commutator = (A * B * sl2_inverse(A) * sl2_inverse(B)).trace();
  if (!(commutator > 2))
    throw InputError("generators do not bound a pair of pants (tr[A,B] = " + fmt(commutator) + ")");

  // Sides of the fundamental domain: images of the common perpendicular
  // (the unit circle) under the half-translations.
  const Mat2 Ah = hyperbolic(l1 / 2, -1 / p, -p), Bh = hyperbolic(l2 / 2, 1 / p, p);
  const std::vector<Arc> arcs = {arc_through(Ah, -p), arc_through(Bh, p),
                                 arc_through(sl2_inverse(Ah), -1 / p), arc_through(sl2_inverse(Bh), 1 / p)};

  // Move the middle of the widest gap between arcs to infinity.
  struct Span {
    double start, end;
  };
  std::vector<Span> spans;
  for (const auto& a : arcs) {
    double s = angle(a.from), e = angle(a.to);
    if (e < s) e += kTwoPi;
    spans.push_back({s, e});
  }
  std::sort(spans.begin(), spans.end(), [](auto x, auto y) { return x.start < y.start; });
  double best_gap = -1, best_mid = 0;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const double end = spans[i].end;
    double next = spans[(i + 1) % spans.size()].start;
    while (next < end) next += kTwoPi;
    if (next - end > best_gap) {
      best_gap = next - end;
      best_mid = 0.5 * (end + next);
    }
  }
  const double gpt = std::tan(best_mid / 2);
  Mat2 phi;
  phi << 0, -1, 1, -gpt;
  const Mat2 phi_inv = sl2_inverse(phi);

  SchottkyData out;
  out.r = 2;
  for (const auto& a : arcs) out.intervals.push_back({mobius_apply(phi, a.from), mobius_apply(phi, a.to)});
  for (const Mat2& m : {A, B, sl2_inverse(A), sl2_inverse(B)}) out.generators.push_back(phi * m * phi_inv);

  const auto rep = validate_schottky(out);
  if (!rep.ok) throw InputError("three-funnel construction failed validation: " + rep.violation + ": " + rep.detail);
  return out;
}

SchottkyData builtin_schottky(const std::string& name) {
  if (name == "fig-sch1") {
    SchottkyData d;
    d.r = 2;
    d.intervals = {{-4, -3}, {-2, -1}, {0, 1}, {2, 3}};
    Mat2 g1, g2;
    g1 << 7, -3, -2, 1;
    g2 << 3, -7, -2, 5;
    d.generators = {g1, g2, sl2_inverse(g1), sl2_inverse(g2)};
    return d;
  }
  if (name == "three-funnel-233") return three_funnel_schottky(2, 3, 3);
  throw InputError("unknown builtin Schottky dataset: " + name);
}

std::vector<std::string> builtin_schottky_names() { return {"fig-sch1", "three-funnel-233"}; }

}  // namespace fup
