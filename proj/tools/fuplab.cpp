#include "fup/cantor1d.hpp"
#include "fup/cantor2d.hpp"
#include "fup/covers.hpp"
#include "fup/energy.hpp"
#include "fup/io.hpp"
#include "fup/measure.hpp"
#include "fup/parallel.hpp"
#include "fup/schottky.hpp"
#include "fup/table.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>
#include <map>
#include <sstream>

using namespace fup;

namespace {

enum ExitCode { kOk = 0, kInput = 2, kConvergence = 3, kBudget = 4 };

struct Globals {
  int threads = 0;
  std::string output;
  std::uint64_t seed = 20240131;
};

// ---------------------------------------------------------------------------
// parsing helpers

std::vector<int> parse_alphabet(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) throw InputError("empty alphabet entry in '" + s + "'");
    std::size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &pos);
    } catch (const std::exception&) {
      throw InputError("alphabet entry '" + tok + "' is not an integer");
    }
    if (pos != tok.size()) throw InputError("alphabet entry '" + tok + "' is not an integer");
    out.push_back(v);
  }
  if (out.empty()) throw InputError("alphabet must be nonempty");
  return out;
}

// "x:y,x:y,..."
Alphabet2 parse_alphabet2(const std::string& s) {
  Alphabet2 out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto colon = tok.find(':');
    if (colon == std::string::npos) throw InputError("2D digit '" + tok + "' must be written x:y");
    const auto xs = parse_alphabet(tok.substr(0, colon));
    const auto ys = parse_alphabet(tok.substr(colon + 1));
    if (xs.size() != 1 || ys.size() != 1) throw InputError("2D digit '" + tok + "' must be written x:y");
    out.push_back({xs[0], ys[0]});
  }
  if (out.empty()) throw InputError("alphabet must be nonempty");
  return out;
}

json alphabet2_json(const Alphabet2& A) {
  json j = json::array();
  for (const auto& d : A) j.push_back({d[0], d[1]});
  return j;
}

SchottkyData load_schottky(const std::string& builtin, const std::string& input) {
  if (!builtin.empty() && !input.empty()) throw InputError("give either --builtin or --input, not both");
  if (!input.empty()) return schottky_from_json(read_json_file(input));
  return builtin_schottky(builtin.empty() ? "fig-sch1" : builtin);
}

SchottkyData load_valid_schottky(const std::string& builtin, const std::string& input) {
  SchottkyData data = load_schottky(builtin, input);
  const auto rep = validate_schottky(data);
  if (!rep.ok) throw InputError("Schottky data invalid (" + rep.violation + "): " + rep.detail);
  return data;
}

json norm_json(const NormReport& r) {
  json j;
  j["r_k"] = r.r;
  j["beta_k"] = r.beta;
  j["method"] = r.method;
  j["iterations"] = r.iterations;
  j["residual"] = r.residual;
  if (r.schur_bound) j["schur_bound"] = *r.schur_bound;
  return j;
}

// Canonical "name=value" list over the options of the invoked subcommand
// chain; thread count and output path are excluded so they do not change
// the file contents.
std::string canonical_config(const CLI::App& root) {
  std::string out = "fuplab";
  const CLI::App* app = &root;
  std::vector<const CLI::App*> chain;
  while (true) {
    const auto subs = app->get_subcommands();
    if (subs.empty()) break;
    app = subs.front();
    chain.push_back(app);
  }
  for (const CLI::App* a : chain) out += " " + a->get_name();
  std::map<std::string, std::string> kv;
  auto collect = [&](const CLI::App* a) {
    for (const CLI::Option* opt : a->get_options()) {
      const std::string name = opt->get_single_name();
      if (name.empty() || name == "help" || name == "threads" || name == "output") continue;
      std::string v;
      if (opt->count() > 0) {
        for (const auto& r : opt->results()) v += (v.empty() ? "" : ";") + r;
      } else {
        v = opt->get_default_str();
      }
      kv[name] = v;
    }
  };
  collect(&root);
  for (const CLI::App* a : chain) collect(a);
  for (const auto& [k, v] : kv) out += " " + k + "=" + v;
  return out;
}

class Runner {
 public:
  Runner(const CLI::App& root, const Globals& g) : root_(root), g_(g) {}

  int threads() const { return g_.threads > 0 ? g_.threads : default_threads(); }

  void emit(const std::string& content) const {
    if (g_.output.empty() || g_.output == "-")
      std::cout << content;
    else
      write_file_atomic(g_.output, content);
  }

  void emit_table(ResultTable t) const { emit(t.to_csv(config_hash(canonical_config(root_)))); }

  void emit_json(json j) const {
    j["tool_version"] = kToolVersion;
    j["config_hash"] = config_hash(canonical_config(root_));
    emit(j.dump(2) + "\n");
  }

  std::uint64_t seed() const { return g_.seed; }

 private:
  const CLI::App& root_;
  const Globals& g_;
};

struct SourceOpts {
  std::string builtin;
  std::string input;
  int depth = 7;
  int cantor_k = 0;
  std::string cantor_A = "0,2";
  int cantor_M = 3;
};

void add_source_options(CLI::App* sub, SourceOpts& s) {
  sub->add_option("--builtin", s.builtin, "builtin Schottky dataset (fig-sch1, three-funnel-233)");
  sub->add_option("--input", s.input, "Schottky data JSON file");
  sub->add_option("--depth", s.depth, "refinement depth")->capture_default_str();
  sub->add_option("--cantor-k", s.cantor_k, "use the level-k Cantor measure instead of Schottky data")
      ->capture_default_str();
  sub->add_option("--cantor-M", s.cantor_M, "Cantor base")->capture_default_str();
  sub->add_option("--cantor-A", s.cantor_A, "Cantor alphabet")->capture_default_str();
}

WeightedCover load_measure(const SourceOpts& s) {
  if (s.cantor_k > 0) return cantor_measure(s.cantor_M, parse_alphabet(s.cantor_A), s.cantor_k);
  const SchottkyData data = load_valid_schottky(s.builtin, s.input);
  const double delta = estimate_dimension(data).delta;
  return ps_weights(refine(data, s.depth), delta);
}

std::vector<double> arithmetic(double lo, double hi, double step) {
  if (!(step > 0) || !(hi >= lo)) throw InputError("grid needs step > 0 and hi >= lo");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  if (n > (std::size_t{1} << 24)) throw BudgetError("grid has more than 2^24 points");
  return uniform_grid(lo, step, n);
}

std::vector<double> geometric(double lo, double hi, int count) {
  if (!(lo > 0) || !(hi >= lo) || count < 1) throw InputError("log grid needs 0 < lo <= hi and count >= 1");
  std::vector<double> out;
  for (int i = 0; i < count; ++i)
    out.push_back(count == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
  return out;
}

int report_error(const std::string& kind, const std::string& message, int code, const json& extra = {}) {
  json j;
  j["error"] = kind;
  j["message"] = message;
  j["exit_code"] = code;
  if (!extra.is_null()) j["details"] = extra;
  std::cerr << j.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fuplab: numerical experiments for fractal uncertainty principles"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--threads", g.threads, std::string("worker threads (default: $") + kThreadsEnv + " or all cores)");
  app.add_option("-o,--output", g.output, "output file (default: stdout)");
  app.add_option("--seed", g.seed, "seed for the randomized Krylov start vector")->capture_default_str();
  Runner run(app, g);
  std::function<void()> action;

  // ----------------------------------------------------------------- cantor
  auto* cantor = app.add_subcommand("cantor", "one-dimensional discrete Cantor sets");
  cantor->require_subcommand(1);
  int M = 3, k = 2, k_max = 6, k_cap = 6, k1 = 1, k2 = 1;
  std::string A = "0,2";
  double alpha = 1.0, tol = 1e-10, margin = 1e-10;
  bool with_schur = false;

  auto* c_norm = cantor->add_subcommand("norm", "operator norm r_k and exponent beta_k");
  c_norm->add_option("--M", M)->required();
  c_norm->add_option("--A", A)->required();
  c_norm->add_option("--k", k)->required();
  c_norm->add_option("--alpha", alpha)->capture_default_str();
  c_norm->add_option("--tol", tol)->capture_default_str();
  c_norm->add_flag("--schur", with_schur, "also report the Schur bound");
  c_norm->callback([&] {
    action = [&] {
      const CantorSpec1D spec{M, parse_alphabet(A), k};
      const auto rep = fup_norm(spec, {.alpha = alpha, .tol = tol, .with_schur = with_schur, .seed = run.seed()});
      json j = norm_json(rep);
      j["M"] = M;
      j["A"] = spec.A;
      j["k"] = k;
      j["N"] = spec.N();
      j["delta"] = spec.delta();
      j["alpha"] = alpha;
      j["hs_bound"] = std::pow(static_cast<double>(spec.N()), spec.delta() - 0.5);
      run.emit_json(j);
    };
  });

  std::int64_t max_points = 1 << 14;
  auto* c_exp = cantor->add_subcommand("exponent", "table of r_k and beta_k for k = 1..k_max");
  c_exp->add_option("--M", M)->required();
  c_exp->add_option("--A", A)->required();
  c_exp->add_option("--k-max", k_max)->capture_default_str();
  c_exp->add_option("--tol", tol)->capture_default_str();
  c_exp->add_option("--max-points", max_points)->capture_default_str();
  c_exp->callback([&] {
    action = [&] {
      const auto alph = parse_alphabet(A);
      const auto t = fup_exponent(M, alph, k_max, tol, max_points);
      ResultTable out({"k", "r_k", "beta_k"});
      for (const auto& r : t.rows) out.add_row({std::int64_t{r.k}, r.r, r.beta});
      out.truncated = t.truncated;
      out.meta.emplace_back("M", std::to_string(M));
      out.meta.emplace_back("alphabet_mask", std::to_string(alphabet_mask(alph)));
      out.meta.emplace_back("delta", format_double(dimension(M, alph.size())));
      out.meta.emplace_back("best", format_double(t.best));
      out.meta.emplace_back("best_k", std::to_string(t.best_k));
      run.emit_table(out);
    };
  });

  auto* c_wit = cantor->add_subcommand("witness", "smallest k with r_k < min(1, N^{delta-1/2}) - margin");
  c_wit->add_option("--M", M)->required();
  c_wit->add_option("--A", A)->required();
  c_wit->add_option("--k-cap", k_cap)->capture_default_str();
  c_wit->add_option("--margin", margin)->capture_default_str();
  c_wit->callback([&] {
    action = [&] {
      const auto alph = parse_alphabet(A);
      const auto w = strictness_witness(M, alph, k_cap, margin);
      json j;
      j["M"] = M;
      j["A"] = alph;
      j["k_cap"] = k_cap;
      j["witness_k"] = w.k ? json(*w.k) : json(nullptr);
      j["trace"] = json::array();
      for (const auto& r : w.trace) j["trace"].push_back({{"k", r.k}, {"r_k", r.r}, {"beta_k", r.beta}});
      run.emit_json(j);
    };
  });

  auto* c_sub = cantor->add_subcommand("submult", "check r_{k1+k2} <= r_{k1} r_{k2}");
  c_sub->add_option("--M", M)->required();
  c_sub->add_option("--A", A)->required();
  c_sub->add_option("--k1", k1)->required();
  c_sub->add_option("--k2", k2)->required();
  c_sub->callback([&] {
    action = [&] {
      const auto res = submultiplicativity_check(M, parse_alphabet(A), k1, k2);
      run.emit_json({{"pass", res.pass}, {"r_k1", res.r1}, {"r_k2", res.r2}, {"r_k1k2", res.r12}});
    };
  });

  ScanOptions scan;
  auto* c_scan = cantor->add_subcommand("scan", "all alphabets with 0 < delta < 1 and M <= M_max");
  c_scan->add_option("--M-max", scan.M_max)->capture_default_str();
  c_scan->add_option("--k", scan.k, "order (0: largest with M^k <= max-N)")->capture_default_str();
  c_scan->add_option("--max-N", scan.max_N)->capture_default_str();
  c_scan->add_option("--max-points", scan.max_points)->capture_default_str();
  c_scan->add_option("--alpha", scan.alpha)->capture_default_str();
  c_scan->add_option("--tol", scan.tol)->capture_default_str();
  c_scan->add_flag("--include-trivial", scan.include_trivial);
  c_scan->callback([&] {
    action = [&] {
      scan.threads = run.threads();
      run.emit_table(alphabet_scan(scan));
    };
  });

  double a_min = 1.0, a_max = 0.0, a_step = 0.01;
  auto* c_dil = cantor->add_subcommand("dilated-curve", "Schur bound of the dilated transform over alpha");
  c_dil->add_option("--M", M)->required();
  c_dil->add_option("--A", A)->required();
  c_dil->add_option("--k", k)->required();
  c_dil->add_option("--alpha-min", a_min)->capture_default_str();
  c_dil->add_option("--alpha-max", a_max, "default: M")->capture_default_str();
  c_dil->add_option("--alpha-step", a_step)->capture_default_str();
  c_dil->callback([&] {
    action = [&] {
      const auto grid = arithmetic(a_min, a_max > 0 ? a_max : M, a_step);
      run.emit_table(dilated_exponent_curve(M, parse_alphabet(A), k, grid, run.threads()));
    };
  });

  // ---------------------------------------------------------------- cantor2
  auto* cantor2 = app.add_subcommand("cantor2", "two-dimensional discrete Cantor sets");
  cantor2->require_subcommand(1);
  std::string A2 = "0:0", B2 = "0:0";
  auto spec2 = [&] { return CantorSpec2D{M, parse_alphabet2(A2), parse_alphabet2(B2), k}; };
  auto add_spec2 = [&](CLI::App* sub) {
    sub->add_option("--M", M)->required();
    sub->add_option("--A", A2, "digits x:y,x:y,...")->required();
    sub->add_option("--B", B2, "digits x:y,x:y,...")->required();
    sub->add_option("--k", k)->required();
  };
  auto* c2_norm = cantor2->add_subcommand("norm", "norm of 1_{C_A} F_{NxN} 1_{C_B}");
  add_spec2(c2_norm);
  c2_norm->add_option("--tol", tol)->capture_default_str();
  c2_norm->callback([&] {
    action = [&] {
      const auto spec = spec2();
      const auto rep = fup_norm2(spec, {.tol = tol, .seed = run.seed()});
      json j = norm_json(rep);
      j["M"] = M;
      j["k"] = k;
      j["A"] = alphabet2_json(spec.A);
      j["B"] = alphabet2_json(spec.B);
      j["delta_A"] = spec.delta_A();
      j["delta_B"] = spec.delta_B();
      j["easy_bound"] = easy_bound2(spec);
      run.emit_json(j);
    };
  });
  auto* c2_cls = cantor2->add_subcommand("classify", "pairing, exceptional lines and hds conditions");
  add_spec2(c2_cls);
  c2_cls->callback([&] {
    action = [&] {
      const auto spec = spec2();
      spec.validate();
      const auto pairing = check_nondegenerate_pairing(spec.A, spec.B);
      const auto ex = classify_exceptional(spec);
      const auto h1 = check_hds1(M, spec.A, spec.B);
      const auto h2 = check_hds2(M, spec.A, spec.B);
      json j;
      j["M"] = M;
      j["k"] = k;
      j["nondegenerate_pairing"] = pairing.nondegenerate;
      if (pairing.nondegenerate) {
        j["pairing_witness"] = json::array();
        for (const auto& d : pairing.witness) j["pairing_witness"].push_back({d[0], d[1]});
      }
      j["exceptional"] = to_string(ex.kind);
      if (ex.kind != ExceptionalKind::none)
        j["exceptional_witness"] = {{"A_first", ex.a_first}, {"s_first", ex.s_first}, {"s_second", ex.s_second}};
      j["hds1"] = {{"pass", h1.pass}, {"s", h1.s ? json(*h1.s) : json(nullptr)}, {"full_rows", h1.full_rows}};
      j["hds2"] = {{"pass", h2.pass}, {"st", h2.st ? json(*h2.st) : json(nullptr)}, {"B_full", h2.b_full}};
      run.emit_json(j);
    };
  });

  // --------------------------------------------------------------- schottky
  auto* sch = app.add_subcommand("schottky", "Schottky data and limit-set refinement");
  sch->require_subcommand(1);
  std::string builtin, input;
  int depth = 3, n_max = 14;
  bool all_levels = false;
  double dim_tol = 5e-4;
  auto add_data = [&](CLI::App* sub) {
    sub->add_option("--builtin", builtin, "fig-sch1 or three-funnel-233");
    sub->add_option("--input", input, "Schottky data JSON file");
  };
  auto* s_val = sch->add_subcommand("validate", "check the Schottky data invariants");
  add_data(s_val);
  s_val->callback([&] {
    action = [&] {
      const auto rep = validate_schottky(load_schottky(builtin, input));
      json j{{"ok", rep.ok}, {"violation", rep.violation}, {"detail", rep.detail}};
      run.emit_json(j);
      if (!rep.ok) throw InputError("Schottky data invalid (" + rep.violation + "): " + rep.detail);
    };
  });
  auto* s_ref = sch->add_subcommand("refine", "intervals I_w for words of length depth");
  add_data(s_ref);
  s_ref->add_option("--depth", depth)->capture_default_str();
  s_ref->add_flag("--all-levels", all_levels, "emit levels 1..depth");
  s_ref->callback([&] {
    action = [&] {
      const auto data = load_valid_schottky(builtin, input);
      ResultTable t({"level", "index", "word", "a", "b"});
      WordTree tree = refine(data, all_levels ? 1 : depth);
      for (int n = tree.depth;; ++n) {
        for (std::size_t i = 0; i < tree.size(); ++i) {
          std::string w;
          for (int letter : tree.word(i)) w += (w.empty() ? "" : ".") + std::to_string(letter + 1);
          const auto iv = tree.interval(i);
          t.add_row({std::int64_t{n}, static_cast<std::int64_t>(i), w, iv.a, iv.b});
        }
        if (n >= depth) break;
        tree = refine_next(data, tree);
      }
      t.meta.emplace_back("r", std::to_string(data.r));
      t.meta.emplace_back("depth", std::to_string(depth));
      run.emit_table(t);
    };
  });
  auto* s_dim = sch->add_subcommand("dimension", "pressure estimate of the limit-set dimension");
  add_data(s_dim);
  s_dim->add_option("--n-max", n_max)->capture_default_str();
  s_dim->add_option("--tol", dim_tol)->capture_default_str();
  s_dim->callback([&] {
    action = [&] {
      const auto est = estimate_dimension(load_valid_schottky(builtin, input), n_max, dim_tol);
      ResultTable t({"n", "delta", "words", "max_length", "total_length"});
      for (const auto& l : est.levels) t.add_row({std::int64_t{l.n}, l.delta, l.words, l.max_length, l.total_length});
      t.meta.emplace_back("delta", format_double(est.delta));
      t.meta.emplace_back("converged", est.converged ? "1" : "0");
      t.meta.emplace_back("level", std::to_string(est.level));
      run.emit_table(t);
    };
  });
  double l1 = 2, l2 = 3, l3 = 3;
  auto* s_tf = sch->add_subcommand("three-funnel", "Schottky data for a pair of pants with given neck lengths");
  s_tf->add_option("--l1", l1)->capture_default_str();
  s_tf->add_option("--l2", l2)->capture_default_str();
  s_tf->add_option("--l3", l3)->capture_default_str();
  s_tf->callback([&] { action = [&] { run.emit_json(schottky_to_json(three_funnel_schottky(l1, l2, l3))); }; });

  // ---------------------------------------------------------------- measure
  auto* meas = app.add_subcommand("measure", "fractal measures and their Fourier transforms");
  meas->require_subcommand(1);
  SourceOpts src;
  double xi_max = 1e4, xi_step = 0.1, fit_lo = 1e2, fit_hi = 1e4;
  int window = 25, bins = 10;
  auto fourier = [&] {
    const auto wc = load_measure(src);
    auto fs = fourier_transform_measure(wc, arithmetic(0, xi_max, xi_step), run.threads());
    if (fs.truncated) std::cerr << "warning: max |xi| * max interval length exceeds 0.5\n";
    return std::make_pair(wc, fs);
  };
  auto add_grid = [&](CLI::App* sub) {
    add_source_options(sub, src);
    sub->add_option("--xi-max", xi_max)->capture_default_str();
    sub->add_option("--xi-step", xi_step)->capture_default_str();
  };
  auto* m_four = meas->add_subcommand("fourier", "samples of the Fourier transform");
  add_grid(m_four);
  m_four->callback([&] {
    action = [&] {
      const auto [wc, fs] = fourier();
      ResultTable t({"xi", "re", "im", "abs"});
      for (std::size_t i = 0; i < fs.xi.size(); ++i)
        t.add_row({fs.xi[i], fs.values[i].real(), fs.values[i].imag(), std::abs(fs.values[i])});
      t.truncated = fs.truncated;
      t.meta.emplace_back("delta", format_double(wc.delta));
      run.emit_table(t);
    };
  });
  auto* m_env = meas->add_subcommand("envelope", "block maxima of |mu^|");
  add_grid(m_env);
  m_env->add_option("--window", window)->capture_default_str();
  m_env->callback([&] {
    action = [&] {
      const auto [wc, fs] = fourier();
      const auto env = envelope(fs, window);
      ResultTable t({"xi", "envelope"});
      for (std::size_t i = 0; i < env.xi.size(); ++i) t.add_row({env.xi[i], env.values[i].real()});
      t.truncated = fs.truncated;
      t.meta.emplace_back("delta", format_double(wc.delta));
      t.meta.emplace_back("window", std::to_string(window));
      run.emit_table(t);
    };
  });
  auto* m_slope = meas->add_subcommand("slope", "log-log decay fit of the envelope");
  add_grid(m_slope);
  m_slope->add_option("--window", window)->capture_default_str();
  m_slope->add_option("--fit-lo", fit_lo)->capture_default_str();
  m_slope->add_option("--fit-hi", fit_hi)->capture_default_str();
  m_slope->add_option("--bins-per-decade", bins)->capture_default_str();
  m_slope->callback([&] {
    action = [&] {
      const auto [wc, fs] = fourier();
      const auto fit = decay_slope(envelope(fs, window), fit_lo, fit_hi, bins);
      run.emit_json({{"exponent", fit.exponent},
                     {"fit_lo", fit.lo},
                     {"fit_hi", fit.hi},
                     {"points", fit.points},
                     {"residual", fit.residual},
                     {"delta", wc.delta},
                     {"beta_F", 2 * fit.exponent},
                     {"fup_exponent", fourier_fup_exponent(wc.delta, 2 * fit.exponent)},
                     {"truncated", fs.truncated}});
    };
  });
  int kk_min = 2, kk_max = 5, step_div = 4;
  auto* m_schur = meas->add_subcommand("schur-bound", "Schur bound for X = Y = middle third cover");
  m_schur->add_option("--k-min", kk_min)->capture_default_str();
  m_schur->add_option("--k-max", kk_max)->capture_default_str();
  m_schur->add_option("--step-div", step_div, "quadrature steps per cell")->capture_default_str();
  m_schur->callback([&] {
    action = [&] {
      if (kk_min < 1 || kk_max < kk_min) throw InputError("need 1 <= k-min <= k-max");
      ResultTable t({"k", "h", "bound", "baseline", "basic"});
      const double delta = std::log(2.0) / std::log(3.0);
      for (int kk = kk_min; kk <= kk_max; ++kk) {
        const double h = std::pow(3.0, -kk);
        const auto X = cantor_interval_cover(3, {0, 2}, kk);
        const auto b = schur_fup_bound(X, delta, X, h, h / step_div, run.threads());
        t.add_row({std::int64_t{kk}, h, b.bound, b.baseline, b.basic});
      }
      t.meta.emplace_back("delta", format_double(delta));
      run.emit_table(t);
    };
  });

  // ----------------------------------------------------------------- energy
  auto* en = app.add_subcommand("energy", "additive energy");
  en->require_subcommand(1);
  int ek_min = 4, ek_max = 9;
  auto* e_disc = en->add_subcommand("discrete", "additive energy of a discrete Cantor set");
  e_disc->add_option("--M", M)->required();
  e_disc->add_option("--A", A)->required();
  e_disc->add_option("--k", k)->required();
  e_disc->callback([&] {
    action = [&] {
      const CantorSpec1D spec{M, parse_alphabet(A), k};
      spec.validate();
      const auto set = build_cantor(spec);
      run.emit_json({{"M", M}, {"A", spec.A}, {"k", k}, {"size", set.size()}, {"E", additive_energy_discrete(set)}});
    };
  });
  auto* e_exp = en->add_subcommand("exponent", "fit of log E(C_k) against log N");
  e_exp->add_option("--M", M)->required();
  e_exp->add_option("--A", A)->required();
  e_exp->add_option("--k-min", ek_min)->capture_default_str();
  e_exp->add_option("--k-max", ek_max)->capture_default_str();
  e_exp->callback([&] {
    action = [&] {
      const auto fit = energy_exponent(M, parse_alphabet(A), ek_min, ek_max);
      ResultTable t({"k", "scale", "value"});
      for (std::size_t i = 0; i < fit.k.size(); ++i)
        t.add_row({std::int64_t{fit.k[i]}, checked_pow(M, fit.k[i]), fit.energy[i]});
      t.meta.emplace_back("delta", format_double(fit.delta));
      t.meta.emplace_back("beta_A", format_double(fit.beta_A));
      t.meta.emplace_back("residual", format_double(fit.residual));
      t.meta.emplace_back("fup_exponent", format_double(ae_fup_exponent(fit.delta, fit.beta_A)));
      run.emit_table(t);
    };
  });
  double h_min = 1e-4, h_max = 1e-1;
  int h_count = 13;
  auto* e_sch = en->add_subcommand("schottky", "Patterson-Sullivan additive energy over h");
  add_data(e_sch);
  e_sch->add_option("--depth", depth)->capture_default_str();
  e_sch->add_option("--h-min", h_min)->capture_default_str();
  e_sch->add_option("--h-max", h_max)->capture_default_str();
  e_sch->add_option("--h-count", h_count)->capture_default_str();
  e_sch->callback([&] {
    action = [&] {
      const auto data = load_valid_schottky(builtin, input);
      const double delta = estimate_dimension(data).delta;
      const auto wc = ps_weights(refine(data, depth), delta);
      const double y = wc.midpoints().front();
      Interval excluded{};
      for (const Interval& I : data.intervals)
        if (I.contains(y)) excluded = I;
      const auto hs = geometric(h_min, h_max, h_count);
      ResultTable t = ps_additive_energy_curve(wc, y, excluded, hs);
      if (hs.size() >= 2) {
        std::vector<double> m;
        for (std::size_t i = 0; i < t.rows.size(); ++i) m.push_back(t.number(i, "mass"));
        t.meta.emplace_back("slope", format_double(loglog_slope(hs, m)));
      }
      run.emit_table(t);
    };
  });

  // ----------------------------------------------------------------- covers
  auto* cov = app.add_subcommand("covers", "interval covers");
  cov->require_subcommand(1);
  std::string cover_file;
  int cover_cantor_k = 0, density = 8;
  double nu = 0, reg_delta = -1, C_R = 1, s_min = 0, s_max = INFINITY;
  auto* cv_check = cov->add_subcommand("check", "porosity and regularity verdicts");
  cv_check->add_option("--input", cover_file, "cover JSON {intervals, weights?}");
  cv_check->add_option("--cantor-k", cover_cantor_k, "middle third level-k cover");
  cv_check->add_option("--nu", nu, "porosity constant (0: skip)")->capture_default_str();
  cv_check->add_option("--delta", reg_delta, "regularity exponent (<0: skip)")->capture_default_str();
  cv_check->add_option("--C-R", C_R)->capture_default_str();
  cv_check->add_option("--alpha-min", s_min)->capture_default_str();
  cv_check->add_option("--alpha-max", s_max)->capture_default_str();
  cv_check->add_option("--density", density)->capture_default_str();
  cv_check->callback([&] {
    action = [&] {
      if (cover_file.empty() == (cover_cantor_k == 0)) throw InputError("give exactly one of --input, --cantor-k");
      IntervalCover cover;
      std::vector<double> weights;
      if (!cover_file.empty()) {
        cover = cover_from_json(read_json_file(cover_file), &weights);
      } else {
        cover = cantor_interval_cover(3, {0, 2}, cover_cantor_k);
        weights.assign(cover.size(), 1.0 / static_cast<double>(cover.size()));
      }
      json j;
      j["intervals"] = cover.size();
      j["volume"] = volume(cover);
      if (nu > 0) {
        const auto p = check_porosity(cover, {nu, s_min, s_max}, density);
        j["porosity"] = {{"pass", p.pass}, {"vacuous", p.vacuous}, {"tested", p.tested}};
        if (p.witness) j["porosity"]["witness"] = {p.witness->a, p.witness->b};
      }
      if (reg_delta >= 0) {
        if (weights.empty()) throw InputError("regularity needs weights");
        const auto r = check_regularity(cover, weights, {reg_delta, C_R, s_min, s_max}, density);
        j["regularity"] = {{"pass", r.pass}, {"tested", r.tested}};
        if (r.witness) j["regularity"]["witness"] = {r.witness->a, r.witness->b, r.witness_mass};
      }
      run.emit_json(j);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("input", e.what(), kInput);
  } catch (const InputError& e) {
    return report_error("input", e.what(), kInput);
  }

  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (action) action();
  } catch (const InputError& e) {
    return report_error("input", e.what(), kInput);
  } catch (const ConvergenceError& e) {
    return report_error("convergence", e.what(), kConvergence,
                        {{"last_value", e.last_value()}, {"last_residual", e.last_residual()}});
  } catch (const BudgetError& e) {
    return report_error("budget", e.what(), kBudget);
  } catch (const std::exception& e) {
    return report_error("internal", e.what(), 1);
  }
  std::cerr << "wall_time_s=" << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()
            << "\n";
  return kOk;
}
