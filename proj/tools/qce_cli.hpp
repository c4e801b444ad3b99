#pragma once

// Command-line front end: subcommand dispatch, text and JSON output.

#include <qce/arith.hpp>
#include <qce/component_groups.hpp>
#include <qce/errors.hpp>
#include <qce/explicit_bounds.hpp>
#include <qce/isogeny_bounds.hpp>
#include <qce/parallel.hpp>
#include <qce/runge.hpp>
#include <qce/trace_formula.hpp>
#include <qce/verify.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace qce::cli {

using json = nlohmann::ordered_json;

/// Serializes with every floating-point value printed to 17 significant digits;
/// non-finite values become the strings "inf", "-inf", "nan".
inline void write_json(const json& j, std::string& out) {
  switch (j.type()) {
    case json::value_t::null: out += "null"; break;
    case json::value_t::boolean: out += j.get<bool>() ? "true" : "false"; break;
    case json::value_t::number_integer: out += std::to_string(j.get<std::int64_t>()); break;
    case json::value_t::number_unsigned: out += std::to_string(j.get<std::uint64_t>()); break;
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isnan(v)) {
        out += "\"nan\"";
      } else if (std::isinf(v)) {
        out += v > 0 ? "\"inf\"" : "\"-inf\"";
      } else {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out += buf;
        // Keep the value a float on round trip.
        if (std::string(buf).find_first_of(".eEn") == std::string::npos) out += ".0";
      }
      break;
    }
    case json::value_t::string: out += json(j.get<std::string>()).dump(); break;
    case json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& x : j) {
        if (!first) out += ',';
        first = false;
        write_json(x, out);
      }
      out += ']';
      break;
    }
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ',';
        first = false;
        out += json(k).dump();
        out += ':';
        write_json(v, out);
      }
      out += '}';
      break;
    }
    default: out += "null";
  }
}

inline std::string to_json_string(const json& j) {
  std::string s;
  write_json(j, s);
  return s;
}

inline json complex_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

inline std::string rational_string(const Rational& r) {
  return r.denominator() == 1 ? std::to_string(r.numerator())
                              : std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

/// Outcome of one subcommand before rendering.
struct Outcome {
  json inputs = json::object();
  json result = json::object();
  std::optional<bool> certified;
  std::optional<std::string> mode;
  std::string text;  // human-readable rendering
  int exit_code = 0;
};

struct GlobalOptions {
  bool json_out = false;
  bool quiet = false;
  bool timing = false;
  int threads = 0;
  std::string out_path;
};

// ---------------------------------------------------------------------------
// Handlers.

inline Outcome cmd_kloosterman(i64 m, i64 n, u64 c, bool fast) {
  if (c < 1) throw DomainError("modulus must be positive");
  Outcome o;
  o.inputs = {{"m", m}, {"n", n}, {"c", c}, {"fast", fast}};
  const double v = fast ? kloosterman_fast(m, n, c) : kloosterman_direct(m, n, c);
  const auto b = weil_bound(m, n, c);
  json all = json::array();
  for (const auto& w : weil_bounds_all(m, n, c)) all.push_back({{"case", to_string(w.tag)}, {"bound", w.bound_value}});
  o.result = {{"value", v}, {"weil_bound", b.bound_value}, {"weil_case", to_string(b.tag)}, {"all_bounds", all}};
  std::ostringstream s;
  s.precision(17);
  s << "S(" << m << "," << n << ";" << c << ") = " << v << "\nWeil bound (" << to_string(b.tag)
    << ") = " << b.bound_value << "\n";
  o.text = s.str();
  return o;
}

inline Outcome cmd_gauss_sum(u64 D) {
  const auto chi = make_character(D);
  const auto g = gauss_sum(chi);
  Outcome o;
  o.inputs = {{"D", D}};
  o.result = {{"re", g.real()}, {"im", g.imag()}, {"abs_squared", std::norm(g)}};
  std::ostringstream s;
  s.precision(17);
  s << "G(chi_" << D << ") = " << g.real() << " + " << g.imag() << "i, |G|^2 = " << std::norm(g) << "\n";
  o.text = s.str();
  return o;
}

inline Outcome cmd_character(u64 D, i64 n) {
  const auto chi = make_character(D);
  Outcome o;
  o.inputs = {{"D", D}, {"n", n}};
  o.result = {{"value", chi(n)}};
  o.text = "chi_" + std::to_string(D) + "(" + std::to_string(n) + ") = " + std::to_string(chi(n)) + "\n";
  return o;
}

inline CertMode parse_mode(const std::string& s) {
  if (s == "closed-form") return CertMode::closed_form;
  if (s == "numeric" || s == "numeric-advisory") return CertMode::numeric_advisory;
  if (s == "weil-mix") return CertMode::weil_mix;
  throw DomainError("unknown mode '" + s + "'");
}

inline Outcome cmd_certify(u64 D, u64 p, const std::string& mode_s, double rel_tol) {
  const auto chi = make_character(D);
  const CertMode mode = parse_mode(mode_s);
  NumericOptions opt;
  opt.rel_tol = rel_tol;
  const auto c = certify_nonvanishing(p, chi, mode, opt);
  Outcome o;
  o.inputs = {{"D", D}, {"p", p}, {"mode", to_string(mode)}, {"rel_tol", rel_tol}};
  const auto& C = c.components;
  json comp = {{"first_term", C.first_term}, {"A1", C.A1}, {"A2", C.A2}, {"A3", C.A3},
               {"B1", C.B1},                 {"B2", C.B2}, {"B3", C.B3}, {"assembled", C.assembled}};
  comp["display"] = std::isnan(C.display) ? json(nullptr) : json(C.display);
  o.result = {{"verdict", to_string(c.verdict)},
              {"lower_bound", c.lower_bound},
              {"paper_exact", c.paper_exact},
              {"components", comp},
              {"diagnostic", c.diagnostic}};
  o.certified = c.verdict == Verdict::certified_positive;
  o.mode = to_string(mode);
  o.exit_code = *o.certified ? 0 : 1;
  std::ostringstream s;
  s.precision(10);
  s << to_string(c.verdict) << " (" << to_string(mode) << "), lower bound " << c.lower_bound << "\n";
  if (!c.diagnostic.empty()) s << c.diagnostic << "\n";
  o.text = s.str();
  return o;
}

inline json numeric_json(const NumericValue& v) {
  return {{"value", v.value},         {"error_bound", v.error_bound}, {"n_tail", v.n_tail_total},
          {"modulus_tail", v.modulus_tail}, {"moduli", v.moduli},     {"last_modulus", v.last_modulus},
          {"terms", v.terms},         {"reached_tolerance", v.reached_tolerance}};
}

inline Outcome cmd_pairing(u64 m, u64 N, u64 D, double rel_tol) {
  const auto chi = make_character(D);
  NumericOptions opt;
  opt.rel_tol = rel_tol;
  const PairingParams P(m, N, chi);
  const auto A = A_numeric(P, opt);
  const auto B = B_numeric(P, opt);
  const auto pr = pairing_numeric(m, N, chi, opt);
  Outcome o;
  o.inputs = {{"m", m}, {"N", N}, {"D", D}, {"rel_tol", rel_tol}};
  o.result = {{"value", pr.value}, {"error_bound", pr.error_bound}, {"A", numeric_json(A)}, {"B", numeric_json(B)}};
  try {
    o.result["A_bound"] = A_bound(m, chi, N);
    o.result["B_bound"] = B_bound(m, chi, N);
  } catch (const UnsupportedCase&) {
    o.result["A_bound"] = nullptr;
    o.result["B_bound"] = nullptr;
  }
  std::ostringstream s;
  s.precision(12);
  s << "(a_" << m << ", L_chi)_" << N << " = " << pr.value << " +/- " << pr.error_bound << "\n"
    << "A = " << A.value << " +/- " << A.error_bound << ", B = " << B.value << " +/- " << B.error_bound << "\n";
  o.text = s.str();
  return o;
}

inline Outcome cmd_threshold(u64 D) {
  if (!is_fundamental(-static_cast<i64>(D))) throw NotFundamental("-" + std::to_string(D) + " is not fundamental");
  Outcome o;
  o.inputs = {{"D", D}};
  const double t = nonsplit_threshold(D);
  o.result = {{"threshold", t}, {"certificate_prime", certificate_prime(D)}};
  std::ostringstream s;
  s.precision(12);
  s << "50 D^(1/4) log D = " << t << ", least usable prime " << certificate_prime(D) << "\n";
  o.text = s.str();
  return o;
}

inline Outcome cmd_thresholds(u64 D) {
  const auto t = main_thresholds(D);
  Outcome o;
  o.inputs = {{"D", D}};
  o.result = {{"borel", t.borel},
              {"split_cartan", t.split_cartan},
              {"nonsplit_cartan", t.nonsplit_cartan},
              {"exceptional", t.exceptional}};
  std::ostringstream s;
  s.precision(17);
  s << "borel " << t.borel << "\nsplit cartan " << t.split_cartan << "\nnonsplit cartan " << t.nonsplit_cartan
    << "\nexceptional " << t.exceptional << "\n";
  o.text = s.str();
  return o;
}

inline Outcome cmd_sweep(const std::string& which, u64 d_max) {
  SearchCase c;
  if (which == "borel")
    c = SearchCase::borel;
  else if (which == "cartan")
    c = SearchCase::cartan;
  else
    throw DomainError("case must be borel or cartan");
  const auto r = contradiction_search(c, d_max);
  Outcome o;
  o.inputs = {{"case", which}, {"d_max", d_max}};
  o.result = {{"max_allowed_p", r.max_allowed_p}, {"argmax_d", r.argmax_d}, {"h_F_at_argmax", r.h_F_at_argmax}};
  std::ostringstream s;
  s.precision(10);
  s << which << ": max allowed p = " << r.max_allowed_p << " at d = " << r.argmax_d << "\n";
  o.text = s.str();
  return o;
}

inline Outcome cmd_runge_bound(u64 p) {
  if (p < 2) throw DomainError("p must be at least 2");
  Outcome o;
  o.inputs = {{"p", p}};
  const double b = runge_j_bound(p);
  o.result = {{"bound", b}};
  std::ostringstream s;
  s.precision(12);
  s << "log|j| <= " << b << "\n";
  o.text = s.str();
  return o;
}

inline json mat_json(const Mat2& m) { return json::array({json::array({m.a, m.b}), json::array({m.c, m.d})}); }

inline Outcome cmd_reduce_tau(double re, double im, std::optional<u64> p) {
  const UpperHalfPoint t(re, im);
  const auto r = reduce_to_fundamental_domain(t);
  Outcome o;
  o.inputs = {{"re", re}, {"im", im}};
  o.result = {{"reduced", {{"re", r.tau.re}, {"im", r.tau.im}}},
              {"gamma", mat_json(r.gamma)},
              {"abs_q", r.tau.abs_q()},
              {"iterations", r.iterations}};
  std::ostringstream s;
  s.precision(15);
  s << "reduced tau = " << r.tau.re << " + " << r.tau.im << "i, |q| = " << r.tau.abs_q() << "\n";
  if (p) {
    if (!is_prime(*p)) throw NotPrime(std::to_string(*p) + " is not prime");
    o.inputs["p"] = *p;
    const auto loc = locate_near_cusp(t, *p);
    o.result["cusp"] = to_string(loc.cusp);
    o.result["cusp_tau"] = {{"re", loc.tau.re}, {"im", loc.tau.im}};
    o.result["cusp_gamma"] = mat_json(loc.gamma);
    s << "near " << to_string(loc.cusp) << ", representative " << loc.tau.re << " + " << loc.tau.im << "i\n";
  }
  o.text = s.str();
  return o;
}

inline Outcome cmd_unit_g(double re, double im, u64 p) {
  if (!is_prime(p)) throw NotPrime(std::to_string(p) + " is not prime");
  const UpperHalfPoint t(re, im);
  const cplx lg = log_unit_g(t, p);
  Outcome o;
  o.inputs = {{"re", re}, {"im", im}, {"p", p}};
  o.result = {{"log_abs", lg.real()}, {"value", complex_json(std::exp(lg))}};
  std::ostringstream s;
  s.precision(15);
  s << "g(tau) = " << std::exp(lg) << ", log|g| = " << lg.real() << "\n";
  o.text = s.str();
  return o;
}

inline Outcome cmd_j_invariant(double re, double im) {
  const UpperHalfPoint t(re, im);
  const cplx j = j_invariant(t);
  Outcome o;
  o.inputs = {{"re", re}, {"im", im}};
  o.result = {{"value", complex_json(j)}, {"abs", std::abs(j)}};
  std::ostringstream s;
  s.precision(15);
  s << "j(tau) = " << j << "\n";
  o.text = s.str();
  return o;
}

inline Outcome cmd_component_group(u64 p, u64 e) {
  const auto cg = component_group(p, e);
  Outcome o;
  o.inputs = {{"p", p}, {"e", e}};
  json gens = json::object();
  for (const auto& name : cg.generator_names) gens[name] = cg.generator_images.at(name);
  o.result = {{"invariant_factors", cg.group.factors},
              {"expected_factors", cg.expected_factors},
              {"n", cg.n},
              {"S", cg.counts.S},
              {"S_prime", cg.counts.S_prime},
              {"I", cg.counts.I},
              {"R", cg.counts.R},
              {"generator_images", gens},
              {"matches_closed_form", cg.matches_closed_form},
              {"zbar_order_is_n", cg.zbar_order_is_n},
              {"e_phi_in_zbar", cg.e_phi_in_zbar},
              {"chain_sum_zero", cg.chain_sum_zero}};
  const bool ok = cg.matches_closed_form && cg.zbar_order_is_n && cg.e_phi_in_zbar && cg.chain_sum_zero &&
                  cg.chain_values_ok;
  o.exit_code = ok ? 0 : 1;
  o.text = "Phi = " + format_factors(cg.group.factors) + " (n = " + std::to_string(cg.n) +
           ", S = " + std::to_string(cg.counts.S) + ")" + (ok ? "" : "  [postcondition failed]") + "\n";
  return o;
}

inline Outcome cmd_rho_table(u64 p, u64 e) {
  const auto rs = rho_value_set(p, e);
  Outcome o;
  o.inputs = {{"p", p}, {"e", e}};
  json vals = json::array(), cands = json::array();
  std::string txt;
  for (const auto& v : rs.values) {
    vals.push_back(rational_string(v));
    txt += (txt.empty() ? "" : ", ") + rational_string(v);
  }
  for (const auto& c : rs.candidates)
    cands.push_back({{"label", c.label}, {"value", rational_string(c.value)}, {"log", c.log},
                     {"consistent", c.consistent}});
  o.result = {{"values", vals}, {"n", rs.n}, {"p_mod_12", rs.p_class}, {"candidates", cands},
              {"all_consistent", rs.all_consistent}};
  o.exit_code = rs.all_consistent ? 0 : 1;
  o.text = "rho values: {" + txt + "}\n";
  return o;
}

inline Outcome cmd_two_torsion(u64 p) {
  const auto rep = two_torsion_report(p);
  Outcome o;
  o.inputs = {{"p", p}};
  o.result = {{"obstruction", rep.obstruction}, {"rational_rule", rep.rational_rule}, {"hits", rep.hits}};
  o.text = std::string("n/2 attained: ") + (rep.obstruction ? "yes" : "no") + "\n";
  return o;
}

inline Outcome cmd_verify(const std::string& suite, u64 max_c, u64 seed, unsigned threads) {
  VerifyOptions vo;
  vo.max_c = max_c;
  vo.seed = seed;
  vo.threads = threads;
  std::vector<std::string> names;
  if (suite == "all")
    names = suite_names();
  else
    names = {suite};
  Outcome o;
  o.inputs = {{"suite", suite}, {"max_c", max_c}, {"seed", seed}};
  json suites = json::array();
  bool all_pass = true;
  std::string txt;
  for (const auto& n : names) {
    const auto r = run_suite(n, vo);
    json checks = json::array();
    for (const auto& c : r.checks) {
      checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
      txt += std::string(c.pass ? "  ok   " : "  FAIL ") + r.suite + "/" + c.name + ": " + c.detail + "\n";
    }
    suites.push_back({{"suite", r.suite}, {"pass", r.pass()}, {"checks", checks}});
    all_pass = all_pass && r.pass();
  }
  o.result = {{"pass", all_pass}, {"suites", suites}};
  o.exit_code = all_pass ? 0 : 1;
  o.text = txt + (all_pass ? "all checks passed\n" : "some checks FAILED\n");
  return o;
}

// ---------------------------------------------------------------------------

inline int emit(const std::string& command, const Outcome& o, const GlobalOptions& g, double elapsed_ms) {
  json doc;
  doc["command"] = command;
  doc["inputs"] = o.inputs;
  doc["result"] = o.result;
  if (o.certified) doc["certified"] = *o.certified;
  if (o.mode) doc["mode"] = *o.mode;
  if (g.timing) doc["elapsed_ms"] = static_cast<std::int64_t>(std::llround(elapsed_ms));
  const std::string js = to_json_string(doc);
  if (!g.quiet) {
    if (g.json_out)
      std::cout << js << "\n";
    else {
      std::cout << o.text;
      if (g.timing) std::cout << "elapsed " << std::llround(elapsed_ms) << " ms\n";
    }
  }
  if (!g.out_path.empty()) {
    std::ofstream f(g.out_path);
    if (!f) {
      std::cerr << "error: cannot write " << g.out_path << "\n";
      return 2;
    }
    f << js << "\n";
  }
  return o.exit_code;
}

inline int run(int argc, const char* const* argv) {
  CLI::App app{"qce: explicit bounds and certificates for Q-curve surjectivity"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions g;
  app.add_flag("--json", g.json_out, "Emit a JSON CommandResult");
  app.add_flag("--quiet", g.quiet, "Suppress standard output");
  app.add_flag("--timing", g.timing, "Report elapsed_ms (makes output time-dependent)");
  app.add_option("--threads", g.threads, "Worker threads (default: QCE_THREADS or 1)")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out_path, "Also write the JSON result to this file");

  std::function<Outcome()> handler;
  std::string command;
  auto sub = [&](const std::string& name, const std::string& help) {
    auto* s = app.add_subcommand(name, help);
    s->callback([&command, name] { command = name; });
    return s;
  };

  i64 km = 0, kn = 0;
  u64 kc = 1;
  bool kfast = false;
  auto* k = sub("kloosterman", "Kloosterman sum S(m,n;c) and its Weil bounds");
  k->add_option("m", km)->required();
  k->add_option("n", kn)->required();
  k->add_option("c", kc)->required();
  k->add_flag("--fast", kfast, "Use the multiplicative splitting");

  u64 gD = 0;
  sub("gauss-sum", "Gauss sum of chi_D")->add_option("D", gD)->required();

  u64 cD = 0;
  i64 cn = 0;
  auto* ch = sub("character", "chi_D(n)");
  ch->add_option("D", cD)->required();
  ch->add_option("n", cn)->required();

  u64 disc = 0, prime = 0, level = 0, mcoef = 1, ram = 1, d_max = 1'000'000, max_c = 400, seed = 20240229;
  std::string mode = "closed-form", suite = "all", which = "borel";
  double rel_tol = 1e-8, re = 0.0, im = 1.0;
  std::optional<u64> opt_prime;

  auto* ce = sub("certify", "Nonvanishing certificate for (D, p)");
  ce->add_option("--disc", disc)->required();
  ce->add_option("--prime", prime)->required();
  ce->add_option("--mode", mode)->check(CLI::IsMember({"closed-form", "numeric", "numeric-advisory", "weil-mix"}));
  ce->add_option("--rel-tol", rel_tol)->check(CLI::PositiveNumber);

  auto* pa = sub("pairing", "Trace-formula pairing (a_m, L_chi)_N by series");
  pa->add_option("--m", mcoef)->required();
  pa->add_option("--level", level)->required();
  pa->add_option("--disc", disc)->required();
  pa->add_option("--rel-tol", rel_tol)->check(CLI::PositiveNumber);

  sub("threshold", "Nonsplit Cartan threshold 50 D^(1/4) log D")->add_option("--disc", disc)->required();
  sub("thresholds", "Full threshold report")->add_option("--disc", disc)->required();

  auto* sw = sub("sweep", "Sharp degree sweep behind the Borel / split Cartan thresholds");
  sw->add_option("--case", which)->check(CLI::IsMember({"borel", "cartan"}));
  sw->add_option("--d-max", d_max)->check(CLI::Range(u64{2}, u64{100'000'000}));

  sub("runge-bound", "Bound on log|j| at integral points")->add_option("--prime", prime)->required();

  auto* rt = sub("reduce-tau", "Reduce tau to the fundamental domain and locate the nearest cusp");
  rt->add_option("--re", re)->required();
  rt->add_option("--im", im)->required();
  rt->add_option("--prime", opt_prime);

  auto* ug = sub("unit-g", "Modular unit Delta(tau)/Delta(p tau)");
  ug->add_option("--re", re)->required();
  ug->add_option("--im", im)->required();
  ug->add_option("--prime", prime)->required();

  auto* ji = sub("j-invariant", "j(tau)");
  ji->add_option("--re", re)->required();
  ji->add_option("--im", im)->required();

  auto* cg = sub("component-group", "Component group of J_0(p) for ramification index e");
  cg->add_option("--prime", prime)->required();
  cg->add_option("--ram", ram)->required();

  auto* rh = sub("rho-table", "Possible rho-values of g(P)");
  rh->add_option("--prime", prime)->required();
  rh->add_option("--ram", ram)->required();

  sub("two-torsion", "Whether n/2 is a possible rho-value")->add_option("--prime", prime)->required();

  auto* ve = sub("verify", "Run property suites");
  std::vector<std::string> suites = suite_names();
  suites.push_back("all");
  ve->add_option("--suite", suite)->check(CLI::IsMember(suites));
  ve->add_option("--max-c", max_c)->check(CLI::Range(u64{1}, u64{5000}));
  ve->add_option("--seed", seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  try {
    Outcome o;
    const unsigned threads = resolve_threads(g.threads);
    if (command == "kloosterman") o = cmd_kloosterman(km, kn, kc, kfast);
    else if (command == "gauss-sum") o = cmd_gauss_sum(gD);
    else if (command == "character") o = cmd_character(cD, cn);
    else if (command == "certify") o = cmd_certify(disc, prime, mode, rel_tol);
    else if (command == "pairing") o = cmd_pairing(mcoef, level, disc, rel_tol);
    else if (command == "threshold") o = cmd_threshold(disc);
    else if (command == "thresholds") o = cmd_thresholds(disc);
    else if (command == "sweep") o = cmd_sweep(which, d_max);
    else if (command == "runge-bound") o = cmd_runge_bound(prime);
    else if (command == "reduce-tau") o = cmd_reduce_tau(re, im, opt_prime);
    else if (command == "unit-g") o = cmd_unit_g(re, im, prime);
    else if (command == "j-invariant") o = cmd_j_invariant(re, im);
    else if (command == "component-group") o = cmd_component_group(prime, ram);
    else if (command == "rho-table") o = cmd_rho_table(prime, ram);
    else if (command == "two-torsion") o = cmd_two_torsion(prime);
    else if (command == "verify") o = cmd_verify(suite, max_c, seed, threads);
    else {
      std::cerr << "error: unknown command\n";
      return 2;
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return emit(command, o, g, ms);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace qce::cli
