#pragma once

// Command implementations behind the lgheat tool. Each command returns the
// JSON report (or the error object) and the process exit code; argument
// parsing lives in tools/lgheat.cpp.
//
// Exit codes: 0 ok, 1 parse/usage, 2 degenerate input or numerical failure,
// 3 McKean-Singer constancy violated, 4 unsupported, 5 verify suite failed.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lgheat/index.hpp"
#include "lgheat/parse.hpp"
#include "lgheat/spectral.hpp"
#include "lgheat/verify.hpp"
#include "lgheat/weights.hpp"

namespace lgheat::cli {

using nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kSchema = "1";

enum Exit { Ok = 0, ParseFailure = 1, Degenerate = 2, Constancy = 3, NotSupported = 4, VerifyFailed = 5 };

inline int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::Parse:
    case ErrorCode::VariableOutOfRange:
    case ErrorCode::NegativeExponent:
    case ErrorCode::InvalidArgument:
      return ParseFailure;
    case ErrorCode::ConstancyViolated:
      return Constancy;
    case ErrorCode::Unsupported:
      return NotSupported;
    default:
      return Degenerate;
  }
}

struct Output {
  int exit_code = Ok;
  json report;  // stdout on success
  json error;   // stderr otherwise
  std::string csv;  // replaces the JSON on stdout when set
};

inline std::uint64_t default_seed() {
  if (const char* s = std::getenv("LGHEAT_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "LGHEAT_SEED is not an integer");
    }
  }
  return 7;
}

namespace detail {

inline json manifest(const std::string& command, const std::string& poly, int n, std::uint64_t seed, json budgets) {
  return {{"command", command}, {"polynomial", poly}, {"n", n}, {"seed", seed}, {"budgets", std::move(budgets)}, {"version", kVersion}};
}

inline json rational(const Rational& r) { return r.get_str(); }

inline Output error_output(const Error& e) {
  Output o;
  o.exit_code = exit_code_for(e.code());
  o.error = {{"error", std::string(code_name(e.code()))}, {"message", e.what()}};
  return o;
}

inline MixedPolynomial parse_input(const std::string& text) {
  const int n = infer_variable_count(text);
  if (n < 1) throw Error(ErrorCode::Parse, "no variables z1..zn in the input");
  return parse_polynomial(text, n);
}

template <typename F>
Output guarded(json man, F&& body) {
  const auto start = std::chrono::steady_clock::now();
  try {
    Output o = body();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.csv.empty()) {
      json head = {{"schema", kSchema}, {"manifest", std::move(man)}};
      head.update(o.report);
      o.report = std::move(head);
      o.report["timing"] = {{"wall_seconds", secs}};
    }
    return o;
  } catch (const Error& e) {
    return error_output(e);
  }
}

}  // namespace detail

inline Output cmd_weights(const std::string& text) {
  const int n = infer_variable_count(text);
  return detail::guarded(detail::manifest("weights", text, n, 0, json::object()), [&] {
    const auto f = detail::parse_input(text);
    WeightVector w;
    try {
      w = solve_weights(f);
    } catch (const Error& e) {
      // A bilinear term is the more specific diagnosis (z1*z2 has no unique weights either).
      if (e.code() == ErrorCode::WeightsNotUnique) nondegeneracy_check(f);
      throw;
    }
    const auto nd = nondegeneracy_check(f);
    const auto tr = tameness_report(w, nd);
    const long mu = milnor_oracle(w);
    json q = json::array();
    for (const auto& x : w.q) q.push_back(detail::rational(x));
    Output o;
    o.report = {{"tag", "exact"},
                {"q", q},
                {"mu", mu},
                {"tameness",
                 {{"q_max", detail::rational(tr.q_max)},
                  {"q_min", detail::rational(tr.q_min)},
                  {"gap", detail::rational(tr.gap)},
                  {"delta", detail::rational(tr.delta)},
                  {"delta2", detail::rational(tr.delta2)},
                  {"delta3", detail::rational(tr.delta3)}}},
                {"condition_13", tr.condition_13},
                {"nondegeneracy",
                 {{"no_bilinear", nd.no_bilinear},
                  {"isolated_witness", nd.isolated_witness},
                  {"heuristic", nd.heuristic},
                  {"samples", nd.samples},
                  {"min_gradient", nd.min_gradient},
                  {"growth_constant", nd.fitted_C}}}};
    return o;
  });
}

struct IndexArgs {
  std::vector<double> t{0.5, 1.0, 2.0};
  std::size_t samples = 1000000;
  std::uint64_t seed = 7;
  std::string method = "mc";
  int strata = 64;
  int nodes = 0;
  bool csv = false;
};

inline Output cmd_index(const std::string& text, const IndexArgs& a) {
  const int n = infer_variable_count(text);
  const json budgets = {{"t", a.t}, {"samples", a.samples}, {"method", a.method}, {"strata", a.strata}, {"nodes", a.nodes}};
  return detail::guarded(detail::manifest("index", text, n, a.seed, budgets), [&] {
    IndexOptions o;
    if (a.method == "mc") {
      o.method = IndexMethod::MonteCarlo;
    } else if (a.method == "quadrature") {
      o.method = IndexMethod::Quadrature;
    } else {
      throw Error(ErrorCode::InvalidArgument, "method must be mc or quadrature");
    }
    o.samples = a.samples;
    o.seed = a.seed;
    o.strata = a.strata;
    o.nodes = a.nodes;
    const auto f = detail::parse_input(text);
    const auto w = solve_weights(f);
    const long mu = milnor_oracle(w);
    const auto nd = nondegeneracy_check(f);
    const auto res = mckean_singer_check(f, nd, a.t, o);
    Output out;
    if (a.csv) {
      out.csv = res.csv();
      return out;
    }
    json per = json::array();
    for (const auto& e : res.entries) {
      per.push_back({{"t", e.t}, {"value", e.estimate}, {"stderr", e.std_error}, {"samples", e.samples}, {"seed", e.seed}});
    }
    out.report = {{"method", method_name(o.method)},
                  {"estimates", per},
                  {"pooled", {{"value", res.pooled}, {"stderr", res.pooled_stderr}}},
                  {"mu_rounded", res.mu_rounded},
                  {"mu_oracle", {{"value", mu}, {"tag", "exact"}}},
                  {"max_pairwise_z", res.max_z},
                  {"grid_spans_decade", res.grid_spans_decade},
                  {"pass", res.mu_rounded == mu}};
    return out;
  });
}

struct TorsionArgs {
  int basis = 60;
  int sectors = 0;
  bool exact = false;
  int threads = 1;
};

inline json zeta_json(const ZetaResult& z) {
  json j = {{"path", z.path}, {"T2", z.torsion}, {"log_T2", z.log_torsion}, {"zeta_prime_0", z.derivative_at_zero}};
  if (z.path == "exact") {
    j["tag"] = "exact";
  } else {
    j["error"] = z.error;
    j["T2_error"] = z.torsion * z.error;
    j["fit_condition"] = z.fit_condition;
  }
  json terms = json::array();
  for (std::size_t k = 0; k < z.exponents.size(); ++k) terms.push_back({{"exponent", z.exponents[k]}, {"coefficient", z.coefficients[k]}});
  j["small_t_terms"] = terms;
  return j;
}

inline Output cmd_torsion(const std::string& text, const TorsionArgs& a) {
  const int n = infer_variable_count(text);
  const json budgets = {{"basis", a.basis}, {"sectors", a.sectors}, {"exact", a.exact}, {"threads", a.threads}};
  return detail::guarded(detail::manifest("torsion", text, n, 0, budgets), [&] {
    const auto f = detail::parse_input(text);
    if (f.nvars() != 1) throw Error(ErrorCode::Unsupported, "torsion handles one variable only");
    const auto tau = oscillator_abs_tau(f);
    if (a.exact && !tau) throw Error(ErrorCode::Unsupported, "closed form exists only for tau z^2 / 2");
    GalerkinConfig cfg;
    cfg.basis_size = a.basis;
    cfg.sector_cutoff = a.sectors;
    cfg.threads = a.threads;
    const auto g = eigensolve(f, cfg);
    const auto num = torsion_numeric(g);
    Output out;
    json numeric = zeta_json(num);
    numeric["omega"] = g.omega;
    numeric["sectors"] = g.sector_cutoff;
    numeric["reliable_below"] = g.spectrum.reliable_below;
    if (tau) {
      const auto ex = torsion_oscillator_exact(*tau);
      out.report = a.exact ? zeta_json(ex) : numeric;
      out.report["abs_tau"] = *tau;
      out.report["exact"] = zeta_json(ex);
      out.report["numeric"] = numeric;
      out.report["difference"] = {{"T2", num.torsion - ex.torsion}, {"log_T2", num.log_torsion - ex.log_torsion}};
    } else {
      out.report = numeric;
      out.report["numeric"] = numeric;
    }
    return out;
  });
}

inline Output cmd_verify(const std::string& suite, std::uint64_t seed) {
  return detail::guarded(detail::manifest("verify", "", 0, seed, {{"suite", suite}}), [&] {
    std::vector<std::string> names;
    if (suite == "all") {
      names = verify_suite_names();
    } else {
      names = {suite};
    }
    Output out;
    json suites = json::array();
    json failing = json::array();
    bool all = true;
    for (const auto& name : names) {
      const SuiteResult r = run_verify_suite(name, seed);
      json checks = json::array();
      for (const auto& c : r.checks) {
        checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        if (!c.pass) failing.push_back(name + ": " + c.name + (c.detail.empty() ? "" : " (" + c.detail + ")"));
      }
      suites.push_back({{"suite", name}, {"pass", r.pass()}, {"checks", checks}});
      all = all && r.pass();
    }
    out.report = {{"suites", suites}, {"pass", all}, {"failing", failing}};
    if (!all) {
      out.exit_code = VerifyFailed;
      out.error = {{"error", "VerifyFailed"}, {"message", "verification failed"}, {"failing", failing}};
    }
    return out;
  });
}

/// Report without the wall-clock field, for byte comparisons.
inline std::string stable_dump(const json& report) {
  json j = report;
  j.erase("timing");
  return j.dump();
}

}  // namespace lgheat::cli
