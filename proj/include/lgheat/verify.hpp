#pragma once

// Self-check suites behind `lgheat verify`. Each check is a named boolean
// with a short detail string; a suite passes when every check does.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lgheat/clifford.hpp"
#include "lgheat/index.hpp"
#include "lgheat/oscillator.hpp"
#include "lgheat/parametrix.hpp"
#include "lgheat/parse.hpp"
#include "lgheat/spectral.hpp"
#include "lgheat/weights.hpp"

namespace lgheat {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::vector<Check> checks;

  bool pass() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }
  void add(std::string name, bool ok, std::string detail = {}) { checks.push_back({std::move(name), ok, std::move(detail)}); }
};

namespace detail {

inline std::string num(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

inline Poly<Rational> rational_part(const MixedPolynomial& f) {
  return f.map_coefficients<Rational>([](const GaussianRational& c) { return c.re(); });
}

inline GaussianRational det_small(const std::vector<GaussianRational>& h, int n) {
  if (n == 1) return h[0];
  return h[0] * h[3] - h[1] * h[2];
}

}  // namespace detail

inline SuiteResult verify_clifford(std::uint64_t seed) {
  using G = GaussianRational;
  using Op = ExteriorOperator<G>;
  SuiteResult r{"clifford-identities", {}};
  const CliffordKind kinds[] = {CliffordKind::C, CliffordKind::CHat, CliffordKind::CBar, CliffordKind::CHatBar};
  for (int n = 1; n <= 3; ++n) {
    bool rel = true;
    Op full = Op::identity(n);
    std::vector<Op> gens;
    std::vector<int> squares;
    for (int i = 1; i <= n; ++i) {
      for (auto k : kinds) {
        gens.push_back(generator<G>(k, i, n));
        squares.push_back(generator_square(k));
        full = full * gens.back();
      }
    }
    for (std::size_t a = 0; a < gens.size(); ++a) {
      for (std::size_t b = a; b < gens.size(); ++b) {
        const Op expect = a == b ? Op::identity(n) * G(Rational(2 * squares[a])) : Op(n);
        rel = rel && anticommutator(gens[a], gens[b]) == expect;
      }
    }
    r.add("relations n=" + std::to_string(n), rel);
    const G st = supertrace(full);
    r.add("str full product n=" + std::to_string(n), st == G(Rational(1L << (2 * n))), to_string(st));
    r.add("number operator n=" + std::to_string(n), number_operator<G>(n) == degree_operator<G>(n));
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(-6, 6), den(1, 5);
  for (int n = 1; n <= 2; ++n) {
    bool ok = true;
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<G> h(static_cast<std::size_t>(n * n));
      for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
          h[static_cast<std::size_t>(i * n + j)] = h[static_cast<std::size_t>(j * n + i)] =
              G(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)));
        }
      }
      const Op l = build_Lf(h, n);
      Op p = Op::identity(n);
      for (int m = 1; m < 2 * n; ++m) {
        p = p * l;
        ok = ok && is_zero(supertrace(p));
      }
      p = p * l;
      const long fact = n == 1 ? 2 : 24;
      const long sign = n % 2 ? -1 : 1;
      ok = ok && supertrace(p) == G(Rational(fact * sign * (1L << (2 * n)))) * G(detail::det_small(h, n).norm());
    }
    r.add("str L_f^m n=" + std::to_string(n), ok);
  }
  return r;
}

inline SuiteResult verify_parametrix() {
  SuiteResult r{"parametrix-identities", {}};
  const std::vector<std::pair<const char*, int>> cases{{"(1/2)*z1^2", 1}, {"z1^3", 1}, {"z1^3 + z2^3", 2}};
  for (const auto& [text, n] : cases) {
    const auto f = detail::rational_part(parse_polynomial(text, n));
    const int k = default_truncation(n);
    const auto pb = build_parametrix(f, k);
    r.add(std::string("mean value ") + text, mean_value_defect(pb).is_zero());
    bool rec = true;
    for (int j = 0; j < k; ++j) rec = rec && recursion_defect(pb, j).is_zero();
    r.add(std::string("recursion ") + text, rec);
    bool low = true;
    for (int j = 1; j <= 2 * n - 1; ++j) low = low && diagonal_supertrace(pb, j).is_zero();
    r.add(std::string("str U_j = 0, j < 2n ") + text, low);
    const Rational fact = n == 1 ? 2 : 24;
    r.add(std::string("(2n)! str U_2n = str L_f^2n ") + text,
          diagonal_supertrace(pb, 2 * n) * fact == supertrace_Lf_power(pb, 2 * n));
  }
  // P_2 against the closed form for z^2/2 at t = 0.01.
  const auto pb = build_parametrix(detail::rational_part(parse_polynomial("(1/2)*z1^2", 1)), 2);
  const ParametrixEvaluator ev(pb);
  const OscillatorSpec one{{1.0, 0.0}};
  double worst = 0.0;
  for (double x = -2.0; x <= 2.0; x += 0.25) {
    for (double y = -2.0; y <= 2.0; y += 0.25) {
      const Complex z(x, y);
      if (std::abs(z) > 2.0) continue;
      const std::vector<Complex> zz{z};
      worst = std::max(worst, std::abs(ev.diagonal_supertrace(zz, 0.01) / converted_diagonal_supertrace(one, z, 0.01) - 1.0));
    }
  }
  r.add("P_2 vs exact kernel at t=0.01", worst <= 1e-3, detail::num(worst));
  return r;
}

inline SuiteResult verify_oscillator() {
  SuiteResult r{"oscillator-consistency", {}};
  const OscillatorSpec half{{0.5, 0.0}};
  r.add("printed = spectral kernel at |tau|=1/2",
        std::abs(printed_kernel_0form(half, 0.1, 0.3, 0.7) - mehler_kernel_0form(half, 0.1, 0.3, 0.7)) < 1e-15);
  const auto s = spectrum_k_forms(half, 0, 300);
  double worst = 0.0;
  for (double t : {0.5, 1.0, 2.0}) worst = std::max(worst, std::abs(s.heat_trace(t) - heat_trace_0forms(half, t)));
  r.add("spectrum sums = (1/(2 sinh |tau| t))^2", worst < 1e-10, detail::num(worst));
  // The diagonal supertrace is c(t) exp(-2a tanh(at) |z|^2); its integral is -1 for every t.
  for (double t : {0.3, 1.0, 3.0}) {
    const double a = half.abs_tau();
    const double total = diagonal_supertrace(half, 0.0, t) * std::numbers::pi / (2.0 * a * std::tanh(a * t));
    r.add("integrated supertrace t=" + detail::num(t), std::abs(total + 1.0) < 1e-12, detail::num(total));
  }
  return r;
}

inline SuiteResult verify_index(std::uint64_t seed) {
  SuiteResult r{"index-mckean-singer", {}};
  struct Case {
    const char* text;
    int n;
    IndexMethod method;
  };
  for (const auto& c : {Case{"(1/2)*z1^2", 1, IndexMethod::MonteCarlo}, Case{"z1^3", 1, IndexMethod::MonteCarlo},
                        Case{"z1^3 + z2^3", 2, IndexMethod::Quadrature}}) {
    const auto f = parse_polynomial(c.text, c.n);
    const auto w = solve_weights(f);
    const auto nd = nondegeneracy_check(f);
    IndexOptions o;
    o.method = c.method;
    o.samples = 200000;
    o.seed = seed;
    try {
      const auto res = mckean_singer_check(f, nd, {0.5, 1.0, 2.0}, o);
      r.add(std::string("mu ") + c.text, res.mu_rounded == milnor_oracle(w),
            detail::num(res.pooled) + " +- " + detail::num(res.pooled_stderr));
    } catch (const Error& e) {
      r.add(std::string("mu ") + c.text, false, e.what());
    }
  }
  return r;
}

inline SuiteResult verify_spectral() {
  SuiteResult r{"spectral-a1", {}};
  const auto f = parse_polynomial("(1/4)*z1^2", 1);  // tau = 1/2
  GalerkinConfig cfg;
  cfg.basis_size = 40;
  const auto g = eigensolve(f, cfg);
  const auto ev = g.spectrum.expanded();
  const double expect[] = {1, 2, 2, 3, 3, 3, 4, 4, 4, 4};
  double worst = 0.0;
  for (std::size_t i = 0; i < 10; ++i) worst = std::max(worst, std::abs(ev[i] - expect[i]));
  r.add("first 10 eigenvalues", worst <= 1e-6, detail::num(worst));
  const auto t1 = theta(g.spectrum, 1, Complex(3.0, 0.0));
  r.add("Theta^1 = 0", t1.value == Complex(0.0, 0.0));
  const auto t2 = theta(g.spectrum, 2, Complex(3.0, 0.0));
  r.add("Theta^2(3) = zeta(2)", std::abs(t2.value.real() - std::numbers::pi * std::numbers::pi / 6.0) <= t2.error,
        detail::num(t2.value.real()) + " +- " + detail::num(t2.error));
  cfg.basis_size = 60;
  const auto g60 = eigensolve(f, cfg);
  const auto num = torsion_numeric(g60);
  const auto ex = torsion_oscillator_exact(0.5);
  r.add("numeric vs exact log T^2", std::abs(num.log_torsion - ex.log_torsion) <= 1e-3,
        detail::num(num.log_torsion) + " vs " + detail::num(ex.log_torsion));
  const auto sum = torsion_sum_check(g60, 1, g60, 1);
  r.add("torsion sum identity", sum.pass, detail::num(sum.lhs) + " vs " + detail::num(sum.rhs));
  return r;
}

inline std::vector<std::string> verify_suite_names() {
  return {"clifford-identities", "parametrix-identities", "oscillator-consistency", "index-mckean-singer", "spectral-a1"};
}

inline SuiteResult run_verify_suite(const std::string& name, std::uint64_t seed) {
  if (name == "clifford-identities") return verify_clifford(seed);
  if (name == "parametrix-identities") return verify_parametrix();
  if (name == "oscillator-consistency") return verify_oscillator();
  if (name == "index-mckean-singer") return verify_index(seed);
  if (name == "spectral-a1") return verify_spectral();
  throw Error(ErrorCode::InvalidArgument, "unknown suite " + name);
}

}  // namespace lgheat
