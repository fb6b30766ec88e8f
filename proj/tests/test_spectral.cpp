#include <gtest/gtest.h>

#include <chrono>
#include <numbers>

#include "lgheat/oscillator.hpp"
#include "lgheat/parse.hpp"
#include "lgheat/spectral.hpp"

using namespace lgheat;

namespace {

// f = tau z^2 / 2 with tau = 1/2.
MixedPolynomial a1_half() { return parse_polynomial("(1/4)*z1^2", 1); }

GalerkinConfig sized(int n) {
  GalerkinConfig c;
  c.basis_size = n;
  return c;
}

}  // namespace

TEST(Galerkin, RadialPotential) {
  const auto v = radial_potential(parse_polynomial("z1^3", 1));
  EXPECT_EQ(v.degree, 2);
  EXPECT_DOUBLE_EQ(v.coefficient, 18.0);  // 2 |3 z^2|^2
  EXPECT_THROW(radial_potential(parse_polynomial("z1^3 + z2^3", 2)), Error);
  EXPECT_THROW(radial_potential(parse_polynomial("z1^3 + z1^2", 1)), Error);
}

TEST(Galerkin, LaguerreJacobiMomentsMatchGamma) {
  // <0| x^p |0> for the alpha-weighted Laguerre functions is Gamma(alpha+p+1)/Gamma(alpha+1).
  for (int alpha : {0, 1, 3}) {
    const Eigen::MatrixXd j = detail::laguerre_jacobi(6, alpha);
    Eigen::MatrixXd jp = Eigen::MatrixXd::Identity(6, 6);
    for (int p = 1; p <= 4; ++p) {
      jp = jp * j;
      EXPECT_NEAR(jp(0, 0), std::tgamma(alpha + p + 1.0) / std::tgamma(alpha + 1.0), 1e-9);
    }
  }
}

TEST(Galerkin, OmegaSearchFindsOscillatorFrequency) {
  // For A_1 the trace is minimized at omega = 2 |tau| exactly.
  for (const char* text : {"(1/4)*z1^2", "(1/2)*z1^2", "z1^2"}) {
    const auto f = parse_polynomial(text, 1);
    const double tau = *oscillator_abs_tau(f);
    EXPECT_NEAR(select_omega(radial_potential(f), 20), 2.0 * tau, 1e-6) << text;
  }
}

TEST(Galerkin, A1Spectrum) {
  const auto start = std::chrono::steady_clock::now();
  const auto g = eigensolve(a1_half(), sized(40));
  const auto ev = g.spectrum.expanded();
  const std::vector<double> expect{1, 2, 2, 3, 3, 3, 4, 4, 4, 4};
  ASSERT_GE(ev.size(), expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) EXPECT_NEAR(ev[i], expect[i], 1e-6);
  // multiplicity of 2|tau| m is m
  for (std::size_t k = 0; k < 20 && k < g.spectrum.levels.size(); ++k) {
    const auto& l = g.spectrum.levels[k];
    EXPECT_NEAR(l.value, static_cast<double>(k + 1), 1e-8);
    EXPECT_EQ(l.multiplicity, static_cast<long>(k + 1));
  }
  // tau = 1: levels 2(k+l+1)
  const auto g2 = eigensolve(parse_polynomial("(1/2)*z1^2", 1), sized(40));
  EXPECT_NEAR(g2.spectrum.levels[0].value, 2.0, 1e-8);
  EXPECT_NEAR(g2.spectrum.levels[3].value, 8.0, 1e-8);
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 30.0);
}

TEST(Galerkin, RayleighRitzMonotone) {
  for (const char* text : {"(1/4)*z1^2", "z1^3", "(1/3)*z1^4"}) {
    const auto v = radial_potential(parse_polynomial(text, 1));
    const double omega = select_omega(v, 20);
    for (int m : {0, 1, 5}) {
      const auto a = detail::sector_eigenvalues(v, omega, m, 20);
      const auto b = detail::sector_eigenvalues(v, omega, m, 40);
      const auto c = detail::sector_eigenvalues(v, omega, m, 60);
      for (int i = 0; i < 20; ++i) {
        EXPECT_LE(b(i), a(i) + 1e-9 * std::abs(a(i))) << text << " m=" << m << " i=" << i;
        EXPECT_LE(c(i), b(i) + 1e-9 * std::abs(b(i))) << text << " m=" << m << " i=" << i;
      }
    }
  }
}

TEST(Galerkin, A2PositiveAndStable) {
  std::vector<double> lowest;
  for (int n : {40, 60, 80}) {
    const auto g = eigensolve(parse_polynomial("z1^3", 1), sized(n));
    EXPECT_GT(g.spectrum.levels.front().value, 0.0);
    lowest.push_back(g.spectrum.levels.front().value);
  }
  EXPECT_NEAR(lowest[1], lowest[0], 1e-4 * lowest[0]);
  EXPECT_NEAR(lowest[2], lowest[1], 1e-4 * lowest[1]);
  // Independent check: finite volumes for the m = 0 ground state of
  // -(1/2)(1/r)(r u')' + 18 r^4 u, symmetrized by sqrt(r) weights.
  const int pts = 3000;
  const double rmax = 3.0, h = rmax / pts;
  Eigen::VectorXd diag(pts), off(pts - 1);
  for (int i = 0; i < pts; ++i) {
    const double r = (i + 0.5) * h;
    const double left = i * h, right = (i + 1) * h;
    diag(i) = 0.5 * (left + right) / (h * h * r) + 18.0 * std::pow(r, 4);
    if (i + 1 < pts) off(i) = -0.5 * right / (h * h * std::sqrt(r * (r + h)));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  EXPECT_NEAR(es.eigenvalues()(0), lowest[2], 2e-3 * lowest[2]);
}

TEST(HeatTrace, A1MatchesClosedForm) {
  const auto g = eigensolve(a1_half(), sized(40));
  const auto tail = fit_weyl_tail(g.spectrum);
  const OscillatorSpec spec{{0.5, 0.0}};
  for (double t : {0.5, 0.75, 1.0, 2.0, 4.0}) {
    const auto s = heat_trace_sample(g.spectrum, tail, t);
    const double exact = heat_trace_0forms(spec, t);
    EXPECT_NEAR(s.trace, exact, std::max(s.error, 1e-12 * exact)) << t;
  }
  const auto csv = heat_trace_csv({heat_trace_sample(g.spectrum, tail, 1.0)});
  EXPECT_EQ(csv.substr(0, 14), "t,trace,error\n");
}

TEST(HeatTrace, LeadingExponent) {
  const auto g = eigensolve(a1_half(), sized(60));
  const auto tail = fit_weyl_tail(g.spectrum);
  const auto fit = fit_leading_exponent([&](double t) { return heat_trace_sample(g.spectrum, tail, t).trace; }, 0.3, 1.5);
  const double lattice = lattice_leading_exponent(1, 0.5);
  EXPECT_DOUBLE_EQ(lattice, -2.0);
  EXPECT_NEAR(fit.exponent, lattice, 0.02 * 2.0);
  // Closed-form trace: the fit itself recovers -2 closely.
  const OscillatorSpec spec{{0.5, 0.0}};
  const auto exact = fit_leading_exponent([&](double t) { return heat_trace_0forms(spec, t); }, 0.3, 1.5);
  EXPECT_NEAR(exact.exponent, -2.0, 1e-3);
}

TEST(HeatTrace, LadderForA2) {
  const auto v = radial_potential(parse_polynomial("z1^3", 1));
  const auto e = heat_trace_exponents(v, 3);
  EXPECT_DOUBLE_EQ(e[0], -1.5);
  EXPECT_DOUBLE_EQ(e[1], 0.0);
  EXPECT_DOUBLE_EQ(e[2], 1.5);
}

TEST(Theta, VanishesForFirstAndMatchesZetaForSecond) {
  const auto g = eigensolve(a1_half(), sized(60));
  for (Complex s : {Complex(3.0, 0.0), Complex(2.5, 1.0), Complex(6.0, -2.0)}) {
    const auto t1 = theta(g.spectrum, 1, s);
    EXPECT_EQ(t1.value, Complex(0.0, 0.0));
    EXPECT_EQ(t1.error, 0.0);
  }
  const auto t2 = theta(g.spectrum, 2, Complex(3.0, 0.0));
  EXPECT_NEAR(t2.value.real(), std::numbers::pi * std::numbers::pi / 6.0, t2.error);
  EXPECT_LT(t2.error, 5e-3);
  // (2|tau|)^{-s} zeta(s-1) at several real s
  const auto gt = eigensolve(parse_polynomial("(1/2)*z1^2", 1), sized(60));
  for (double s : {3.0, 4.0, 5.5}) {
    const auto v = theta(gt.spectrum, 2, Complex(s, 0.0));
    EXPECT_NEAR(v.value.real(), theta2_oscillator_exact(1.0, s), v.error + 1e-12) << s;
  }
  try {
    theta(g.spectrum, 2, Complex(1.5, 0.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TailDominates);
  }
}

TEST(Torsion, ExactPath) {
  const auto half = torsion_oscillator_exact(0.5);
  // e^{-zeta'(-1)} = A e^{-1/12} with Glaisher's constant A.
  EXPECT_NEAR(half.torsion, 1.2824271291006226369 * std::exp(-1.0 / 12.0), 1e-13);
  EXPECT_NEAR(half.log_torsion, 0.16542114370045092, 1e-13);
  const auto one = torsion_oscillator_exact(1.0);
  EXPECT_NEAR(one.torsion, std::pow(2.0, -1.0 / 12.0) * std::exp(0.16542114370045092), 1e-13);
  // Scale covariance: doubling tau shifts log T^2 by -(1/12) log 2.
  EXPECT_NEAR(one.log_torsion - half.log_torsion, -std::log(2.0) / 12.0, 1e-14);
  EXPECT_NEAR(half.theta(2, Complex(3.0, 0.0)).value.real(), std::numbers::pi * std::numbers::pi / 6.0, 1e-13);
}

TEST(Torsion, NumericPathMatchesExact) {
  for (const char* text : {"(1/4)*z1^2", "(1/2)*z1^2"}) {
    const auto f = parse_polynomial(text, 1);
    const auto g = eigensolve(f, sized(60));
    const auto num = torsion_numeric(g);
    const auto ex = torsion_oscillator_exact(*oscillator_abs_tau(f));
    EXPECT_NEAR(num.log_torsion, ex.log_torsion, 1e-3) << text;
    EXPECT_LT(num.error, 1e-3);
    // leading fitted coefficient 1/(2|tau|)^2, constant -1/12
    const double tau = *oscillator_abs_tau(f);
    EXPECT_NEAR(num.coefficients[0], 1.0 / (4.0 * tau * tau), 1e-6);
    EXPECT_NEAR(num.coefficients[1], -1.0 / 12.0, 1e-6);
  }
}

TEST(Torsion, SplitPointInvariance) {
  const auto g = eigensolve(a1_half(), sized(60));
  std::vector<double> d;
  for (double split : {0.5, 1.0, 2.0}) {
    RenormalizationOptions o;
    o.split = split;
    d.push_back(torsion_numeric(g, o).derivative_at_zero);
  }
  EXPECT_NEAR(d[0], d[1], 1e-7);
  EXPECT_NEAR(d[2], d[1], 1e-7);
}

TEST(Torsion, A2NumericRuns) {
  const auto g = eigensolve(parse_polynomial("z1^3", 1), sized(60));
  const auto r = torsion_numeric(g);
  EXPECT_TRUE(std::isfinite(r.log_torsion));
  EXPECT_NEAR(r.exponents[0], -1.5, 1e-15);
}

TEST(TorsionSum, ProductOfTwoOscillators) {
  const auto g = eigensolve(a1_half(), sized(60));
  const auto rep = torsion_sum_check(g, 1, g, 1);
  EXPECT_TRUE(rep.pass) << rep.lhs << " vs " << rep.rhs << " tol " << rep.tolerance;
  EXPECT_NEAR(rep.rhs, -2.0 * torsion_oscillator_exact(0.5).log_torsion, 1e-3);
  // Formula evaluator: linear in mu, a zero mu removes the other factor.
  EXPECT_DOUBLE_EQ(torsion_sum_formula(1, 1, 0.3, 1, 0, 0.7), -0.7);
  EXPECT_DOUBLE_EQ(torsion_sum_formula(1, 2, 0.3, 2, 3, 0.7), -1.4 + 0.9);
}

TEST(TorsionSum, TensorRuleGivesMinusFourZ) {
  const auto g = eigensolve(a1_half(), sized(40));
  const auto d = one_variable_degree_traces(g.spectrum, std::nullopt, 1);
  const auto p = tensor_product(d, d);
  for (double t : {0.5, 1.0, 3.0}) {
    const double z = g.spectrum.heat_trace(t);
    EXPECT_NEAR(weighted_supertrace(p, 2, t), -4.0 * z, 1e-9 * z * z);
    EXPECT_NEAR(weighted_supertrace(d, 2, t), 2.0 * z, 1e-12 * z);
    EXPECT_NEAR(weighted_supertrace(d, 1, t), 0.0, 1e-12 * z);
  }
}
