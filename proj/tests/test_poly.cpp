#include <gtest/gtest.h>

#include <random>

#include "lgheat/parse.hpp"
#include "lgheat/poly.hpp"

using namespace lgheat;

namespace {

Monomial mono(std::initializer_list<unsigned> exps) {
  Monomial m;
  int s = 0;
  for (unsigned e : exps) m.set(s++, e);
  return m;
}

GaussianRational q(long p, long d = 1) { return GaussianRational(Rational(p, d)); }

MixedPolynomial random_poly(std::mt19937_64& rng, int n, int terms, unsigned max_exp) {
  std::uniform_int_distribution<int> coef(-5, 5);
  std::uniform_int_distribution<unsigned> ex(0, max_exp);
  MixedPolynomial p(n);
  for (int t = 0; t < terms; ++t) {
    Monomial m;
    for (int s = 0; s < 2 * n; ++s) m.set(s, ex(rng));
    p.add_term(m, GaussianRational(Rational(coef(rng), 1 + std::abs(coef(rng))), Rational(coef(rng))));
  }
  return p;
}

}  // namespace

TEST(Parse, TwoTermExample) {
  auto p = parse_polynomial("z1^2 + z1*z2^3", 2);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p.coefficient(mono({2, 0, 0, 0})), q(1));
  EXPECT_EQ(p.coefficient(mono({1, 3, 0, 0})), q(1));
}

TEST(Parse, ZeroIsEmpty) { EXPECT_TRUE(parse_polynomial("0", 1).is_zero()); }

TEST(Parse, RationalLiteral) {
  auto p = parse_polynomial("(1/2)*z1^2", 1);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p.coefficient(mono({2, 0})), q(1, 2));
}

TEST(Parse, ConjugateAndImaginaryUnit) {
  auto p = parse_polynomial("i*z1*conj(z1) - 3", 1);
  EXPECT_EQ(p.coefficient(mono({1, 1})), GaussianRational::imaginary_unit());
  EXPECT_EQ(p.coefficient(mono({0, 0})), q(-3));
  EXPECT_TRUE(parse_polynomial("(z1 + conj(z1))^2", 1).is_real());
}

TEST(Parse, Errors) {
  try {
    parse_polynomial("z1 + * z2", 2);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), ErrorCode::Parse);
    EXPECT_EQ(e.offset(), 5u);
  }
  try {
    parse_polynomial("z3", 2);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), ErrorCode::VariableOutOfRange);
  }
  try {
    parse_polynomial("z1^-2", 1);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), ErrorCode::NegativeExponent);
  }
  EXPECT_THROW(parse_polynomial("z1/2", 1), ParseError);
  EXPECT_THROW(parse_polynomial("(z1", 1), ParseError);
}

TEST(Parse, PrintParseIsIdempotent) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 3;
    auto p = random_poly(rng, n, 6, 3);
    const std::string text = to_string(p);
    auto back = parse_polynomial(text, n);
    EXPECT_EQ(back, p) << text;
    EXPECT_EQ(to_string(back), text);
  }
}

TEST(Poly, RingAxiomsExact) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 25; ++trial) {
    auto a = random_poly(rng, 2, 4, 2);
    auto b = random_poly(rng, 2, 4, 2);
    auto c = random_poly(rng, 2, 4, 2);
    EXPECT_EQ((a + b) * c, a * c + b * c);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_TRUE((a - a).is_zero());
  }
}

TEST(Wirtinger, Examples) {
  auto p = parse_polynomial("z1^2 + z1*z2^3", 2);
  EXPECT_EQ(wirtinger_derivative(p, 0, false), parse_polynomial("2*z1 + z2^3", 2));
  EXPECT_TRUE(wirtinger_derivative(parse_polynomial("z1^2", 1), 0, true).is_zero());
  EXPECT_EQ(wirtinger_derivative(parse_polynomial("z1*conj(z1)", 1), 0, false), parse_polynomial("conj(z1)", 1));
  EXPECT_TRUE(wirtinger_derivative(parse_polynomial("7", 1), 0, false).is_zero());
}

TEST(HermitianGradientSquare, Examples) {
  EXPECT_EQ(hermitian_gradient_square(parse_polynomial("(1/2)*z1^2", 1)), parse_polynomial("z1*conj(z1)", 1));
  EXPECT_EQ(hermitian_gradient_square(parse_polynomial("z1^3", 1)), parse_polynomial("9*z1^2*conj(z1)^2", 1));
  EXPECT_EQ(hermitian_gradient_square(parse_polynomial("(1/2)*z1^2 + (1/2)*z2^2", 2)),
            parse_polynomial("z1*conj(z1) + z2*conj(z2)", 2));
  EXPECT_THROW(hermitian_gradient_square(parse_polynomial("conj(z1)", 1)), Error);
}

TEST(HermitianGradientSquare, MatchesDirectEvaluationAndIsReal) {
  std::mt19937_64 rng(5);
  const char* samples[] = {"z1^3 + (2/3)*z1*z2^2", "z1^2 + z1*z2^3 + z2*z3^3", "(1+2*i)*z1^4 - i*z2^2", "z1^5"};
  std::normal_distribution<double> g;
  for (const char* text : samples) {
    const int n = infer_variable_count(text);
    auto f = parse_polynomial(text, n);
    auto v = hermitian_gradient_square(f);
    EXPECT_TRUE(v.is_real());
    EXPECT_EQ(v, v.conj());
    std::vector<CompiledPoly> grads;
    for (int i = 0; i < n; ++i) grads.emplace_back(wirtinger_derivative(f, i, false));
    CompiledPoly cv(v);
    for (int k = 0; k < 100; ++k) {
      std::vector<Complex> z(static_cast<std::size_t>(n));
      for (auto& zi : z) zi = Complex(g(rng), g(rng));
      double direct = 0.0;
      for (const auto& d : grads) direct += std::norm(d(z));
      const Complex got = cv(z);
      EXPECT_NEAR(got.real(), direct, 1e-12 * std::max(1.0, direct));
      EXPECT_NEAR(got.imag(), 0.0, 1e-12 * std::max(1.0, direct));
    }
  }
}

TEST(SegmentAverage, LinearIntegrand) {
  auto avg = segment_average(parse_polynomial("z1", 1), 0);
  // (u/2) + w in two-point variables (u1, w1).
  MixedPolynomial expected(2);
  expected.add_term(mono({1, 0, 0, 0}), q(1, 2));
  expected.add_term(mono({0, 1, 0, 0}), q(1));
  EXPECT_EQ(avg, expected);
}

TEST(SegmentAverage, QuadraticMatchesMeanValueFormula) {
  // (1/3)|u|^2 + Re(u conj(w)) + |w|^2, i.e. (1/3)|z-w|^2 + (z-w).w + |w|^2.
  auto avg = segment_average(parse_polynomial("z1*conj(z1)", 1), 0);
  MixedPolynomial expected(2);
  expected.add_term(mono({1, 0, 1, 0}), q(1, 3));
  expected.add_term(mono({1, 0, 0, 1}), q(1, 2));
  expected.add_term(mono({0, 1, 1, 0}), q(1, 2));
  expected.add_term(mono({0, 1, 0, 1}), q(1));
  EXPECT_EQ(avg, expected);
}

TEST(SegmentAverage, ConstantWithWeight) {
  auto avg = segment_average(parse_polynomial("1", 1), 2);
  EXPECT_EQ(avg, MixedPolynomial::constant(2, q(1, 3)));
}

TEST(SegmentAverage, DegenerateSegmentRecoversIntegrand) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    auto p = random_poly(rng, 2, 5, 3);
    EXPECT_EQ(restrict_to_diagonal(segment_average(p, 0)), p);
  }
}

TEST(TwoPoint, SwapIsAnInvolution) {
  std::mt19937_64 rng(4);
  auto p = segment_average(random_poly(rng, 1, 4, 2), 0);
  EXPECT_EQ(swap_points(swap_points(p)), p);
}
