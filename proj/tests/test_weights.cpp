#include <gtest/gtest.h>

#include "lgheat/parse.hpp"
#include "lgheat/weights.hpp"

using namespace lgheat;

namespace {

WeightVector weights_of(const char* text, int n) { return solve_weights(parse_polynomial(text, n)); }

std::vector<Rational> qs(std::initializer_list<Rational> v) { return v; }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::Unsupported;
}

}  // namespace

TEST(SolveWeights, Examples) {
  EXPECT_EQ(weights_of("z1^2 + z1*z2^3 + z2*z3^3", 3).q, qs({Rational(1, 2), Rational(1, 6), Rational(5, 18)}));
  EXPECT_EQ(weights_of("z1^2 + z1*z2^2 + z2*z3^4", 3).q, qs({Rational(1, 2), Rational(1, 4), Rational(3, 16)}));
  for (int r = 1; r <= 6; ++r) {
    const auto w = weights_of(("z1^" + std::to_string(r + 1)).c_str(), 1);
    EXPECT_EQ(w.q[0], Rational(1, r + 1));
  }
}

TEST(SolveWeights, EveryMonomialHasWeightedDegreeOne) {
  for (auto [text, n] : {std::pair{"z1^2 + z1*z2^3 + z2*z3^3", 3}, {"z1^3 + z2^3", 2}, {"z1^4 + z1*z2^3", 2}, {"z1^2*z2 + z2^5", 2}}) {
    const auto f = parse_polynomial(text, n);
    const auto w = solve_weights(f);
    for (const auto& [m, c] : f.terms()) EXPECT_EQ(weighted_degree(m, w), 1) << text;
  }
}

TEST(SolveWeights, DenominatorAndNumerators) {
  const auto w = weights_of("z1^2 + z1*z2^3 + z2*z3^3", 3);
  EXPECT_EQ(w.denominator(), 18);
  const auto k = w.numerators();
  EXPECT_EQ(k[0], 9);
  EXPECT_EQ(k[1], 3);
  EXPECT_EQ(k[2], 5);
}

TEST(SolveWeights, Errors) {
  EXPECT_EQ(code_of([] { weights_of("z1^2 + z1^3", 1); }), ErrorCode::NotQuasiHomogeneous);
  EXPECT_EQ(code_of([] { weights_of("z1^2*z2", 2); }), ErrorCode::WeightsNotUnique);
  EXPECT_EQ(code_of([] { weights_of("z1^2 + z2^2 + z1^3*z2", 2); }), ErrorCode::NotQuasiHomogeneous);
  EXPECT_EQ(code_of([] { weights_of("z1*z2^2 + z2^2", 2); }), ErrorCode::WeightOutOfRange);
  EXPECT_EQ(code_of([] { weights_of("z1 + z1^2", 1); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { solve_weights(parse_polynomial("z1*conj(z1)", 1)); }), ErrorCode::NotHolomorphic);
  EXPECT_EQ(code_of([] { weights_of("0", 1); }), ErrorCode::InvalidArgument);
}

TEST(Nondegeneracy, Examples) {
  EXPECT_EQ(code_of([] { nondegeneracy_check(parse_polynomial("z1*z2", 2)); }), ErrorCode::BilinearMonomialPresent);
  EXPECT_EQ(code_of([] { nondegeneracy_check(parse_polynomial("z1^2*z2", 2)); }), ErrorCode::GradientVanishesAwayFromOrigin);
  // Critical locus z1 = -z2 is not on a coordinate subspace.
  EXPECT_EQ(code_of([] { nondegeneracy_check(parse_polynomial("(z1 + z2)^3", 2)); }), ErrorCode::GradientVanishesAwayFromOrigin);

  const auto rep = nondegeneracy_check(parse_polynomial("z1^2", 1));
  EXPECT_TRUE(rep.no_bilinear);
  EXPECT_TRUE(rep.isolated_witness);
  EXPECT_TRUE(rep.heuristic);
  EXPECT_GE(rep.samples, 10000U);
  EXPECT_GT(rep.fitted_C, 0.0);
}

TEST(Nondegeneracy, GrowthConstantBoundsSamples) {
  const auto f = parse_polynomial("z1^3 + z2^3", 2);
  const auto rep = nondegeneracy_check(f);
  const HolomorphicDerivatives d(f);
  std::mt19937_64 rng(99);
  std::normal_distribution<double> nd;
  for (int s = 0; s < 2000; ++s) {
    std::vector<Complex> z{{nd(rng), nd(rng)}, {nd(rng), nd(rng)}};
    const double r2 = std::norm(z[0]) + std::norm(z[1]);
    EXPECT_GE(d.gradient_norm2(z), r2 / rep.fitted_C - 1.0);
  }
}

TEST(Tameness, Examples) {
  const auto t1 = tameness_report(WeightVector{{Rational(1, 2), Rational(1, 6), Rational(5, 18)}});
  EXPECT_EQ(t1.gap, Rational(1, 3));
  EXPECT_FALSE(t1.condition_13);
  EXPECT_EQ(t1.delta, 0);

  const auto t2 = tameness_report(WeightVector{{Rational(1, 2), Rational(1, 2)}});
  EXPECT_EQ(t2.gap, 0);
  EXPECT_TRUE(t2.condition_13);
  EXPECT_EQ(t2.delta, Rational(2, 3));
  EXPECT_EQ(t2.delta2, 1);
  EXPECT_EQ(t2.delta3, 1);

  const auto t3 = tameness_report(WeightVector{{Rational(1, 3)}});
  EXPECT_EQ(t3.delta, Rational(1, 2));
}

TEST(Tameness, DeltaPositiveIffCondition) {
  for (int a = 1; a <= 10; ++a) {
    for (int b = a; b <= 10; ++b) {
      const auto t = tameness_report(WeightVector{{Rational(1, 2 * a), Rational(1, 2 * b)}});
      EXPECT_EQ(t.condition_13, t.gap < Rational(1, 3));
      EXPECT_EQ(sgn(t.delta) > 0, t.condition_13);
    }
  }
}

TEST(Tameness, ShrinkingGapKeepsCondition) {
  // Move q_min toward q_max and check the condition never switches off.
  for (int k = 2; k <= 12; ++k) {
    bool seen_true = false;
    for (int j = 20; j >= 0; --j) {
      const Rational qm = Rational(1, 2 * k) + (Rational(1, 2) - Rational(1, 2 * k)) * Rational(20 - j, 20);
      const auto t = tameness_report(WeightVector{{Rational(1, 2), qm}});
      if (seen_true) EXPECT_TRUE(t.condition_13);
      seen_true = seen_true || t.condition_13;
    }
  }
}

TEST(Milnor, OracleExamples) {
  EXPECT_EQ(milnor_oracle(WeightVector{{Rational(1, 2), Rational(1, 2), Rational(1, 2)}}), 1);
  EXPECT_EQ(milnor_oracle(WeightVector{{Rational(1, 3)}}), 2);
  EXPECT_EQ(milnor_oracle(WeightVector{{Rational(1, 3), Rational(1, 3)}}), 4);
  EXPECT_THROW(milnor_oracle(WeightVector{{Rational(2, 5)}}), Error);
}

TEST(Milnor, BruteForceAgreesWithOracle) {
  const std::vector<std::pair<const char*, int>> cases{
      {"(1/2)*z1^2", 1}, {"z1^3", 1}, {"z1^6", 1}, {"z1^3 + z2^3", 2}, {"z1^2 + z2^4", 2},
      {"z1^3 + z1*z2^2", 2}, {"z1^4 + z2^3", 2}, {"z1^2*z2 + z2^4", 2}, {"z1^3*z2 + z2^3", 2},
      {"z1^5 + z2^2", 2}, {"z1^3 + z2^5", 2}, {"z1^4 + z1*z2^3", 2}, {"z1^3*z2 + z1*z2^3", 2},
  };
  for (const auto& [text, n] : cases) {
    const auto f = parse_polynomial(text, n);
    const auto w = solve_weights(f);
    ASSERT_LE(f.total_degree(), 6U);
    EXPECT_EQ(jacobian_ring_dimension(f, w), milnor_oracle(w)) << text;
  }
}

TEST(Milnor, BruteForceExamples) {
  EXPECT_EQ(jacobian_ring_dimension(parse_polynomial("z1^3", 1), WeightVector{{Rational(1, 3)}}), 2);
  EXPECT_EQ(jacobian_ring_dimension(parse_polynomial("z1^3 + z2^3", 2), WeightVector{{Rational(1, 3), Rational(1, 3)}}), 4);
}
