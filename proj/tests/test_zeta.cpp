#include <gtest/gtest.h>

#include <boost/math/special_functions/zeta.hpp>
#include <numbers>

#include "lgheat/zeta.hpp"

using namespace lgheat;

TEST(Zeta, ClassicalValues) {
  EXPECT_NEAR(riemann_zeta(2.0), std::numbers::pi * std::numbers::pi / 6.0, 1e-14);
  EXPECT_NEAR(riemann_zeta(-1.0), -1.0 / 12.0, 1e-14);
  EXPECT_NEAR(riemann_zeta(0.0), -0.5, 1e-14);
  EXPECT_NEAR(riemann_zeta(4.0), std::pow(std::numbers::pi, 4) / 90.0, 1e-14);
  for (int k = 1; k <= 5; ++k) EXPECT_NEAR(riemann_zeta(-2.0 * k), 0.0, 1e-12);
}

TEST(Zeta, DerivativeAtZeroIsMinusHalfLogTwoPi) {
  EXPECT_NEAR(riemann_zeta_and_derivative(0.0).derivative, -0.5 * std::log(2.0 * std::numbers::pi), 1e-14);
}

TEST(Zeta, MatchesBoostOnGrid) {
  for (double s = -10.0; s <= 10.0; s += 0.37) {
    if (std::abs(s - 1.0) < 1e-9) continue;
    EXPECT_NEAR(riemann_zeta(s), boost::math::zeta(s), 1e-12 * std::max(1.0, std::abs(boost::math::zeta(s)))) << s;
  }
}

TEST(Zeta, DerivativeMatchesCentralDifferenceOfBoost) {
  for (double s : {-7.3, -2.5, -1.0, 0.3, 2.0, 5.5}) {
    const double h = 1e-4;
    // Five-point stencil, truncation O(h^4).
    const double fd = (-boost::math::zeta(s + 2 * h) + 8 * boost::math::zeta(s + h) - 8 * boost::math::zeta(s - h) +
                       boost::math::zeta(s - 2 * h)) /
                      (12 * h);
    EXPECT_NEAR(riemann_zeta_and_derivative(s).derivative, fd, 1e-8) << s;
  }
}

TEST(Zeta, TwoTruncationLevelsAgree) {
  for (double s = -10.0; s <= 10.0; s += 0.5) {
    if (s == 1.0) continue;
    const auto a = riemann_zeta_and_derivative(s, 50, 10);
    const auto b = riemann_zeta_and_derivative(s, 60, 12);
    EXPECT_NEAR(a.value, b.value, 1e-12) << s;
    EXPECT_NEAR(a.derivative, b.derivative, 1e-12) << s;
  }
}

TEST(Zeta, DerivativeAtMinusOne) {
  const auto z = riemann_zeta_and_derivative(-1.0);
  EXPECT_NEAR(z.derivative, -0.16542114370045092, 1e-13);
  // Independent route: zeta'(-1) = 1/12 - log A with Glaisher's constant A.
  const double glaisher = 1.2824271291006226369;
  EXPECT_NEAR(z.derivative, 1.0 / 12.0 - std::log(glaisher), 1e-14);
}

TEST(Zeta, PoleRejected) {
  try {
    riemann_zeta(1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
  }
}
