#include <gtest/gtest.h>

#include <numbers>

#include "lgheat/oscillator.hpp"
#include "lgheat/quadrature.hpp"

using namespace lgheat;

namespace {

const OscillatorSpec kHalf{{0.5, 0.0}};
const OscillatorSpec kOne{{1.0, 0.0}};

}  // namespace

TEST(OscillatorSpectrum, Examples) {
  const auto s1 = spectrum_k_forms(kHalf, 1, 5);
  EXPECT_EQ(s1.levels[0].value, 0.0);
  EXPECT_EQ(s1.levels[0].multiplicity, 1);
  const auto s0 = spectrum_k_forms(kHalf, 0, 5);
  EXPECT_EQ(s0.levels[0].value, 1.0);
  EXPECT_EQ(s0.levels[0].multiplicity, 1);
  const auto s0b = spectrum_k_forms(kOne, 0, 5);
  EXPECT_EQ(s0b.levels[1].value, 4.0);
  EXPECT_EQ(s0b.levels[1].multiplicity, 2);
  // 1-forms: 2|tau| m has multiplicity (m+1) + (m-1) for m >= 2.
  EXPECT_EQ(s1.levels[3].multiplicity, 4 + 2);
  EXPECT_THROW(spectrum_k_forms(kHalf, 3, 5), Error);
}

TEST(OscillatorSpectrum, SumsReproduceTraces) {
  for (const auto& spec : {kHalf, kOne, OscillatorSpec{{0.3, 0.4}}}) {
    const auto s = spectrum_k_forms(spec, 0, 400);
    for (double t : {0.5, 1.0, 2.0, 5.0}) {
      const double lmax = s.levels.back().value;
      // Tail: sum over m > M of m exp(-2|tau| m t) <= exp(-t lmax) * (M+1) / (1 - e^{-2|tau|t})^2.
      const double q = std::exp(-2.0 * spec.abs_tau() * t);
      const double bound = std::exp(-t * lmax) * (static_cast<double>(s.levels.size()) + 1.0) / ((1 - q) * (1 - q));
      EXPECT_NEAR(s.heat_trace(t), heat_trace_0forms(spec, t), bound + 1e-13);
    }
  }
}

TEST(OscillatorKernel, Examples) {
  EXPECT_NEAR(printed_kernel_0form(kHalf, 0.0, 0.0, 1.0), 1.0 / (2 * std::numbers::pi * std::sinh(1.0)), 1e-15);
  EXPECT_NEAR(printed_kernel_0form(kHalf, 0.0, 0.0, 1.0), 0.1354278, 5e-8);
  const Complex z(0.3, -0.7);
  const double a = 0.8;
  const OscillatorSpec s{{a, 0.0}};
  for (double t : {0.1, 1.0, 3.0}) {
    const double expect = (1.0 / (4 * std::numbers::pi * a * t)) * (2 * a * t / std::sinh(2 * a * t)) *
                          std::exp(-2 * a * std::norm(z) * std::tanh(a * t));
    EXPECT_NEAR(printed_kernel_0form(s, z, z, t), expect, 1e-14);
  }
  EXPECT_THROW(printed_kernel_0form(kHalf, 0.0, 0.0, 0.0), Error);
  EXPECT_THROW(printed_kernel_0form(OscillatorSpec{{0.0, 0.0}}, 0.0, 0.0, 1.0), Error);
}

TEST(OscillatorKernel, PrintedAndSpectralKernelsAgreeAtHalf) {
  const Complex z(0.4, 0.1), w(-0.2, 0.5);
  EXPECT_DOUBLE_EQ(printed_kernel_0form(kHalf, z, w, 0.7), mehler_kernel_0form(kHalf, z, w, 0.7));
  EXPECT_NEAR(mehler_kernel_0form(kOne, z, w, 0.7) / printed_kernel_0form(kOne, z, w, 0.7), 2.0, 1e-14);
}

TEST(OscillatorKernel, SmallTimeMatchesFreeKernel) {
  // The 0-form operator is -2 d dbar + ..., i.e. -(1/2) Laplacian at leading order,
  // whose free kernel is (2 pi t)^-1 exp(-|z-w|^2 / 2t).
  const Complex z(0.5, 0.2), w(0.45, 0.25);
  double prev = 1.0;
  for (double t : {0.1, 0.01, 0.001}) {
    const double free = std::exp(-std::norm(z - w) / (2 * t)) / (2 * std::numbers::pi * t);
    const double rel = std::abs(mehler_kernel_0form(kHalf, z, w, t) / free - 1.0);
    EXPECT_LT(rel, prev);
    prev = rel;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(OscillatorKernel, DiagonalIntegratesToTrace) {
  // integral over C of c exp(-b|z|^2) is c pi / b.
  for (const auto& spec : {kHalf, kOne}) {
    for (double t : {0.3, 1.0, 2.5}) {
      const double a = spec.abs_tau();
      const double c = mehler_kernel_0form(spec, 0.0, 0.0, t);
      const double b = 2 * a * std::tanh(a * t);
      EXPECT_NEAR(c * std::numbers::pi / b, heat_trace_0forms(spec, t), 1e-12 * heat_trace_0forms(spec, t));
    }
  }
  EXPECT_NEAR(printed_heat_trace_0forms(1.0), 0.920674, 5e-7);
  EXPECT_NEAR(heat_trace_0forms(kHalf, 1.0), printed_heat_trace_0forms(1.0), 1e-15);
  EXPECT_NEAR(1e-4 * 1e-4 * printed_heat_trace_0forms(1e-4), 1.0, 1e-8);
  EXPECT_NEAR(printed_heat_trace_product(3, 0.8), std::pow(printed_heat_trace_0forms(0.8), 3), 1e-15);
  double prev = 1e300;
  for (double t = 0.1; t < 5; t += 0.1) {
    const double v = printed_heat_trace_0forms(t);
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(OscillatorKernel, SemigroupByGaussHermite) {
  const auto rule = gauss_hermite(64);
  const Complex z(0.3, -0.2), w(-0.1, 0.4);
  for (double t : {0.2, 0.5, 1.0}) {
    for (double s : {0.2, 0.6, 1.0}) {
      // In x the product is exp(-alpha |x|^2 + linear); center the rule on the Gaussian.
      const double alpha = (1.0 / std::tanh(t) + 1.0 / std::tanh(s)) / 2.0;
      const Complex center = (z / std::sinh(t) + w / std::sinh(s)) / (2.0 * alpha);
      const double scale = 1.0 / std::sqrt(alpha);
      double sum = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
          const Complex y(rule.nodes[i], rule.nodes[j]);
          const Complex x = center + scale * y;
          const double g = mehler_kernel_0form(kHalf, z, x, t) * mehler_kernel_0form(kHalf, x, w, s);
          sum += rule.weights[i] * rule.weights[j] * g * std::exp(std::norm(y)) * scale * scale;
        }
      }
      const double expect = mehler_kernel_0form(kHalf, z, w, t + s);
      EXPECT_NEAR(sum, expect, 1e-6 * expect) << t << " " << s;
    }
  }
}

TEST(OscillatorKernel, OneFormGroundStateLimit) {
  const OscillatorSpec spec{{0.6, 0.8}};
  const Complex z(0.3, 0.1), w(-0.4, 0.2);
  const auto k = mehler_kernel_1form(spec, z, w, 40.0);
  const Eigen::Matrix2cd op = k.as_operator();
  Eigen::Vector2cd v(-spec.tau / spec.abs_tau(), 1.0);
  const Eigen::Matrix2cd proj = v * v.adjoint() / 2.0;
  const Eigen::Matrix2cd expect = ground_state_amplitude(spec, z) * ground_state_amplitude(spec, w) * proj;
  EXPECT_LT((op - expect).norm(), 1e-12);
  // Projector check: the normalized form direction is idempotent.
  EXPECT_LT((proj * proj - proj).norm(), 1e-15);
  // v- is the -2|tau| eigenvector of L_f on 1-forms, whose matrix in (dz, dzbar) is [[0, 2 tau], [2 conj tau, 0]].
  Eigen::Matrix2cd lf;
  lf << 0.0, 2.0 * spec.tau, 2.0 * std::conj(spec.tau), 0.0;
  EXPECT_LT((lf * v + 2.0 * spec.abs_tau() * v).norm(), 1e-14);
}

TEST(OscillatorKernel, PrintedOneFormKernelShape) {
  const auto k = printed_kernel_1form(kHalf, 0.1, 0.2, 0.5);
  const double k0 = printed_kernel_0form(kHalf, 0.1, 0.2, 0.5);
  EXPECT_NEAR(k.scalar_minus, k0 * std::exp(0.5), 1e-15);
  EXPECT_NEAR(k.scalar_plus, k0 * std::exp(-0.5), 1e-15);
}

TEST(OscillatorSupertrace, IntegratesToMinusOne) {
  for (const auto& spec : {kHalf, kOne}) {
    for (double t : {0.2, 1.0, 3.0}) {
      const double a = spec.abs_tau();
      const double c = diagonal_supertrace(spec, 0.0, t);
      EXPECT_NEAR(c * std::numbers::pi / (2 * a * std::tanh(a * t)), -1.0, 1e-12);
    }
  }
}

TEST(OscillatorSupertrace, SectionFiveConversion) {
  for (double t : {0.01, 0.3, 1.2}) {
    for (double r : {0.0, 0.7, 2.0}) {
      const Complex z(r, 0.0);
      const double expect = -std::tanh(t) / std::numbers::pi * std::exp(-std::tanh(t) * r * r);
      EXPECT_NEAR(converted_diagonal_supertrace(kOne, z, t), expect, 1e-14);
    }
  }
  // Small-t scalar kernel of -Delta + ... is (4 pi t)^-1 exp(-|z-w|^2/4t).
  const double t = 1e-4;
  const Complex z(0.2, 0.1), w(0.21, 0.1);
  const double free = std::exp(-std::norm(z - w) / (4 * t)) / (4 * std::numbers::pi * t);
  EXPECT_NEAR(converted_scalar_kernel(kOne, z, w, t) / free, 1.0, 1e-4);
}
