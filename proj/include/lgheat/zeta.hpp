#pragma once

// Riemann zeta and its derivative on the real line by Euler-Maclaurin.
// The sum is carried in __float128: for s near -10 the direct terms reach
// 1e17 and cancel down to O(1e-2), which double cannot resolve.

#include <quadmath.h>

#include <cmath>
#include <vector>

#include "lgheat/errors.hpp"
#include "lgheat/scalar.hpp"

namespace lgheat {

struct ZetaValue {
  double value = 0.0;
  double derivative = 0.0;
};

namespace detail {

/// B_0 .. B_m exactly (B_1 = -1/2).
inline std::vector<Rational> bernoulli_numbers(int m) {
  std::vector<Rational> b(static_cast<std::size_t>(m + 1));
  b[0] = 1;
  for (int k = 1; k <= m; ++k) {
    // sum_{j<k} C(k+1, j) B_j + (k+1) B_k = 0
    Rational s = 0;
    mpz_class binom = 1;
    for (int j = 0; j < k; ++j) {
      s += Rational(binom) * b[static_cast<std::size_t>(j)];
      binom = binom * (k + 1 - j) / (j + 1);
    }
    b[static_cast<std::size_t>(k)] = -s / (k + 1);
    b[static_cast<std::size_t>(k)].canonicalize();
  }
  return b;
}

inline __float128 to_quad(const Rational& r) {
  return static_cast<__float128>(r.get_num().get_d()) / static_cast<__float128>(r.get_den().get_d());
}

}  // namespace detail

/// zeta(s) and zeta'(s) for real s != 1 using N direct terms and `corrections`
/// Bernoulli terms; the derivative differentiates the same expansion termwise.
inline ZetaValue riemann_zeta_and_derivative(double s, int N = 50, int corrections = 10) {
  if (s == 1.0) throw Error(ErrorCode::InvalidArgument, "zeta has a pole at s = 1");
  if (!std::isfinite(s)) throw Error(ErrorCode::InvalidArgument, "s must be finite");
  if (N < 2 || corrections < 1) throw Error(ErrorCode::InvalidArgument, "need N >= 2 and at least one correction");
  using Q = __float128;
  const Q sq = s;
  Q z = 0, dz = 0;
  for (int k = 1; k < N; ++k) {
    const Q lk = logq(static_cast<Q>(k));
    const Q term = expq(-sq * lk);
    z += term;
    dz -= lk * term;
  }
  const Q n = N;
  const Q ln = logq(n);
  const Q n_s = expq(-sq * ln);  // N^-s
  // N^{1-s}/(s-1) + N^{-s}/2
  z += n * n_s / (sq - 1) + n_s / 2;
  dz += -ln * n * n_s / (sq - 1) - n * n_s / ((sq - 1) * (sq - 1)) - ln * n_s / 2;

  const auto b = detail::bernoulli_numbers(2 * corrections);
  Rational fact = 1;  // (2j)!
  Q poly = sq;        // s (s+1) ... (s+2j-2)
  Q dpoly = 1;
  Q npow = n_s / n;   // N^{-s-2j+1}
  for (int j = 1; j <= corrections; ++j) {
    fact *= Rational((2 * j - 1) * (2 * j));
    if (j > 1) {
      for (int i : {2 * j - 3, 2 * j - 2}) {
        dpoly = dpoly * (sq + i) + poly;
        poly *= sq + i;
      }
      npow /= n * n;
    }
    const Q c = detail::to_quad(b[static_cast<std::size_t>(2 * j)] / fact);
    z += c * poly * npow;
    dz += c * (dpoly - ln * poly) * npow;
  }
  return {static_cast<double>(z), static_cast<double>(dz)};
}

inline double riemann_zeta(double s) { return riemann_zeta_and_derivative(s).value; }

}  // namespace lgheat
