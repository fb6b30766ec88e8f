#pragma once

// Closed forms for the one-variable oscillator f = tau z^2 / 2.
//
// Two conventions appear. The "printed" functions evaluate the displayed
// formulas exactly as written: 0/2-form operator -2 d dbar + 2|tau|^2 |z|^2
// and kernel prefactor (4 pi |tau| t)^-1 (2|tau|t / sinh 2|tau|t). The
// "mehler" functions are the kernels that actually reproduce the stated
// spectrum 2|tau|(k+l+1); the two agree exactly at |tau| = 1/2.
//
// The converted_* functions convert to the convention -Delta + |df|^2 + L_f
// used by the parametrix and index modules.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "lgheat/errors.hpp"
#include "lgheat/scalar.hpp"
#include "lgheat/spectrum.hpp"

namespace lgheat {

struct OscillatorSpec {
  Complex tau{0.5, 0.0};

  double abs_tau() const { return std::abs(tau); }
  void validate() const {
    if (!(abs_tau() > 0.0)) throw Error(ErrorCode::InvalidArgument, "tau must be nonzero");
  }
};

namespace detail {

inline void require_positive_time(double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "t must be positive");
}

// exp of the common exponent -|z-w|^2/(2t) * 2at/sinh(2at) - a(|z|^2+|w|^2) tanh(at).
inline double oscillator_gaussian(double a, Complex z, Complex w, double t) {
  const double x = 2.0 * a * t;
  return std::exp(-std::norm(z - w) * a / std::sinh(x) - a * (std::norm(z) + std::norm(w)) * std::tanh(a * t));
}

}  // namespace detail

/// Spectrum on k-forms, levels 2|tau| m for m = 0..count-1 (k = 1) or 1..count (k = 0, 2).
inline Spectrum spectrum_k_forms(const OscillatorSpec& spec, int k, int count) {
  spec.validate();
  if (k < 0 || k > 2) throw Error(ErrorCode::InvalidArgument, "form degree must be 0, 1 or 2");
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "count must be positive");
  const double a = 2.0 * spec.abs_tau();
  Spectrum s;
  for (int m = 0; m < count + 1; ++m) {
    long mult = 0;
    if (k == 1) {
      mult = m + 1;                 // E-: k+l = m
      if (m >= 2) mult += m - 1;    // E+: k+l+2 = m
    } else {
      mult = m;                     // k+l+1 = m
    }
    if (mult > 0) s.levels.push_back({a * m, mult, 0.0});
    if (static_cast<int>(s.levels.size()) == count) break;
  }
  s.reliable_below = s.levels.back().value + a;
  return s;
}

/// 0/2-form kernel exactly as displayed.
inline double printed_kernel_0form(const OscillatorSpec& spec, Complex z, Complex w, double t) {
  spec.validate();
  detail::require_positive_time(t);
  const double a = spec.abs_tau();
  const double x = 2.0 * a * t;
  return (1.0 / (4.0 * std::numbers::pi * a * t)) * (x / std::sinh(x)) * detail::oscillator_gaussian(a, z, w, t);
}

/// 0/2-form heat kernel consistent with the spectrum 2|tau|(k+l+1).
inline double mehler_kernel_0form(const OscillatorSpec& spec, Complex z, Complex w, double t) {
  return 2.0 * spec.abs_tau() * printed_kernel_0form(spec, z, w, t);
}

/// The displayed 1-form kernel: scalar factors times form vectors
/// v-(z) = -tau/|tau| dz + dzbar and v+(z) = tau/|tau| dz + dzbar.
struct OneFormKernel {
  double scalar_minus = 0.0;
  double scalar_plus = 0.0;
  std::array<Complex, 2> form_minus{};
  std::array<Complex, 2> form_plus{};

  /// Operator on (dz, dzbar) coefficients, with each form direction turned
  /// into a rank-one projector (the form vectors have squared length 2).
  Eigen::Matrix2cd as_operator() const {
    Eigen::Vector2cd vm(form_minus[0], form_minus[1]);
    Eigen::Vector2cd vp(form_plus[0], form_plus[1]);
    return scalar_minus * (vm * vm.adjoint()) / 2.0 + scalar_plus * (vp * vp.adjoint()) / 2.0;
  }
};

inline OneFormKernel printed_kernel_1form(const OscillatorSpec& spec, Complex z, Complex w, double t) {
  const double a = spec.abs_tau();
  const double k0 = printed_kernel_0form(spec, z, w, t);
  const Complex phase = spec.tau / a;
  OneFormKernel k;
  k.scalar_minus = k0 * std::exp(2.0 * a * t);
  k.scalar_plus = k0 * std::exp(-2.0 * a * t);
  k.form_minus = {-phase, Complex(1.0, 0.0)};
  k.form_plus = {phase, Complex(1.0, 0.0)};
  return k;
}

inline OneFormKernel mehler_kernel_1form(const OscillatorSpec& spec, Complex z, Complex w, double t) {
  OneFormKernel k = printed_kernel_1form(spec, z, w, t);
  k.scalar_minus *= 2.0 * spec.abs_tau();
  k.scalar_plus *= 2.0 * spec.abs_tau();
  return k;
}

/// Normalized zero mode exp(-|tau||z|^2) sqrt(2|tau|/pi) on 1-forms, along v-.
/// (The displayed ground state writes exp(-tau|z|^2); for real positive tau the two coincide.)
inline double ground_state_amplitude(const OscillatorSpec& spec, Complex z) {
  const double a = spec.abs_tau();
  return std::sqrt(2.0 * a / std::numbers::pi) * std::exp(-a * std::norm(z));
}

/// Diagonal supertrace K0 - tr K1 + K2 with the Mehler kernels.
inline double diagonal_supertrace(const OscillatorSpec& spec, Complex z, double t) {
  const double a = spec.abs_tau();
  return mehler_kernel_0form(spec, z, z, t) * (2.0 - 2.0 * std::cosh(2.0 * a * t));
}

/// Displayed trace (1/(2 sinh(t/2)))^2; independent of tau as printed.
inline double printed_heat_trace_0forms(double t) {
  detail::require_positive_time(t);
  const double s = 2.0 * std::sinh(t / 2.0);
  return 1.0 / (s * s);
}

/// Sum of exp(-t lambda) over the stated 0-form spectrum: (1/(2 sinh |tau| t))^2.
inline double heat_trace_0forms(const OscillatorSpec& spec, double t) {
  spec.validate();
  detail::require_positive_time(t);
  const double s = 2.0 * std::sinh(spec.abs_tau() * t);
  return 1.0 / (s * s);
}

/// n-fold product of the displayed trace.
inline double printed_heat_trace_product(int n, double t) { return std::pow(printed_heat_trace_0forms(t), n); }

// ---- conversion to -Delta + |df|^2 + L_f ------------------------------------------

/// Scalar heat kernel of -Delta + |tau|^2 |z|^2 (f = tau z^2 / 2), from the
/// |tau| = 1/2 kernel by rescaling: |tau| K(sqrt|tau| z, sqrt|tau| w, 2|tau| t).
inline double converted_scalar_kernel(const OscillatorSpec& spec, Complex z, Complex w, double t) {
  const double a = spec.abs_tau();
  const double s = std::sqrt(a);
  return a * mehler_kernel_0form(OscillatorSpec{{0.5, 0.0}}, s * z, s * w, 2.0 * a * t);
}

/// On 1-forms L_f has eigenvalues -2|tau| (along v-) and +2|tau| (along v+).
inline double converted_diagonal_supertrace(const OscillatorSpec& spec, Complex z, double t) {
  const double a = spec.abs_tau();
  return converted_scalar_kernel(spec, z, z, t) * (2.0 - 2.0 * std::cosh(2.0 * a * t));
}

}  // namespace lgheat
