#pragma once

// Coefficient fields used across the library: exact rationals (GMP), exact
// Gaussian rationals, and double complex for numeric evaluation.

#include <gmpxx.h>

#include <complex>
#include <ostream>
#include <string>

namespace lgheat {

using Rational = mpq_class;
using Complex = std::complex<double>;

/// a + b*i with a, b exact rationals.
class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(long v) : re_(v) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(Rational re) : re_(std::move(re)) { re_.canonicalize(); }  // NOLINT
  GaussianRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  static GaussianRational imaginary_unit() { return {Rational(0), Rational(1)}; }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  GaussianRational conj() const { return {re_, -im_}; }
  Rational norm() const { return re_ * re_ + im_ * im_; }

  GaussianRational& operator+=(const GaussianRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  GaussianRational& operator*=(const GaussianRational& o) {
    Rational r = re_ * o.re_ - im_ * o.im_;
    im_ = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    return *this;
  }
  GaussianRational& operator/=(const GaussianRational& o) {
    const Rational d = o.norm();
    Rational r = (re_ * o.re_ + im_ * o.im_) / d;
    im_ = (im_ * o.re_ - re_ * o.im_) / d;
    re_ = std::move(r);
    return *this;
  }

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re_, -a.im_}; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

 private:
  Rational re_{0};
  Rational im_{0};
};

// ---- uniform scalar interface ------------------------------------------------

inline bool is_zero(const Rational& x) { return sgn(x) == 0; }
inline bool is_zero(const GaussianRational& x) { return x.is_zero(); }
inline bool is_zero(const Complex& x) { return x == Complex(0.0, 0.0); }
inline bool is_zero(double x) { return x == 0.0; }

inline Rational conj(const Rational& x) { return x; }
inline GaussianRational conj(const GaussianRational& x) { return x.conj(); }
inline Complex conj(const Complex& x) { return std::conj(x); }
inline double conj(double x) { return x; }

inline Complex to_complex(const Rational& x) { return {x.get_d(), 0.0}; }
inline Complex to_complex(const GaussianRational& x) { return {x.re().get_d(), x.im().get_d()}; }
inline Complex to_complex(const Complex& x) { return x; }
inline Complex to_complex(double x) { return {x, 0.0}; }

/// Canonical text for a rational: "p" or "p/q".
inline std::string rational_text(const Rational& x) { return x.get_str(); }

/// Parses "p" or "p/q" (as produced by rational_text). Throws std::invalid_argument.
inline Rational rational_from_text(const std::string& s) {
  Rational r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
  r.canonicalize();
  return r;
}

inline std::string to_string(const GaussianRational& x) {
  auto imag_text = [](const Rational& m) { return m == 1 ? std::string("i") : rational_text(m) + "*i"; };
  if (x.is_real()) return rational_text(x.re());
  if (sgn(x.re()) == 0) return sgn(x.im()) < 0 ? "-" + imag_text(-x.im()) : imag_text(x.im());
  std::string s = rational_text(x.re());
  if (sgn(x.im()) < 0) {
    s += " - " + imag_text(-x.im());
  } else {
    s += " + " + imag_text(x.im());
  }
  return s;
}

inline std::ostream& operator<<(std::ostream& os, const GaussianRational& x) { return os << to_string(x); }

/// Exact-field tag: lets templates ask whether a coefficient type is exact.
template <typename T>
inline constexpr bool is_exact_v = false;
template <>
inline constexpr bool is_exact_v<Rational> = true;
template <>
inline constexpr bool is_exact_v<GaussianRational> = true;

/// Narrowing conversion used when an exact polynomial is evaluated numerically.
template <typename To, typename From>
To convert_scalar(const From& x) {
  if constexpr (std::is_same_v<To, From>) {
    return x;
  } else if constexpr (std::is_same_v<To, Complex>) {
    return to_complex(x);
  } else if constexpr (std::is_same_v<To, GaussianRational> && std::is_same_v<From, Rational>) {
    return GaussianRational(x);
  } else {
    static_assert(sizeof(To) == 0, "unsupported scalar conversion");
  }
}

}  // namespace lgheat
