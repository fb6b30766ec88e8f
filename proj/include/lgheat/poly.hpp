#pragma once

/**
 * @file poly.hpp
 * @brief Sparse polynomials in z_1..z_n and their conjugates.
 *
 * A Poly<C> in n variables maps exponent pairs (a | b), stored in one
 * Monomial with z-powers in slots [0, n) and conj-powers in [n, 2n), to
 * coefficients of type C. Terms are kept in lexicographic exponent order and
 * zero coefficients are never stored.
 *
 * Two-point polynomials reuse the same type with 2n variables: variable i < n
 * is u_i = z_i - w_i and variable n + i is w_i.
 */

#include <algorithm>
#include <complex>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "lgheat/errors.hpp"
#include "lgheat/monomial.hpp"
#include "lgheat/scalar.hpp"

namespace lgheat {

template <typename C>
C from_rational(const Rational& r) {
  if constexpr (std::is_same_v<C, Complex>) {
    return Complex(r.get_d(), 0.0);
  } else if constexpr (std::is_same_v<C, double>) {
    return r.get_d();
  } else {
    return C(r);
  }
}

namespace detail {

inline Monomial swap_conjugate_slots(const Monomial& m, int nvars) {
  Monomial r;
  for (int i = 0; i < nvars; ++i) {
    r.set(i, m[nvars + i]);
    r.set(nvars + i, m[i]);
  }
  return r;
}

}  // namespace detail

template <typename C>
class Poly {
 public:
  using Coefficient = C;
  using Terms = std::map<Monomial, C>;

  Poly() = default;
  explicit Poly(int nvars) : nvars_(nvars) {
    if (nvars < 0 || nvars > Monomial::kMaxVariables) {
      throw Error(ErrorCode::InvalidArgument, "variable count out of range: " + std::to_string(nvars));
    }
  }

  static int slot(int nvars, int index, bool conjugate) { return conjugate ? nvars + index : index; }

  static Poly constant(int nvars, const C& c) {
    Poly p(nvars);
    p.add_term(Monomial{}, c);
    return p;
  }

  /// z_index (0-based) or its conjugate.
  static Poly variable(int nvars, int index, bool conjugate = false) {
    if (index < 0 || index >= nvars) throw Error(ErrorCode::VariableOutOfRange, "variable index out of range");
    Monomial m;
    m.set(slot(nvars, index, conjugate), 1);
    Poly p(nvars);
    p.add_term(m, from_rational<C>(Rational(1)));
    return p;
  }

  int nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Monomial& m, const C& c) {
    if (lgheat::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (lgheat::is_zero(it->second)) terms_.erase(it);
    }
  }

  C coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? C{} : it->second;
  }

  unsigned total_degree() const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
  }

  bool is_holomorphic() const {
    for (const auto& [m, c] : terms_) {
      if (m.degree(nvars_, nvars_) != 0) return false;
    }
    return true;
  }

  /// Coefficient of (a,b) equals the conjugate of the coefficient of (b,a).
  bool is_real() const { return *this == conj(); }

  Poly conj() const {
    Poly r(nvars_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(detail::swap_conjugate_slots(m, nvars_), lgheat::conj(c));
    return r;
  }

  Poly& operator+=(const Poly& o) {
    check_compatible(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    check_compatible(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  Poly& operator*=(const C& s) {
    if (lgheat::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(const Poly& a) {
    Poly r(a.nvars_);
    for (const auto& [m, c] : a.terms_) r.terms_.emplace(m, -c);
    return r;
  }
  friend Poly operator*(Poly a, const C& s) { return a *= s; }
  friend Poly operator*(const C& s, Poly a) { return a *= s; }

  friend Poly operator*(const Poly& a, const Poly& b) {
    a.check_compatible(b);
    std::unordered_map<Monomial, C, MonomialHash> acc;
    acc.reserve(a.size() * b.size());
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        C prod = ca * cb;
        auto [it, inserted] = acc.try_emplace(ma * mb, prod);
        if (!inserted) it->second += prod;
      }
    }
    Poly r(a.nvars_);
    for (auto& [m, c] : acc) {
      if (!lgheat::is_zero(c)) r.terms_.emplace(m, std::move(c));
    }
    return r;
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  friend bool operator==(const Poly& a, const Poly& b) { return a.nvars_ == b.nvars_ && a.terms_ == b.terms_; }

  /// Applies f to every coefficient, producing a polynomial over another field.
  template <typename D, typename F>
  Poly<D> map_coefficients(F&& f) const {
    Poly<D> r(nvars_);
    for (const auto& [m, c] : terms_) r.add_term(m, f(c));
    return r;
  }

  template <typename D>
  Poly<D> cast() const {
    return map_coefficients<D>([](const C& c) { return convert_scalar<D>(c); });
  }

  /// Multiplies each term by w(monomial). Terms mapped to zero are dropped.
  template <typename F>
  Poly reweight(F&& w) const {
    Poly r(nvars_);
    for (const auto& [m, c] : terms_) r.add_term(m, c * w(m));
    return r;
  }

  /// Keeps only terms for which pred(monomial) holds.
  template <typename F>
  Poly filter(F&& pred) const {
    Poly r(nvars_);
    for (const auto& [m, c] : terms_) {
      if (pred(m)) r.terms_.emplace(m, c);
    }
    return r;
  }

  /// Direct numeric evaluation at z (size nvars); conj slots use conj(z).
  Complex evaluate(std::span<const Complex> z) const {
    if (static_cast<int>(z.size()) != nvars_) throw Error(ErrorCode::InvalidArgument, "evaluation point has wrong size");
    Complex sum{0.0, 0.0};
    for (const auto& [m, c] : terms_) {
      Complex t = to_complex(c);
      for (int i = 0; i < nvars_; ++i) {
        for (unsigned k = 0; k < m[i]; ++k) t *= z[static_cast<std::size_t>(i)];
        for (unsigned k = 0; k < m[nvars_ + i]; ++k) t *= std::conj(z[static_cast<std::size_t>(i)]);
      }
      sum += t;
    }
    return sum;
  }

 private:
  void check_compatible(const Poly& o) const {
    if (nvars_ != o.nvars_) throw Error(ErrorCode::InvalidArgument, "polynomials have different variable counts");
  }

  int nvars_ = 0;
  Terms terms_;
};

using MixedPolynomial = Poly<GaussianRational>;

// ---- algebra helpers ---------------------------------------------------------

template <typename C>
Poly<C> pow(const Poly<C>& p, unsigned e) {
  Poly<C> result = Poly<C>::constant(p.nvars(), from_rational<C>(Rational(1)));
  Poly<C> base = p;
  while (e > 0) {
    if (e & 1U) result *= base;
    e >>= 1U;
    if (e > 0) base *= base;
  }
  return result;
}

/// d/dz_index (conjugate=false) or d/dconj(z_index) (conjugate=true).
template <typename C>
Poly<C> wirtinger_derivative(const Poly<C>& p, int index, bool conjugate) {
  if (index < 0 || index >= p.nvars()) throw Error(ErrorCode::VariableOutOfRange, "derivative index out of range");
  const int s = Poly<C>::slot(p.nvars(), index, conjugate);
  Poly<C> r(p.nvars());
  for (const auto& [m, c] : p.terms()) {
    const unsigned e = m[s];
    if (e == 0) continue;
    Monomial d = m;
    d.set(s, e - 1);
    r.add_term(d, c * from_rational<C>(Rational(e)));
  }
  return r;
}

/// Real Laplacian over complex variables [first, first+count): 4 sum d_i dbar_i.
template <typename C>
Poly<C> laplacian(const Poly<C>& p, int first, int count) {
  Poly<C> r(p.nvars());
  for (int i = first; i < first + count; ++i) {
    r += wirtinger_derivative(wirtinger_derivative(p, i, false), i, true);
  }
  return r * from_rational<C>(Rational(4));
}

/// Real gradient contraction grad p . grad q = 2 sum (d_i p dbar_i q + dbar_i p d_i q).
template <typename C>
Poly<C> grad_dot(const Poly<C>& p, const Poly<C>& q, int first, int count) {
  Poly<C> r(p.nvars());
  for (int i = first; i < first + count; ++i) {
    r += wirtinger_derivative(p, i, false) * wirtinger_derivative(q, i, true);
    r += wirtinger_derivative(p, i, true) * wirtinger_derivative(q, i, false);
  }
  return r * from_rational<C>(Rational(2));
}

/// Euler operator x . grad_x over complex variables [first, first+count):
/// multiplies each term by its degree in those variables and their conjugates.
template <typename C>
Poly<C> radial_euler(const Poly<C>& p, int first, int count) {
  const int n = p.nvars();
  return p.reweight([&](const Monomial& m) {
    return from_rational<C>(Rational(m.degree(first, count) + m.degree(n + first, count)));
  });
}

template <typename C>
Poly<C> conjugate(const Poly<C>& p) {
  return p.conj();
}

/// sum_i d_i f * conj(d_i f) for holomorphic f.
template <typename C>
Poly<C> hermitian_gradient_square(const Poly<C>& f) {
  if (!f.is_holomorphic()) throw Error(ErrorCode::NotHolomorphic, "hermitian_gradient_square needs a holomorphic polynomial");
  Poly<C> v(f.nvars());
  for (int i = 0; i < f.nvars(); ++i) {
    Poly<C> d = wirtinger_derivative(f, i, false);
    v += d * conjugate(d);
  }
  return v;
}

// ---- two-point representation --------------------------------------------------

/// p(z) rewritten in (u, w) with z = u + w, binomially expanded. Result has 2n variables.
template <typename C>
Poly<C> to_two_point(const Poly<C>& p) {
  const int n = p.nvars();
  if (2 * n > Monomial::kMaxVariables) throw Error(ErrorCode::Unsupported, "two-point form supports at most 4 variables");
  const int tn = 2 * n;
  Poly<C> r(tn);
  for (const auto& [m, c] : p.terms()) {
    std::vector<std::pair<Monomial, Rational>> acc{{Monomial{}, Rational(1)}};
    for (int i = 0; i < n; ++i) {
      for (int conj_part = 0; conj_part < 2; ++conj_part) {
        const unsigned e = m[conj_part ? n + i : i];
        if (e == 0) continue;
        const int su = Poly<C>::slot(tn, i, conj_part != 0);
        const int sw = Poly<C>::slot(tn, n + i, conj_part != 0);
        std::vector<std::pair<Monomial, Rational>> next;
        Rational binom(1);
        for (unsigned k = 0; k <= e; ++k) {
          for (const auto& [mm, cc] : acc) {
            Monomial t = mm;
            t.set(su, k);
            t.set(sw, e - k);
            next.emplace_back(t, cc * binom);
          }
          binom = binom * Rational(e - k) / Rational(k + 1);
        }
        acc = std::move(next);
      }
    }
    for (const auto& [mm, cc] : acc) r.add_term(mm, c * from_rational<C>(cc));
  }
  return r;
}

/// Degree of a two-point monomial in u and conj(u), for a 2n-variable polynomial.
inline unsigned u_degree(const Monomial& m, int two_point_vars) {
  const int n = two_point_vars / 2;
  return m.degree(0, n) + m.degree(two_point_vars, n);
}

/// Substitutes u = 0: the diagonal z = w as a polynomial in w (n variables).
template <typename C>
Poly<C> restrict_to_diagonal(const Poly<C>& tp) {
  const int tn = tp.nvars();
  const int n = tn / 2;
  Poly<C> r(n);
  for (const auto& [m, c] : tp.terms()) {
    if (u_degree(m, tn) != 0) continue;
    Monomial d;
    for (int i = 0; i < n; ++i) {
      d.set(i, m[n + i]);
      d.set(n + i, m[tn + n + i]);
    }
    r.add_term(d, c);
  }
  return r;
}

/// G(u, w) -> G(-u, u + w): the same function with the roles of z and w exchanged.
template <typename C>
Poly<C> swap_points(const Poly<C>& tp) {
  const int tn = tp.nvars();
  const int n = tn / 2;
  Poly<C> result(tn);
  for (const auto& [m, c] : tp.terms()) {
    Poly<C> term = Poly<C>::constant(tn, c);
    for (int i = 0; i < n; ++i) {
      for (int cj = 0; cj < 2; ++cj) {
        const bool is_conj = cj != 0;
        const unsigned eu = m[Poly<C>::slot(tn, i, is_conj)];
        const unsigned ew = m[Poly<C>::slot(tn, n + i, is_conj)];
        if (eu > 0) {
          Poly<C> neg_u = -Poly<C>::variable(tn, i, is_conj);
          term *= pow(neg_u, eu);
        }
        if (ew > 0) {
          Poly<C> shifted = Poly<C>::variable(tn, i, is_conj) + Poly<C>::variable(tn, n + i, is_conj);
          term *= pow(shifted, ew);
        }
      }
    }
    result += term;
  }
  return result;
}

/// Integral over tau in [0,1] of p(tau*u + w) * tau^j, expanded exactly: each
/// monomial of u-degree d picks up 1/(d + j + 1). A single-point p is first
/// moved to (u, w) form; a polynomial that is already two-point is used as is.
template <typename C>
Poly<C> segment_average_two_point(const Poly<C>& tp, unsigned j) {
  const int tn = tp.nvars();
  return tp.reweight([&](const Monomial& m) { return from_rational<C>(Rational(1, u_degree(m, tn) + j + 1)); });
}

template <typename C>
Poly<C> segment_average(const Poly<C>& p, unsigned j) {
  return segment_average_two_point(to_two_point(p), j);
}

// ---- numeric evaluation ----------------------------------------------------------

/// Double-precision snapshot of a polynomial with precomputed power tables;
/// used in hot loops (Monte Carlo, quadrature, residual sampling).
class CompiledPoly {
 public:
  CompiledPoly() = default;

  template <typename C>
  explicit CompiledPoly(const Poly<C>& p) : nvars_(p.nvars()) {
    for (const auto& [m, c] : p.terms()) {
      Term t;
      t.coef = to_complex(c);
      for (int s = 0; s < 2 * nvars_; ++s) {
        t.exps[static_cast<std::size_t>(s)] = static_cast<std::uint8_t>(m[s]);
        max_exp_ = std::max<unsigned>(max_exp_, m[s]);
      }
      terms_.push_back(t);
    }
  }

  int nvars() const { return nvars_; }

  Complex operator()(std::span<const Complex> z) const {
    const std::size_t stride = max_exp_ + 1;
    powers_.assign(static_cast<std::size_t>(2 * nvars_) * stride, Complex(1.0, 0.0));
    for (int i = 0; i < nvars_; ++i) {
      const Complex zi = z[static_cast<std::size_t>(i)];
      const Complex zc = std::conj(zi);
      Complex* pz = &powers_[static_cast<std::size_t>(i) * stride];
      Complex* pc = &powers_[static_cast<std::size_t>(nvars_ + i) * stride];
      for (std::size_t k = 1; k < stride; ++k) {
        pz[k] = pz[k - 1] * zi;
        pc[k] = pc[k - 1] * zc;
      }
    }
    Complex sum(0.0, 0.0);
    for (const auto& t : terms_) {
      Complex v = t.coef;
      for (int s = 0; s < 2 * nvars_; ++s) {
        const auto e = t.exps[static_cast<std::size_t>(s)];
        if (e) v *= powers_[static_cast<std::size_t>(s) * stride + e];
      }
      sum += v;
    }
    return sum;
  }

 private:
  struct Term {
    Complex coef;
    std::array<std::uint8_t, Monomial::kSlots> exps{};
  };
  int nvars_ = 0;
  unsigned max_exp_ = 0;
  std::vector<Term> terms_;
  mutable std::vector<Complex> powers_;
};

// ---- printing --------------------------------------------------------------------

namespace detail {

inline std::string paren_rational(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return "(" + rational_text(r) + ")";
}

/// Coefficient text and sign for a term; empty text means a unit coefficient.
inline std::pair<bool, std::string> coefficient_text(const GaussianRational& c, bool constant_term) {
  if (c.is_real()) {
    Rational mag = abs(c.re());
    bool neg = sgn(c.re()) < 0;
    if (mag == 1 && !constant_term) return {neg, ""};
    return {neg, paren_rational(mag)};
  }
  if (sgn(c.re()) == 0) {
    Rational mag = abs(c.im());
    bool neg = sgn(c.im()) < 0;
    if (mag == 1) return {neg, "i"};
    return {neg, paren_rational(mag) + "*i"};
  }
  return {false, "(" + to_string(c) + ")"};
}

inline std::pair<bool, std::string> coefficient_text(const Rational& c, bool constant_term) {
  return coefficient_text(GaussianRational(c), constant_term);
}

}  // namespace detail

/// Canonical text. names[i] is the display name of variable i; conjugates print as conj(name).
template <typename C>
std::string format_polynomial(const Poly<C>& p, const std::vector<std::string>& names) {
  if (p.is_zero()) return "0";
  const int n = p.nvars();
  std::string out;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    auto [neg, text] = detail::coefficient_text(c, m.is_one());
    std::string factors;
    for (int s = 0; s < 2 * n; ++s) {
      const unsigned e = m[s];
      if (e == 0) continue;
      const int var = s < n ? s : s - n;
      std::string f = s < n ? names[static_cast<std::size_t>(var)] : "conj(" + names[static_cast<std::size_t>(var)] + ")";
      if (e > 1) f += "^" + std::to_string(e);
      if (!factors.empty()) factors += "*";
      factors += f;
    }
    std::string body = text;
    if (!factors.empty()) body = body.empty() ? factors : body + "*" + factors;
    if (first) {
      out = neg ? "-" + body : body;
      first = false;
    } else {
      out += neg ? " - " : " + ";
      out += body;
    }
  }
  return out;
}

inline std::vector<std::string> z_names(int n) {
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("z" + std::to_string(i));
  return names;
}

inline std::vector<std::string> two_point_names(int two_point_vars) {
  const int n = two_point_vars / 2;
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("u" + std::to_string(i));
  for (int i = 1; i <= n; ++i) names.push_back("w" + std::to_string(i));
  return names;
}

template <typename C>
std::string to_string(const Poly<C>& p) {
  return format_polynomial(p, z_names(p.nvars()));
}

}  // namespace lgheat
