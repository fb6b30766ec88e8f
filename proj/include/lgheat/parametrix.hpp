#pragma once

// Heat-kernel parametrix P_k = E0 E1 sum t^j U_j for -Delta + |df|^2 + L_f,
// with E0 = (4 pi t)^-n exp(-|z-w|^2/4t) and E1 = exp(-t g(z,w)).
//
// Everything polynomial is exact and lives in two-point coordinates (u, w),
// u = z - w: z-derivatives act on the u slots, (z-w).grad_z is the Euler
// operator in u, and the tau^j-weighted segment integral multiplies a monomial
// of u-degree d by 1/(d + j + 1).

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <utility>
#include <vector>

#include "lgheat/clifford.hpp"
#include "lgheat/poly.hpp"

namespace lgheat {

/// Matrix over the exterior basis with polynomial entries.
template <typename C>
class OperatorPolynomial {
 public:
  using Key = std::pair<Mask, Mask>;
  using Entries = std::map<Key, Poly<C>>;

  OperatorPolynomial() = default;
  OperatorPolynomial(int n, int nvars) : n_(n), nvars_(nvars) {}

  static OperatorPolynomial identity(int n, int nvars) {
    OperatorPolynomial r(n, nvars);
    const Mask dim = Mask(1) << (2 * n);
    for (Mask m = 0; m < dim; ++m) r.entries_.emplace(Key{m, m}, Poly<C>::constant(nvars, from_rational<C>(Rational(1))));
    return r;
  }

  /// p * A for a scalar polynomial p and a constant operator A.
  static OperatorPolynomial from_product(const Poly<C>& p, const ExteriorOperator<C>& a) {
    OperatorPolynomial r(a.n(), p.nvars());
    for (Mask i = 0; i < a.dim(); ++i) {
      for (const auto& [j, v] : a.rows()[i]) r.add_entry({i, j}, p * v);
    }
    return r;
  }

  int n() const { return n_; }
  int nvars() const { return nvars_; }
  const Entries& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }

  std::size_t term_count() const {
    std::size_t s = 0;
    for (const auto& [k, p] : entries_) s += p.size();
    return s;
  }

  Poly<C> entry(Mask row, Mask col) const {
    const auto it = entries_.find({row, col});
    return it == entries_.end() ? Poly<C>(nvars_) : it->second;
  }

  void add_entry(const Key& k, const Poly<C>& p) {
    if (p.is_zero()) return;
    auto it = entries_.find(k);
    if (it == entries_.end()) {
      entries_.emplace(k, p);
    } else {
      it->second += p;
      if (it->second.is_zero()) entries_.erase(it);
    }
  }

  OperatorPolynomial& operator+=(const OperatorPolynomial& o) {
    for (const auto& [k, p] : o.entries_) add_entry(k, p);
    return *this;
  }
  OperatorPolynomial& operator-=(const OperatorPolynomial& o) {
    for (const auto& [k, p] : o.entries_) add_entry(k, -p);
    return *this;
  }
  friend OperatorPolynomial operator+(OperatorPolynomial a, const OperatorPolynomial& b) { return a += b; }
  friend OperatorPolynomial operator-(OperatorPolynomial a, const OperatorPolynomial& b) { return a -= b; }

  friend OperatorPolynomial operator*(const Poly<C>& p, const OperatorPolynomial& a) {
    OperatorPolynomial r(a.n_, a.nvars_);
    if (p.is_zero()) return r;
    for (const auto& [k, e] : a.entries_) r.add_entry(k, p * e);
    return r;
  }

  friend OperatorPolynomial operator*(const OperatorPolynomial& a, const C& s) {
    return a.map([&](const Poly<C>& e) { return e * s; });
  }

  friend OperatorPolynomial operator*(const OperatorPolynomial& a, const OperatorPolynomial& b) {
    OperatorPolynomial r(a.n_, a.nvars_);
    std::map<Mask, std::vector<std::pair<Mask, const Poly<C>*>>> b_rows;
    for (const auto& [k, e] : b.entries_) b_rows[k.first].emplace_back(k.second, &e);
    for (const auto& [k, e] : a.entries_) {
      const auto it = b_rows.find(k.second);
      if (it == b_rows.end()) continue;
      for (const auto& [col, q] : it->second) r.add_entry({k.first, col}, e * *q);
    }
    return r;
  }

  friend bool operator==(const OperatorPolynomial& a, const OperatorPolynomial& b) {
    return a.n_ == b.n_ && a.entries_ == b.entries_;
  }

  template <typename F>
  OperatorPolynomial map(F&& fn) const {
    OperatorPolynomial r(n_, nvars_);
    for (const auto& [k, e] : entries_) {
      Poly<C> p = fn(e);
      if (!p.is_zero()) {
        r.nvars_ = p.nvars();
        r.entries_.emplace(k, std::move(p));
      }
    }
    if (entries_.empty() && !r.entries_.empty()) r.nvars_ = r.entries_.begin()->second.nvars();
    return r;
  }

  /// Entry-wise substitution u = 0 (two-point to single-point).
  OperatorPolynomial diagonal() const {
    OperatorPolynomial r(n_, nvars_ / 2);
    for (const auto& [k, e] : entries_) r.add_entry(k, restrict_to_diagonal(e));
    return r;
  }

  /// sum over diagonal entries of (-1)^degree times the entry.
  Poly<C> supertrace() const {
    Poly<C> s(nvars_);
    for (const auto& [k, e] : entries_) {
      if (k.first != k.second) continue;
      if (form_degree(k.first) % 2) {
        s -= e;
      } else {
        s += e;
      }
    }
    return s;
  }

  /// Canonical dump: one block per entry with its polynomial.
  std::string dump(const std::vector<std::string>& names) const {
    std::ostringstream os;
    for (const auto& [k, e] : entries_) os << k.first << ' ' << k.second << ": " << format_polynomial(e, names) << '\n';
    return os.str();
  }

 private:
  int n_ = 0;
  int nvars_ = 0;
  Entries entries_;
};

/// Numeric snapshot of an operator polynomial for repeated evaluation.
class CompiledOperatorPolynomial {
 public:
  CompiledOperatorPolynomial() = default;

  template <typename C>
  explicit CompiledOperatorPolynomial(const OperatorPolynomial<C>& op) : n_(op.n()) {
    for (const auto& [k, e] : op.entries()) entries_.push_back({k.first, k.second, CompiledPoly(e)});
  }

  ExteriorOperator<Complex> operator()(std::span<const Complex> x) const {
    ExteriorOperator<Complex> r(n_);
    for (const auto& e : entries_) r.add_entry(e.row, e.col, e.poly(x));
    return r;
  }

  /// Diagonal entries only, combined with (-1)^degree.
  Complex supertrace(std::span<const Complex> x) const {
    Complex s(0.0, 0.0);
    for (const auto& e : entries_) {
      if (e.row != e.col) continue;
      const Complex v = e.poly(x);
      s += (form_degree(e.row) % 2) ? -v : v;
    }
    return s;
  }

  /// Frobenius norm of the evaluated matrix.
  double frobenius_norm(std::span<const Complex> x) const {
    double s = 0.0;
    for (const auto& e : entries_) s += std::norm(e.poly(x));
    return std::sqrt(s);
  }

 private:
  struct Entry {
    Mask row, col;
    CompiledPoly poly;
  };
  int n_ = 0;
  std::vector<Entry> entries_;
};

// ---- derivative conventions on two-point polynomials --------------------------------

namespace detail {

template <typename C>
Poly<C> dz_laplacian(const Poly<C>& p) {
  return laplacian(p, 0, p.nvars() / 2);
}

template <typename C>
Poly<C> dz_grad_dot(const Poly<C>& a, const Poly<C>& b) {
  return grad_dot(a, b, 0, a.nvars() / 2);
}

template <typename C>
Poly<C> dz_euler(const Poly<C>& p) {
  return radial_euler(p, 0, p.nvars() / 2);
}

}  // namespace detail

/// g(z, w) = integral_0^1 V(tau (z - w) + w) dtau in (u, w) form.
template <typename C>
Poly<C> build_g(const Poly<C>& v) {
  return segment_average(v, 0);
}

/// B(z) = L_f(Hessian f at z) as an operator polynomial in (u, w).
template <typename C>
OperatorPolynomial<C> build_B(const Poly<C>& f) {
  const int n = f.nvars();
  const auto s = lf_structure<C>(n);
  OperatorPolynomial<C> b(n, 2 * n);
  for (int mu = 0; mu < n; ++mu) {
    for (int l = 0; l < n; ++l) {
      const Poly<C> h = wirtinger_derivative(wirtinger_derivative(f, mu, false), l, false);
      if (h.is_zero()) continue;
      const auto k = static_cast<std::size_t>(mu * n + l);
      b += OperatorPolynomial<C>::from_product(to_two_point(h), s.a[k]);
      b += OperatorPolynomial<C>::from_product(to_two_point(conjugate(h)), s.abar[k]);
    }
  }
  return b;
}

template <typename C>
struct ParametrixBundle {
  Poly<C> f;
  int n = 0;
  int k = 0;
  Poly<C> v;  // |df|^2 as a single-point polynomial
  Poly<C> g;  // two-point
  OperatorPolynomial<C> b;
  std::vector<OperatorPolynomial<C>> u;

  // Scalar pieces of the recursion, cached.
  Poly<C> lap_g;
  Poly<C> grad_g_sq;
};

namespace detail {

// Right-hand side of the recursion for U_{j+1}:
// Delta U_j - B U_j - Delta g U_{j-1} - 2 grad g . grad U_{j-1} + (grad g)^2 U_{j-2}.
template <typename C>
OperatorPolynomial<C> recursion_rhs(const ParametrixBundle<C>& pb, int j) {
  const auto& uj = pb.u[static_cast<std::size_t>(j)];
  OperatorPolynomial<C> rhs = uj.map([](const Poly<C>& e) { return dz_laplacian(e); });
  rhs -= pb.b * uj;
  if (j >= 1) {
    const auto& um1 = pb.u[static_cast<std::size_t>(j - 1)];
    rhs -= pb.lap_g * um1;
    const C two = from_rational<C>(Rational(2));
    rhs -= um1.map([&](const Poly<C>& e) { return dz_grad_dot(pb.g, e) * two; });
  }
  if (j >= 2) rhs += pb.grad_g_sq * pb.u[static_cast<std::size_t>(j - 2)];
  return rhs;
}

}  // namespace detail

/// Builds U_0..U_k exactly.
template <typename C>
ParametrixBundle<C> build_parametrix(const Poly<C>& f, int k) {
  if (k < 0) throw Error(ErrorCode::InvalidArgument, "truncation order must be non-negative");
  if (!f.is_holomorphic()) throw Error(ErrorCode::NotHolomorphic, "parametrix needs a holomorphic f");
  ParametrixBundle<C> pb;
  pb.f = f;
  pb.n = f.nvars();
  pb.k = k;
  pb.v = hermitian_gradient_square(f);
  pb.g = build_g(pb.v);
  pb.b = build_B(f);
  pb.lap_g = detail::dz_laplacian(pb.g);
  pb.grad_g_sq = detail::dz_grad_dot(pb.g, pb.g);
  pb.u.push_back(OperatorPolynomial<C>::identity(pb.n, 2 * pb.n));
  for (int j = 0; j < k; ++j) {
    const auto rhs = detail::recursion_rhs(pb, j);
    pb.u.push_back(rhs.map([&](const Poly<C>& e) { return segment_average_two_point(e, static_cast<unsigned>(j)); }));
  }
  return pb;
}

/// Default truncation order 2n + 2.
inline int default_truncation(int n) { return 2 * n + 2; }

// ---- exact identities ---------------------------------------------------------------

/// (z - w).grad_z g + g - V(z); zero for a correct g.
template <typename C>
Poly<C> mean_value_defect(const ParametrixBundle<C>& pb) {
  return detail::dz_euler(pb.g) + pb.g - to_two_point(pb.v);
}

/// Left side of the recursion at step j (1 <= j <= k-1); zero for a correct U.
/// For j = 0 it is U_1 + (z-w).grad U_1 + B.
template <typename C>
OperatorPolynomial<C> recursion_defect(const ParametrixBundle<C>& pb, int j) {
  if (j < 0 || j + 1 > pb.k) throw Error(ErrorCode::InvalidArgument, "recursion step out of range");
  const auto& next = pb.u[static_cast<std::size_t>(j + 1)];
  const C jp1 = from_rational<C>(Rational(j + 1));
  OperatorPolynomial<C> lhs = next * jp1;
  lhs += next.map([](const Poly<C>& e) { return detail::dz_euler(e); });
  lhs -= detail::recursion_rhs(pb, j);
  return lhs;
}

/// str U_j(z, z) as a polynomial in z.
template <typename C>
Poly<C> diagonal_supertrace(const ParametrixBundle<C>& pb, int j) {
  return pb.u[static_cast<std::size_t>(j)].diagonal().supertrace();
}

/// str L_f(z)^m as a polynomial in z.
template <typename C>
Poly<C> supertrace_Lf_power(const ParametrixBundle<C>& pb, int m) {
  const auto bd = pb.b.diagonal();
  OperatorPolynomial<C> p = OperatorPolynomial<C>::identity(pb.n, pb.n);
  for (int i = 0; i < m; ++i) p = p * bd;
  return p.supertrace();
}

// ---- residual -------------------------------------------------------------------------

/// The three groups of R~_k multiplying t^k, t^{k+1}, t^{k+2}.
template <typename C>
struct ResidualGroups {
  OperatorPolynomial<C> r1, r2, r3;
};

template <typename C>
ResidualGroups<C> residual_groups(const ParametrixBundle<C>& pb) {
  const int k = pb.k;
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "residual needs k >= 2");
  const auto& uk = pb.u[static_cast<std::size_t>(k)];
  const auto& uk1 = pb.u[static_cast<std::size_t>(k - 1)];
  const auto& uk2 = pb.u[static_cast<std::size_t>(k - 2)];
  const C two = from_rational<C>(Rational(2));
  auto grad_term = [&](const OperatorPolynomial<C>& x) {
    return x.map([&](const Poly<C>& e) { return detail::dz_grad_dot(pb.g, e) * two; });
  };
  ResidualGroups<C> r;
  r.r1 = pb.b * uk - uk.map([](const Poly<C>& e) { return detail::dz_laplacian(e); });
  r.r1 += pb.lap_g * uk1;
  r.r1 += grad_term(uk1);
  r.r1 -= pb.grad_g_sq * uk2;
  r.r2 = pb.lap_g * uk + grad_term(uk) - pb.grad_g_sq * uk1;
  r.r3 = OperatorPolynomial<C>(pb.n, 2 * pb.n) - pb.grad_g_sq * uk;
  return r;
}

// ---- numeric evaluation --------------------------------------------------------------

/// Compiled bundle for evaluating P_k and R_k at many points.
class ParametrixEvaluator {
 public:
  template <typename C>
  explicit ParametrixEvaluator(const ParametrixBundle<C>& pb, bool with_residual = false) : n_(pb.n), k_(pb.k), g_(pb.g) {
    for (const auto& u : pb.u) u_.emplace_back(u);
    if (with_residual) {
      const auto r = residual_groups(pb);
      r_ = {CompiledOperatorPolynomial(r.r1), CompiledOperatorPolynomial(r.r2), CompiledOperatorPolynomial(r.r3)};
    }
  }

  int n() const { return n_; }
  int k() const { return k_; }

  /// P_k(z, w, t).
  ExteriorOperator<Complex> evaluate(std::span<const Complex> z, std::span<const Complex> w, double t) const {
    const auto x = two_point(z, w);
    ExteriorOperator<Complex> sum(n_);
    double tp = 1.0;
    for (const auto& u : u_) {
      sum += u(x) * Complex(tp, 0.0);
      tp *= t;
    }
    return sum * Complex(prefactor(x, t), 0.0);
  }

  /// str P_k(z, z, t).
  double diagonal_supertrace(std::span<const Complex> z, double t) const {
    const auto x = two_point(z, z);
    Complex s(0.0, 0.0);
    double tp = 1.0;
    for (const auto& u : u_) {
      s += u.supertrace(x) * tp;
      tp *= t;
    }
    return (s * prefactor(x, t)).real();
  }

  /// Frobenius norm of E1 R~_k(z, w, t), i.e. R_k with the Gaussian factor E0 divided out.
  double residual_norm(std::span<const Complex> z, std::span<const Complex> w, double t) const {
    if (r_.empty()) throw Error(ErrorCode::InvalidArgument, "evaluator built without residual");
    const auto x = two_point(z, w);
    const double tk = std::pow(t, k_);
    ExteriorOperator<Complex> r = r_[0](x) * Complex(tk, 0.0);
    r += r_[1](x) * Complex(tk * t, 0.0);
    r += r_[2](x) * Complex(tk * t * t, 0.0);
    double s = 0.0;
    for (const auto& row : r.rows()) {
      for (const auto& [c, v] : row) s += std::norm(v);
    }
    return std::sqrt(s) * std::exp(-t * g_(x).real());
  }

 private:
  std::vector<Complex> two_point(std::span<const Complex> z, std::span<const Complex> w) const {
    std::vector<Complex> x(static_cast<std::size_t>(2 * n_));
    for (int i = 0; i < n_; ++i) {
      x[static_cast<std::size_t>(i)] = z[static_cast<std::size_t>(i)] - w[static_cast<std::size_t>(i)];
      x[static_cast<std::size_t>(n_ + i)] = w[static_cast<std::size_t>(i)];
    }
    return x;
  }

  double prefactor(std::span<const Complex> x, double t) const {
    double u2 = 0.0;
    for (int i = 0; i < n_; ++i) u2 += std::norm(x[static_cast<std::size_t>(i)]);
    return std::pow(4.0 * std::numbers::pi * t, -n_) * std::exp(-u2 / (4.0 * t) - t * g_(x).real());
  }

  int n_;
  int k_;
  CompiledPoly g_;
  std::vector<CompiledOperatorPolynomial> u_;
  std::vector<CompiledOperatorPolynomial> r_;
};

struct ResidualReport {
  std::vector<double> t_grid;
  std::vector<double> max_norm;  // max over samples of |E1 R~_k|
  double fitted_exponent = 0.0;
};

/// Fits the leading small-t power of E1 R~_k by least squares on log-log data.
template <typename C>
ResidualReport residual_order_check(const ParametrixBundle<C>& pb, const std::vector<std::pair<std::vector<Complex>, std::vector<Complex>>>& samples,
                                    const std::vector<double>& t_grid) {
  const ParametrixEvaluator ev(pb, true);
  ResidualReport rep;
  rep.t_grid = t_grid;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double t : t_grid) {
    double m = 0.0;
    for (const auto& [z, w] : samples) m = std::max(m, ev.residual_norm(z, w, t));
    rep.max_norm.push_back(m);
    const double x = std::log(t), y = std::log(m);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double cnt = static_cast<double>(t_grid.size());
  rep.fitted_exponent = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  return rep;
}

}  // namespace lgheat
