#pragma once

// Weight systems of quasi-homogeneous polynomials, the non-degeneracy and
// tameness hypotheses, and the Milnor number.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <vector>

#include "lgheat/derivatives.hpp"
#include "lgheat/linalg_exact.hpp"
#include "lgheat/poly.hpp"

namespace lgheat {

struct WeightVector {
  std::vector<Rational> q;

  int n() const { return static_cast<int>(q.size()); }
  Rational q_max() const { return *std::max_element(q.begin(), q.end()); }
  Rational q_min() const { return *std::min_element(q.begin(), q.end()); }
  /// Sum of the weights, |q|.
  Rational total() const { return std::accumulate(q.begin(), q.end(), Rational(0)); }
  /// Common denominator d with q_i = k_i / d.
  mpz_class denominator() const {
    mpz_class d = 1;
    for (const auto& x : q) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), x.get_den_mpz_t());
    return d;
  }
  std::vector<mpz_class> numerators() const {
    const mpz_class d = denominator();
    std::vector<mpz_class> k;
    for (const auto& x : q) k.push_back(x.get_num() * (d / x.get_den()));
    return k;
  }
};

/// Weighted degree b . q of a holomorphic monomial.
inline Rational weighted_degree(const Monomial& m, const WeightVector& w) {
  Rational s(0);
  for (int i = 0; i < w.n(); ++i) s += Rational(m[i]) * w.q[static_cast<std::size_t>(i)];
  return s;
}

struct SolveWeightsOptions {
  /// Also reject q_i > 1/2, which cannot occur for a non-degenerate f.
  bool require_nondegenerate_range = true;
};

inline WeightVector solve_weights(const MixedPolynomial& f, SolveWeightsOptions opts = {}) {
  if (f.is_zero()) throw Error(ErrorCode::InvalidArgument, "zero polynomial has no weights");
  if (!f.is_holomorphic()) throw Error(ErrorCode::NotHolomorphic, "weights need a holomorphic polynomial");
  const int n = f.nvars();
  RationalMatrix a;
  for (const auto& [m, c] : f.terms()) {
    if (m.degree() < 2) throw Error(ErrorCode::InvalidArgument, "constant or linear term present");
    std::vector<Rational> row;
    for (int i = 0; i < n; ++i) row.emplace_back(m[i]);
    a.push_back(std::move(row));
  }
  const auto sol = solve_linear(a, std::vector<Rational>(a.size(), Rational(1)));
  if (sol.status == SolveStatus::Inconsistent) {
    throw Error(ErrorCode::NotQuasiHomogeneous, "no weights satisfy b.q = 1 for every monomial");
  }
  if (sol.status == SolveStatus::Underdetermined) {
    throw Error(ErrorCode::WeightsNotUnique, "weight system has rank below n");
  }
  WeightVector w{sol.x};
  for (int i = 0; i < n; ++i) {
    const Rational& qi = w.q[static_cast<std::size_t>(i)];
    if (sgn(qi) <= 0 || (opts.require_nondegenerate_range && qi > Rational(1, 2))) {
      throw Error(ErrorCode::WeightOutOfRange, "weight q" + std::to_string(i + 1) + " = " + qi.get_str() + " outside (0, 1/2]");
    }
  }
  return w;
}

// ---- non-degeneracy ------------------------------------------------------------

struct NondegeneracyReport {
  bool no_bilinear = true;
  bool isolated_witness = false;
  bool heuristic = true;
  std::size_t samples = 0;
  double min_gradient = 0.0;
  /// Growth constant with |df|^2 >= |z|^2 / C - 1 on all samples.
  double fitted_C = 0.0;
};

struct NondegeneracyOptions {
  std::size_t samples = 12000;
  std::vector<double> radii{0.1, 1.0, 10.0};
  std::uint64_t seed = 1;
  /// Multiplier applied to the sampled supremum of |z|^2 / (|df|^2 + 1).
  double C_safety = 1.25;
};

namespace detail {

inline std::string format_point(std::span<const Complex> z) {
  std::ostringstream os;
  os.precision(6);
  os << "(";
  for (std::size_t i = 0; i < z.size(); ++i) os << (i ? ", " : "") << z[i].real() << (z[i].imag() < 0 ? "-" : "+") << std::abs(z[i].imag()) << "i";
  os << ")";
  return os.str();
}

// Damped Newton on df = 0 started at z. Returns the end point.
inline CVector newton_on_gradient(const HolomorphicDerivatives& d, CVector z, int iters) {
  double mu = 1e-3;
  std::vector<Complex> buf(static_cast<std::size_t>(z.size()));
  auto eval = [&](const CVector& x) {
    for (Eigen::Index i = 0; i < x.size(); ++i) buf[static_cast<std::size_t>(i)] = x(i);
    return d.gradient(buf);
  };
  CVector g = eval(z);
  for (int it = 0; it < iters; ++it) {
    for (Eigen::Index i = 0; i < z.size(); ++i) buf[static_cast<std::size_t>(i)] = z(i);
    const CMatrix h = d.hessian(buf);
    const CMatrix lhs = h.adjoint() * h + mu * CMatrix::Identity(z.size(), z.size());
    const CVector step = lhs.ldlt().solve(-(h.adjoint() * g));
    const CVector trial = z + step;
    const CVector gt = eval(trial);
    if (gt.squaredNorm() < g.squaredNorm()) {
      z = trial;
      g = gt;
      mu = std::max(mu * 0.3, 1e-14);
    } else {
      mu *= 10.0;
      if (mu > 1e12) break;
    }
  }
  return z;
}

}  // namespace detail

/// Checks for z_i z_j monomials exactly and for an isolated critical point by a
/// randomized witness search. Rejections are certain, acceptance is heuristic.
inline NondegeneracyReport nondegeneracy_check(const MixedPolynomial& f, const NondegeneracyOptions& opts = {}) {
  if (!f.is_holomorphic()) throw Error(ErrorCode::NotHolomorphic, "non-degeneracy needs a holomorphic polynomial");
  const int n = f.nvars();
  NondegeneracyReport rep;
  for (const auto& [m, c] : f.terms()) {
    if (m.degree() != 2) continue;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (m[i] == 1 && m[j] == 1) {
          throw Error(ErrorCode::BilinearMonomialPresent,
                      "monomial z" + std::to_string(i + 1) + "*z" + std::to_string(j + 1) + " present");
        }
      }
    }
  }

  const HolomorphicDerivatives d(f);
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const unsigned full = (1U << n) - 1U;
  const std::size_t per_radius = std::max<std::size_t>(1, opts.samples / opts.radii.size());

  double min_ratio = std::numeric_limits<double>::infinity();
  double sup_C = 0.0;
  std::vector<Complex> z(static_cast<std::size_t>(n));
  struct Start {
    double ratio;
    std::vector<Complex> z;
  };
  std::vector<Start> starts;

  for (double r : opts.radii) {
    for (std::size_t s = 0; s < per_radius; ++s) {
      // Half of the points lie on coordinate subspaces, cycling through all supports.
      unsigned support = full;
      if (n > 1 && s % 2 == 1) support = 1U + static_cast<unsigned>((s / 2) % full);
      double norm2 = 0.0;
      for (int i = 0; i < n; ++i) {
        const bool on = (support >> i) & 1U;
        z[static_cast<std::size_t>(i)] = on ? Complex(normal(rng), normal(rng)) : Complex(0.0, 0.0);
        norm2 += std::norm(z[static_cast<std::size_t>(i)]);
      }
      const double scale = r / std::sqrt(norm2);
      for (auto& x : z) x *= scale;
      const double v = d.gradient_norm2(z);
      ++rep.samples;
      sup_C = std::max(sup_C, r * r / (v + 1.0));
      if (v == 0.0) {
        throw Error(ErrorCode::GradientVanishesAwayFromOrigin, "df vanishes at " + detail::format_point(z));
      }
      const double ratio = std::sqrt(v);
      if (r == 1.0) starts.push_back({ratio, z});
      // The growth constant peaks at intermediate radii, so a log-spaced ray
      // through every fourth direction is scanned for the fit.
      if (s % 4 == 0 && r == opts.radii.front()) {
        std::vector<Complex> y(z.size());
        for (int k = 0; k <= 60; ++k) {
          const double rr = 0.02 * std::pow(1000.0, k / 60.0);
          for (std::size_t i = 0; i < z.size(); ++i) y[i] = z[i] * (rr / r);
          sup_C = std::max(sup_C, rr * rr / (d.gradient_norm2(y) + 1.0));
        }
      }
      min_ratio = std::min(min_ratio, ratio / r);
    }
  }

  // Polish the most suspicious unit-sphere samples with Newton on df = 0. A
  // non-isolated critical locus attracts some of them at non-zero radius.
  std::sort(starts.begin(), starts.end(), [](const Start& a, const Start& b) { return a.ratio < b.ratio; });
  if (starts.size() > 24) starts.resize(24);
  for (const auto& st : starts) {
    CVector z0(n);
    for (int i = 0; i < n; ++i) z0(i) = st.z[static_cast<std::size_t>(i)];
    const CVector zf = detail::newton_on_gradient(d, z0, 200);
    std::vector<Complex> pt(zf.data(), zf.data() + n);
    const double radius = zf.norm();
    const double g = std::sqrt(d.gradient_norm2(pt));
    if (radius > 0.05 && g < 1e-10 * std::max(1.0, radius)) {
      throw Error(ErrorCode::GradientVanishesAwayFromOrigin, "df vanishes near " + detail::format_point(pt));
    }
  }

  rep.isolated_witness = true;
  rep.min_gradient = min_ratio;
  rep.fitted_C = opts.C_safety * sup_C;
  return rep;
}

// ---- tameness ----------------------------------------------------------------------

struct TamenessReport {
  Rational q_max, q_min, gap, delta, delta2, delta3;
  bool condition_13 = false;
  std::optional<NondegeneracyReport> nondegeneracy;
};

inline TamenessReport tameness_report(const WeightVector& w) {
  TamenessReport t;
  t.q_max = w.q_max();
  t.q_min = w.q_min();
  t.gap = t.q_max - t.q_min;
  const Rational one_minus = 1 - t.q_max;
  t.delta = (1 - 3 * t.gap) / (3 * one_minus);
  t.delta2 = (1 - 2 * t.gap) / (2 * one_minus);
  t.delta3 = (1 - 3 * t.gap) / (2 * one_minus);
  t.condition_13 = t.gap < Rational(1, 3);
  return t;
}

inline TamenessReport tameness_report(const WeightVector& w, const NondegeneracyReport& nd) {
  TamenessReport t = tameness_report(w);
  t.nondegeneracy = nd;
  return t;
}

// ---- Milnor number ---------------------------------------------------------------

/// prod_i (1/q_i - 1).
inline long milnor_oracle(const WeightVector& w) {
  Rational mu(1);
  for (const auto& qi : w.q) {
    if (sgn(qi) <= 0 || qi > Rational(1, 2)) throw Error(ErrorCode::WeightOutOfRange, "weight outside (0, 1/2]");
    mu *= 1 / qi - 1;
  }
  if (mu.get_den() != 1) throw Error(ErrorCode::NonIntegerMilnor, "prod(1/q_i - 1) = " + mu.get_str() + " is not an integer");
  return mu.get_num().get_si();
}

/// dim C[z]/(df) by exact linear algebra, one weighted-degree piece at a time:
/// the piece of degree w is spanned by monomials of weighted degree w, and the
/// ideal's piece by monomial multiples m * d_i f landing in degree w.
inline long jacobian_ring_dimension(const MixedPolynomial& f, const WeightVector& w) {
  const int n = f.nvars();
  std::vector<MixedPolynomial> grads;
  for (int i = 0; i < n; ++i) grads.push_back(wirtinger_derivative(f, i, false));
  // Degrees reachable with exponents below the bound; the socle sits at sum(1 - 2 q_i).
  Rational top(0);
  for (const auto& qi : w.q) top += 1 - 2 * qi;
  const Rational limit = top + 2;
  std::vector<unsigned> max_exp(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const Rational bound = limit / w.q[static_cast<std::size_t>(i)];
    max_exp[static_cast<std::size_t>(i)] = static_cast<unsigned>(mpz_class(bound.get_num() / bound.get_den()).get_ui());
  }
  std::map<Rational, std::vector<Monomial>> pieces;
  std::vector<unsigned> e(static_cast<std::size_t>(n), 0);
  for (;;) {
    Monomial m;
    for (int i = 0; i < n; ++i) m.set(i, e[static_cast<std::size_t>(i)]);
    const Rational wd = weighted_degree(m, w);
    if (wd <= limit) pieces[wd].push_back(m);
    int k = 0;
    while (k < n && ++e[static_cast<std::size_t>(k)] > max_exp[static_cast<std::size_t>(k)]) e[static_cast<std::size_t>(k++)] = 0;
    if (k == n) break;
  }
  long dim = 0;
  for (const auto& [deg, monos] : pieces) {
    std::map<Monomial, std::size_t> column;
    for (std::size_t c = 0; c < monos.size(); ++c) column[monos[c]] = c;
    RationalMatrix rows;
    for (int i = 0; i < n; ++i) {
      const Rational need = deg - (1 - w.q[static_cast<std::size_t>(i)]);
      if (sgn(need) < 0) continue;
      auto it = pieces.find(need);
      if (it == pieces.end()) continue;
      for (const auto& mult : it->second) {
        std::vector<Rational> row(monos.size());
        for (const auto& [gm, gc] : grads[static_cast<std::size_t>(i)].terms()) {
          const auto col = column.find(gm * mult);
          if (col == column.end()) throw Error(ErrorCode::NotQuasiHomogeneous, "derivative is not weighted-homogeneous");
          if (!gc.is_real()) throw Error(ErrorCode::Unsupported, "brute-force Jacobian ring needs rational coefficients");
          row[col->second] = gc.re();
        }
        rows.push_back(std::move(row));
      }
    }
    const long quotient = static_cast<long>(monos.size()) - static_cast<long>(rank(rows));
    if (quotient > 0 && deg > top) {
      throw Error(ErrorCode::GradientVanishesAwayFromOrigin, "Jacobian ring is not finite-dimensional");
    }
    dim += quotient;
  }
  return dim;
}

}  // namespace lgheat
