#pragma once

// One-variable spectra, zeta functions and torsion for f = c z^d.
//
// The scalar operator 2(-d dbar + |f'|^2) = -(1/2) Laplacian + 2|f'|^2 is
// radial, so each angular momentum m is an independent radial problem.
// Radial basis: 2-D oscillator modes of frequency omega,
//   r^|m| L_k^|m|(omega r^2) exp(-omega r^2 / 2),
// in which -(1/2) Laplacian + (1/2) omega^2 r^2 is diagonal, omega (2k+|m|+1),
// and omega r^2 acts as the Laguerre Jacobi matrix J. Powers r^{2p} are
// (J^p / omega^p) taken from a basis p modes larger, which is exact.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "lgheat/errors.hpp"
#include "lgheat/poly.hpp"
#include "lgheat/spectrum.hpp"
#include "lgheat/zeta.hpp"

namespace lgheat {

/// 2|f'|^2 = coefficient * |z|^(2 degree).
struct RadialPotential {
  double coefficient = 0.0;
  int degree = 1;
  /// Weight of z in f, 1 / (degree + 1).
  double weight() const { return 1.0 / (degree + 1); }
};

/// f must be c z1^d with d >= 2.
inline RadialPotential radial_potential(const MixedPolynomial& f) {
  if (f.nvars() != 1) throw Error(ErrorCode::Unsupported, "spectral module handles one variable only");
  if (f.size() != 1) throw Error(ErrorCode::Unsupported, "spectral module needs a single monomial c z^d");
  const auto& [m, c] = *f.terms().begin();
  if (m[1] != 0) throw Error(ErrorCode::NotHolomorphic, "f must be holomorphic");
  const unsigned d = m[0];
  if (d < 2) throw Error(ErrorCode::InvalidArgument, "need degree at least 2");
  const double c2 = c.norm().get_d();
  return {2.0 * c2 * d * d, static_cast<int>(d) - 1};
}

struct GalerkinConfig {
  int basis_size = 40;
  /// Angular momenta |m| <= sector_cutoff; 0 picks it from the reliable range.
  int sector_cutoff = 0;
  /// Basis frequency; 0 runs the line search.
  double omega = 0.0;
  int reference_size = 20;
  /// Sector eigenvalues whose refinement delta exceeds this (relative) are dropped.
  double keep_tolerance = 1e-7;
  int threads = 1;

  void validate(const RadialPotential& v) const {
    if (basis_size < 8) throw Error(ErrorCode::InvalidArgument, "basis_size must be at least 8");
    if (sector_cutoff != 0 && sector_cutoff < 2 * v.degree + 2) {
      throw Error(ErrorCode::InvalidArgument, "sector_cutoff must be at least 2r + 2");
    }
    if (reference_size < 4) throw Error(ErrorCode::InvalidArgument, "reference_size must be at least 4");
  }
};

namespace detail {

/// Symmetric Jacobi matrix of multiplication by x on orthonormal Laguerre functions.
inline Eigen::MatrixXd laguerre_jacobi(int size, int alpha) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(size, size);
  for (int k = 0; k < size; ++k) {
    j(k, k) = 2.0 * k + alpha + 1.0;
    if (k + 1 < size) {
      const double b = -std::sqrt((k + 1.0) * (k + 1.0 + alpha));
      j(k, k + 1) = b;
      j(k + 1, k) = b;
    }
  }
  return j;
}

inline Eigen::MatrixXd sector_matrix(const RadialPotential& v, double omega, int m, int size) {
  const int alpha = std::abs(m);
  const Eigen::MatrixXd jx = laguerre_jacobi(size + v.degree, alpha);
  Eigen::MatrixXd jp = jx;
  for (int p = 1; p < v.degree; ++p) jp = jp * jx;
  Eigen::MatrixXd h = -0.5 * omega * jx.topLeftCorner(size, size) +
                      (v.coefficient / std::pow(omega, v.degree)) * jp.topLeftCorner(size, size);
  for (int k = 0; k < size; ++k) h(k, k) += omega * (2.0 * k + alpha + 1.0);
  return h;
}

inline Eigen::VectorXd sector_eigenvalues(const RadialPotential& v, double omega, int m, int size) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sector_matrix(v, omega, m, size), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace detail

/// Basis frequency minimizing the trace of the m = 0 Galerkin matrix at the
/// reference size (golden section in log omega).
inline double select_omega(const RadialPotential& v, int reference_size) {
  const double guess = std::pow(v.coefficient, 1.0 / (v.degree + 1));
  double lo = std::log(guess / 100.0), hi = std::log(guess * 100.0);
  const auto cost = [&](double lw) { return detail::sector_matrix(v, std::exp(lw), 0, reference_size).trace(); };
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
  double fa = cost(a), fb = cost(b);
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - g * (hi - lo);
      fa = cost(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + g * (hi - lo);
      fb = cost(b);
    }
  }
  const double best = 0.5 * (lo + hi);
  if (best < std::log(guess / 100.0) + 1e-3 || best > std::log(guess * 100.0) - 1e-3) {
    throw Error(ErrorCode::IllConditioned, "basis scale search hit its bracket");
  }
  return std::exp(best);
}

struct SectorSpectrum {
  int m = 0;
  std::vector<double> values;  // kept eigenvalues
  std::vector<double> errors;
  /// Lowest eigenvalue estimate that was not kept (upper end of this sector's reliable range).
  double first_dropped = std::numeric_limits<double>::infinity();
};

/// Rayleigh-Ritz eigenvalues of sector m at `size` and at a coarser nested
/// size; the difference is the error estimate and must be non-negative.
inline SectorSpectrum solve_sector(const RadialPotential& v, double omega, int m, int size, double keep_tolerance) {
  const int coarse = size - std::max(4, size / 5);
  const Eigen::VectorXd fine = detail::sector_eigenvalues(v, omega, m, size);
  const Eigen::VectorXd rough = detail::sector_eigenvalues(v, omega, m, coarse);
  SectorSpectrum s;
  s.m = m;
  for (int i = 0; i < coarse; ++i) {
    const double delta = rough(i) - fine(i);
    if (delta < -1e-9 * std::max(1.0, std::abs(fine(i)))) {
      std::ostringstream os;
      os << "eigenvalue " << i << " of sector " << m << " increased under refinement by " << -delta;
      throw Error(ErrorCode::NonMonotoneRefinement, os.str());
    }
    const double err = std::max(delta, 0.0);
    if (err > keep_tolerance * std::max(1.0, fine(i))) {
      s.first_dropped = fine(i) - err;
      break;
    }
    s.values.push_back(fine(i));
    s.errors.push_back(err);
  }
  if (s.values.size() == static_cast<std::size_t>(coarse)) s.first_dropped = fine(coarse);
  return s;
}

struct GalerkinResult {
  Spectrum spectrum;
  double omega = 0.0;
  int sector_cutoff = 0;
  RadialPotential potential;
};

/// Merged spectrum over all sectors. Every kept eigenvalue lies below
/// reliable_below, which is also below the lowest eigenvalue of the first
/// excluded sector.
inline GalerkinResult eigensolve(const MixedPolynomial& f, const GalerkinConfig& config = {}) {
  const RadialPotential v = radial_potential(f);
  config.validate(v);
  GalerkinResult r;
  r.potential = v;
  r.omega = config.omega > 0.0 ? config.omega : select_omega(v, config.reference_size);
  const int n = config.basis_size;

  // Sector 0 sets the reliable range when the cutoff is automatic.
  int cutoff = config.sector_cutoff;
  if (cutoff == 0) {
    const double top = solve_sector(v, r.omega, 0, n, config.keep_tolerance).first_dropped;
    cutoff = 2 * v.degree + 2;
    while (detail::sector_eigenvalues(v, r.omega, cutoff + 1, n)(0) < top) ++cutoff;
  }
  r.sector_cutoff = cutoff;

  std::vector<SectorSpectrum> sectors(static_cast<std::size_t>(cutoff + 1));
  const int workers = std::max(1, std::min(config.threads, cutoff + 1));
  const auto run = [&](int first) {
    for (int m = first; m <= cutoff; m += workers) {
      sectors[static_cast<std::size_t>(m)] = solve_sector(v, r.omega, m, n, config.keep_tolerance);
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }

  double reliable = detail::sector_eigenvalues(v, r.omega, cutoff + 1, n)(0);
  for (const auto& s : sectors) reliable = std::min(reliable, s.first_dropped);
  Spectrum& sp = r.spectrum;
  for (const auto& s : sectors) {
    const long mult = s.m == 0 ? 1 : 2;  // +m and -m
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      if (s.values[i] < reliable) sp.levels.push_back({s.values[i], mult, s.errors[i]});
    }
  }
  sp.sort_and_merge(1e-8 * std::max(1.0, reliable));
  sp.truncated = true;
  sp.reliable_below = reliable;
  return r;
}

// ---- heat traces and exponent fits ------------------------------------------------

/// Counting-function fit N(lambda) ~ c lambda^kappa on the upper half of the
/// levels, used to estimate what lies above reliable_below.
struct WeylTail {
  double c = 0.0;
  double kappa = 0.0;
  double cutoff = 0.0;

  /// integral_cutoff^inf exp(-t lambda) dN, by Gauss-Laguerre-free substitution.
  double heat_trace(double t) const {
    // dN = c kappa lambda^{kappa-1}; integrate in u = t (lambda - cutoff).
    double s = 0.0;
    const int steps = 400;
    const double umax = 60.0;
    const double h = umax / steps;
    for (int i = 0; i <= steps; ++i) {
      const double u = i * h;
      const double lam = cutoff + u / t;
      const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      s += w * c * kappa * std::pow(lam, kappa - 1.0) * std::exp(-u);
    }
    return s * h / 3.0 * std::exp(-t * cutoff) / t;
  }

  /// sum_{lambda > cutoff} lambda^{-s} approximated by the integral.
  Complex zeta_tail(Complex s) const {
    return c * kappa * std::exp((kappa - s) * std::log(cutoff)) / (s - kappa);
  }
};

inline WeylTail fit_weyl_tail(const Spectrum& sp) {
  if (sp.levels.size() < 4) throw Error(ErrorCode::InvalidArgument, "too few levels for a tail fit");
  std::vector<double> x, y;
  long cum = 0;
  for (const auto& l : sp.levels) {
    cum += l.multiplicity;
    x.push_back(std::log(l.value));
    y.push_back(std::log(static_cast<double>(cum)));
  }
  const std::size_t first = x.size() / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double cnt = static_cast<double>(x.size() - first);
  for (std::size_t i = first; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  WeylTail w;
  w.kappa = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  w.c = std::exp((sy - w.kappa * sx) / cnt);
  w.cutoff = std::isfinite(sp.reliable_below) ? sp.reliable_below : sp.levels.back().value;
  return w;
}

struct TraceSample {
  double t = 0.0;
  double trace = 0.0;
  double error = 0.0;
};

/// Heat trace of the computed spectrum plus the Weyl tail; the error is the
/// tail size plus first-order eigenvalue errors.
inline TraceSample heat_trace_sample(const Spectrum& sp, const std::optional<WeylTail>& tail, double t) {
  TraceSample s{t, 0.0, 0.0};
  for (const auto& l : sp.levels) {
    const double e = static_cast<double>(l.multiplicity) * std::exp(-t * l.value);
    s.trace += e;
    s.error += e * t * l.error;
  }
  if (tail) {
    const double extra = tail->heat_trace(t);
    s.trace += extra;
    s.error += 0.1 * extra;
  }
  return s;
}

inline std::string heat_trace_csv(const std::vector<TraceSample>& samples) {
  std::ostringstream os;
  os.precision(17);
  os << "t,trace,error\n";
  for (const auto& s : samples) os << s.t << ',' << s.trace << ',' << s.error << '\n';
  return os.str();
}

/// Exponent ladder of the small-t expansion for f = c z^{r+1}: the leading
/// power -1/(1-q) and steps of 1/(1-q). For A_1 this is -2, 0, 2, ...
inline std::vector<double> heat_trace_exponents(const RadialPotential& v, int count) {
  const double step = (v.degree + 1.0) / v.degree;  // 1 / (1 - q)
  std::vector<double> a;
  for (int m = 0; m < count; ++m) a.push_back(step * (m - 1));
  return a;
}

/// Leading exponent of the trace from the lattice count: -(n + 2|q|).
inline double lattice_leading_exponent(int n, double total_weight) { return -(n + 2.0 * total_weight); }

struct ExponentFit {
  double exponent = 0.0;
  double coefficient = 0.0;
  double residual = 0.0;
};

/// Free fit trace ~ a t^alpha + b0 + b1 t + b2 t^2 on the window, alpha by
/// golden section with the linear coefficients eliminated (variable projection).
inline ExponentFit fit_leading_exponent(const std::function<double(double)>& trace, double t_lo, double t_hi,
                                        int points = 40) {
  if (!(t_lo > 0.0 && t_hi > t_lo)) throw Error(ErrorCode::InvalidArgument, "bad fit window");
  std::vector<double> ts, ys;
  for (int i = 0; i < points; ++i) {
    const double t = t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / (points - 1));
    ts.push_back(t);
    ys.push_back(trace(t));
  }
  const auto solve = [&](double alpha, Eigen::VectorXd* coef) {
    Eigen::MatrixXd a(points, 4);
    Eigen::VectorXd b(points);
    for (int i = 0; i < points; ++i) {
      const double t = ts[static_cast<std::size_t>(i)];
      const double scale = 1.0 / ys[static_cast<std::size_t>(i)];  // relative residuals
      a(i, 0) = std::pow(t, alpha) * scale;
      a(i, 1) = scale;
      a(i, 2) = t * scale;
      a(i, 3) = t * t * scale;
      b(i) = 1.0;
    }
    const Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);
    if (coef) *coef = x;
    return (a * x - b).norm();
  };
  double lo = -6.0, hi = -0.25;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = solve(x1, nullptr), f2 = solve(x2, nullptr);
  for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = solve(x1, nullptr);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = solve(x2, nullptr);
    }
  }
  ExponentFit r;
  r.exponent = 0.5 * (lo + hi);
  Eigen::VectorXd coef;
  r.residual = solve(r.exponent, &coef);
  r.coefficient = coef(0);
  return r;
}

// ---- zeta functions ---------------------------------------------------------------

struct ThetaValue {
  Complex value{0.0, 0.0};
  double error = 0.0;
};

/// Theta^i(s) = (2^{i-1} - 1) sum lambda^{-s} over the 0-form spectrum, with
/// the Weyl tail added and included in the error bar.
inline ThetaValue theta(const Spectrum& sp, int i, Complex s) {
  if (i < 1 || i > 2) throw Error(ErrorCode::Unsupported, "only Theta^1 and Theta^2 are provided");
  if (i == 1) return {};
  const WeylTail tail = fit_weyl_tail(sp);
  if (s.real() <= tail.kappa + 0.05) {
    throw Error(ErrorCode::TailDominates, "sum diverges or converges too slowly at this s");
  }
  ThetaValue r;
  for (const auto& l : sp.levels) {
    const Complex p = std::exp(-s * std::log(l.value));
    r.value += static_cast<double>(l.multiplicity) * p;
    r.error += static_cast<double>(l.multiplicity) * std::abs(s) * std::abs(p) / l.value * l.error;
  }
  const Complex extra = tail.zeta_tail(s);
  if (std::abs(extra) > 0.5 * std::abs(r.value)) {
    throw Error(ErrorCode::TailDominates, "tail estimate exceeds half of the computed sum");
  }
  r.value += extra;
  r.error += 0.1 * std::abs(extra);
  return r;
}

/// (2|tau|)^{-s} zeta(s-1): Theta^2 of the oscillator, real s only.
inline double theta2_oscillator_exact(double abs_tau, double s) {
  return std::pow(2.0 * abs_tau, -s) * riemann_zeta(s - 1.0);
}

struct ZetaResult {
  std::string path;  // "exact" or "numeric"
  int i = 2;
  std::vector<double> exponents;
  std::vector<double> coefficients;
  double fit_condition = 0.0;
  double split = 1.0;
  /// d/ds of the renormalized Theta^i at s = 0.
  double derivative_at_zero = 0.0;
  double error = 0.0;
  double log_torsion = 0.0;
  double torsion = 0.0;
  /// Theta^i(s) for s in the convergent range (numeric: spectrum sums; exact: closed form).
  std::function<ThetaValue(int, Complex)> theta;
};

/// Closed form for f = tau z^2 / 2: log T^2 = -(1/12) log(2|tau|) - zeta'(-1).
inline ZetaResult torsion_oscillator_exact(double abs_tau) {
  if (!(abs_tau > 0.0)) throw Error(ErrorCode::InvalidArgument, "tau must be nonzero");
  ZetaResult r;
  r.path = "exact";
  const ZetaValue z = riemann_zeta_and_derivative(-1.0);
  // d/ds [(2|tau|)^{-s} zeta(s-1)] at 0
  r.derivative_at_zero = -std::log(2.0 * abs_tau) * z.value + z.derivative;
  r.log_torsion = -r.derivative_at_zero;
  r.torsion = std::exp(r.log_torsion);
  r.exponents = {-2.0, 0.0};
  r.coefficients = {1.0 / (4.0 * abs_tau * abs_tau), -1.0 / 12.0};
  r.theta = [abs_tau](int i, Complex s) -> ThetaValue {
    if (i == 1) return {};
    if (i != 2) throw Error(ErrorCode::Unsupported, "only Theta^1 and Theta^2 are provided");
    if (s.imag() != 0.0) throw Error(ErrorCode::Unsupported, "closed form evaluated for real s only");
    return {Complex(theta2_oscillator_exact(abs_tau, s.real()), 0.0), 0.0};
  };
  return r;
}

/// |tau| of f = tau z^2 / 2, or nullopt when f is not of that form.
inline std::optional<double> oscillator_abs_tau(const MixedPolynomial& f) {
  if (f.nvars() != 1 || f.size() != 1) return std::nullopt;
  const auto& [m, c] = *f.terms().begin();
  if (m[0] != 2 || m[1] != 0) return std::nullopt;
  return 2.0 * std::sqrt(c.norm().get_d());
}

struct RenormalizationOptions {
  double split = 1.0;
  double fit_lo = 0.4;
  double fit_hi = 1.6;
  int fit_points = 48;
  int ladder_terms = 8;
  double max_condition = 1e14;
};

/// Mellin data for (1 / Gamma(s)) integral G(t) t^{s-1} dt. large_t(T) must
/// return integral_T^inf G(t) / t dt.
struct MellinData {
  std::function<double(double)> trace;
  std::function<double(double)> large_t;
  /// Overall factor in front of 1/Gamma(s) (1 for Theta^2 of one variable).
  double prefactor = 1.0;
};

namespace detail {

struct LadderFit {
  std::vector<double> coefficients;
  double condition = 0.0;
};

inline LadderFit fit_ladder(const std::function<double(double)>& trace, const std::vector<double>& exponents,
                            const RenormalizationOptions& o) {
  const int p = o.fit_points;
  const int k = static_cast<int>(exponents.size());
  Eigen::MatrixXd a(p, k);
  Eigen::VectorXd b(p);
  for (int i = 0; i < p; ++i) {
    const double t = o.fit_lo * std::pow(o.fit_hi / o.fit_lo, static_cast<double>(i) / (p - 1));
    const double y = trace(t);
    const double w = 1.0 / std::max(std::abs(y), 1e-300);
    for (int j = 0; j < k; ++j) a(i, j) = std::pow(t, exponents[static_cast<std::size_t>(j)]) * w;
    b(i) = y * w;
  }
  // Column scaling before the condition estimate.
  Eigen::VectorXd scale(k);
  for (int j = 0; j < k; ++j) scale(j) = a.col(j).norm();
  const Eigen::MatrixXd an = a * scale.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(an, Eigen::ComputeThinU | Eigen::ComputeThinV);
  LadderFit f;
  const auto& sv = svd.singularValues();
  f.condition = sv(0) / sv(sv.size() - 1);
  if (!(f.condition < o.max_condition)) {
    throw Error(ErrorCode::ExponentFitUnstable, "small-t fit condition number " + std::to_string(f.condition));
  }
  const Eigen::VectorXd x = svd.solve(b).cwiseQuotient(scale);
  f.coefficients.assign(x.data(), x.data() + k);
  return f;
}

inline double renormalized_derivative(const MellinData& d, const std::vector<double>& exponents,
                                      const std::vector<double>& coefficients, double split) {
  double small = 0.0;
  for (std::size_t j = 0; j < exponents.size(); ++j) {
    const double a = exponents[j];
    const double c = coefficients[j];
    if (std::abs(a) < 1e-12) {
      small += c * (std::numbers::egamma + std::log(split));
    } else {
      small += c * std::pow(split, a) / a;
    }
  }
  return d.prefactor * (small + d.large_t(split));
}

}  // namespace detail

/// Theta^{R} '(0) from Mellin data: the t < split part comes from the fitted
/// small-t expansion (divergent powers cancelled, the t^0 term giving
/// gamma + log split), the t > split part from large_t.
inline ZetaResult renormalize(const MellinData& d, const std::vector<double>& exponents,
                              const RenormalizationOptions& o = {}) {
  if (exponents.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two exponents");
  ZetaResult r;
  r.path = "numeric";
  r.exponents = exponents;
  r.split = o.split;
  const auto fit = detail::fit_ladder(d.trace, exponents, o);
  r.coefficients = fit.coefficients;
  r.fit_condition = fit.condition;
  r.derivative_at_zero = detail::renormalized_derivative(d, exponents, fit.coefficients, o.split);
  // Error: drop the last ladder term and refit.
  std::vector<double> shorter(exponents.begin(), exponents.end() - 1);
  const auto fit2 = detail::fit_ladder(d.trace, shorter, o);
  r.error = std::abs(detail::renormalized_derivative(d, shorter, fit2.coefficients, o.split) - r.derivative_at_zero);
  r.log_torsion = -r.derivative_at_zero;
  r.torsion = std::exp(r.log_torsion);
  return r;
}

/// integral_T^inf exp(-lambda t) / t dt = E1(lambda T), summed over the spectrum.
inline double spectrum_large_t(const Spectrum& sp, double split) {
  double s = 0.0;
  for (const auto& l : sp.levels) s += static_cast<double>(l.multiplicity) * -std::expint(-l.value * split);
  return s;
}

/// Numeric path for Theta^2 of a one-variable spectrum.
inline ZetaResult torsion_numeric(const GalerkinResult& g, const RenormalizationOptions& o = {}) {
  const Spectrum sp = g.spectrum;
  const WeylTail tail = fit_weyl_tail(sp);
  MellinData d;
  d.trace = [sp, tail](double t) { return heat_trace_sample(sp, tail, t).trace; };
  d.large_t = [sp](double split) { return spectrum_large_t(sp, split); };
  ZetaResult r = renormalize(d, heat_trace_exponents(g.potential, o.ladder_terms), o);
  r.theta = [sp](int i, Complex s) { return theta(sp, i, s); };
  return r;
}

// ---- sums of two one-variable singularities ---------------------------------------

/// Per-degree heat traces Tr(exp(-t Delta^p)) for p = 0..2n and harmonic counts.
struct DegreeTraces {
  int n = 1;
  std::function<std::vector<double>(double)> traces;
  std::vector<double> harmonic;
};

/// One variable: nonzero 1-form spectrum is two copies of the 0-form one
/// (exact pairing through dbar_f and its adjoint), plus mu harmonic 1-forms.
inline DegreeTraces one_variable_degree_traces(const Spectrum& sp, const std::optional<WeylTail>& tail, long mu) {
  DegreeTraces d;
  d.n = 1;
  d.harmonic = {0.0, static_cast<double>(mu), 0.0};
  d.traces = [sp, tail, mu](double t) {
    const double z = heat_trace_sample(sp, tail, t).trace;
    return std::vector<double>{z, 2.0 * z + static_cast<double>(mu), z};
  };
  return d;
}

/// Tensor rule: Tr^p of the product is sum over p1 + p2 = p of Tr^{p1} Tr^{p2}.
inline DegreeTraces tensor_product(const DegreeTraces& a, const DegreeTraces& b) {
  DegreeTraces d;
  d.n = a.n + b.n;
  const auto conv = [](const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> z(x.size() + y.size() - 1, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (std::size_t j = 0; j < y.size(); ++j) z[i + j] += x[i] * y[j];
    }
    return z;
  };
  d.harmonic = conv(a.harmonic, b.harmonic);
  d.traces = [a, b, conv](double t) { return conv(a.traces(t), b.traces(t)); };
  return d;
}

/// G(t) = sum_p (-1)^p p^i (Tr^p - Pi^p).
inline double weighted_supertrace(const DegreeTraces& d, int i, double t) {
  const auto tr = d.traces(t);
  double s = 0.0;
  for (std::size_t p = 0; p < tr.size(); ++p) {
    const double w = std::pow(static_cast<double>(p), i) * (p % 2 ? -1.0 : 1.0);
    s += w * (tr[p] - d.harmonic[p]);
  }
  return s;
}

struct TorsionSumReport {
  double lhs = 0.0;  // log T^2(f1 + f2) from the product traces
  double rhs = 0.0;  // (-1)^{n1} mu1 log T^2(f2) + (-1)^{n2} mu2 log T^2(f1)
  double tolerance = 0.0;
  bool pass = false;
};

inline double torsion_sum_formula(int n1, long mu1, double log_t1, int n2, long mu2, double log_t2) {
  const double s1 = n1 % 2 ? -1.0 : 1.0;
  const double s2 = n2 % 2 ? -1.0 : 1.0;
  return s1 * static_cast<double>(mu1) * log_t2 + s2 * static_cast<double>(mu2) * log_t1;
}

/// Both factors one-variable with computed spectra. The left side renormalizes
/// (1/2) sum_p (-1)^p p^2 Tr(...) of the product built by the tensor rule; its
/// large-t integral is done by quadrature in log t.
inline TorsionSumReport torsion_sum_check(const GalerkinResult& g1, long mu1, const GalerkinResult& g2, long mu2,
                                          const RenormalizationOptions& o = {}, double tolerance = 1e-4) {
  if (heat_trace_exponents(g1.potential, 2) != heat_trace_exponents(g2.potential, 2)) {
    throw Error(ErrorCode::Unsupported, "sum check needs factors with the same exponent ladder");
  }
  const auto t1 = torsion_numeric(g1, o);
  const auto t2 = torsion_numeric(g2, o);
  const auto d1 = one_variable_degree_traces(g1.spectrum, fit_weyl_tail(g1.spectrum), mu1);
  const auto d2 = one_variable_degree_traces(g2.spectrum, fit_weyl_tail(g2.spectrum), mu2);
  const DegreeTraces prod = tensor_product(d1, d2);
  MellinData d;
  d.prefactor = 0.5;
  d.trace = [prod](double t) { return weighted_supertrace(prod, 2, t); };
  const double lowest = std::min(g1.spectrum.levels.front().value, g2.spectrum.levels.front().value);
  d.large_t = [prod, lowest](double split) {
    // Simpson in u = log t up to where exp(-lowest t) is negligible.
    const double u0 = std::log(split), u1 = std::log(split + 60.0 / lowest);
    const int steps = 4000;
    const double h = (u1 - u0) / steps;
    double s = 0.0;
    for (int i = 0; i <= steps; ++i) {
      const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      s += w * weighted_supertrace(prod, 2, std::exp(u0 + i * h));
    }
    return s * h / 3.0;
  };
  // Same ladder as the factors (the product trace is a sum of factor traces times constants).
  const auto lhs = renormalize(d, heat_trace_exponents(g1.potential, o.ladder_terms), o);
  TorsionSumReport r;
  r.lhs = lhs.log_torsion;
  r.rhs = torsion_sum_formula(1, mu1, t1.log_torsion, 1, mu2, t2.log_torsion);
  r.tolerance = tolerance + lhs.error + t1.error + t2.error;
  r.pass = std::abs(r.lhs - r.rhs) <= r.tolerance;
  return r;
}

}  // namespace lgheat
