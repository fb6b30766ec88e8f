#pragma once

// mu(f) = (t^n / pi^n) integral exp(-t |df|^2) |det d^2 f|^2, for every t > 0.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "lgheat/derivatives.hpp"
#include "lgheat/quadrature.hpp"
#include "lgheat/weights.hpp"

namespace lgheat {

enum class IndexMethod { MonteCarlo, Quadrature };

inline std::string method_name(IndexMethod m) { return m == IndexMethod::MonteCarlo ? "mc" : "quadrature"; }

struct IndexOptions {
  IndexMethod method = IndexMethod::MonteCarlo;
  std::size_t samples = 1000000;
  int strata = 64;
  /// Nodes per real axis; 0 picks 128 for n = 1 and 40 for n = 2.
  int nodes = 0;
  std::uint64_t seed = 7;
  /// BudgetTooSmall when the standard error exceeds this fraction of the estimate (0 disables).
  double max_relative_stderr = 0.05;
  /// Optional per-coordinate scale z_i = c_i y_i for the quadrature (empty = none).
  std::vector<double> coordinate_scale;
};

struct IndexEntry {
  double t = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  IndexMethod method = IndexMethod::MonteCarlo;
  std::size_t samples = 0;  // MC samples or total quadrature nodes
  std::uint64_t seed = 0;
};

struct IndexResult {
  std::vector<IndexEntry> entries;
  double pooled = 0.0;
  double pooled_stderr = 0.0;
  long mu_rounded = 0;
  bool grid_spans_decade = false;
  /// Largest pairwise z-score.
  double max_z = 0.0;

  std::string csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "t,estimate,stderr\n";
    for (const auto& e : entries) os << e.t << ',' << e.estimate << ',' << e.std_error << '\n';
    return os.str();
  }
};

class IndexIntegrand {
 public:
  template <typename C>
  explicit IndexIntegrand(const Poly<C>& f) : d_(f) {}

  int n() const { return d_.n(); }

  double operator()(std::span<const Complex> z, double t) const {
    const double v = d_.gradient_norm2(z);
    const CMatrix h = d_.hessian(z);
    const double det2 = std::norm(h.determinant());
    return std::pow(t / std::numbers::pi, n()) * std::exp(-t * v) * det2;
  }

 private:
  HolomorphicDerivatives d_;
};

namespace detail {

inline std::uint64_t stratum_seed(std::uint64_t seed, std::uint64_t stratum) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(stratum), 0x5eedU};
  std::uint32_t parts[2];
  seq.generate(parts, parts + 2);
  return (std::uint64_t(parts[0]) << 32) | parts[1];
}

inline IndexEntry index_monte_carlo(const IndexIntegrand& f, double t, double C, const IndexOptions& o) {
  const int n = f.n();
  const auto strata = static_cast<std::size_t>(o.strata);
  if (o.samples < 2 * strata) throw Error(ErrorCode::BudgetTooSmall, "need at least two samples per stratum");
  const std::size_t per = o.samples / strata;
  // Proposal: independent complex Gaussians, variance sigma^2 = C / (2t) per real coordinate.
  const double s2 = C / (2.0 * t);
  const double log_norm = -n * std::log(2.0 * std::numbers::pi * s2);
  std::vector<Complex> z(static_cast<std::size_t>(n));
  double est = 0.0, var = 0.0;
  for (std::size_t s = 0; s < strata; ++s) {
    std::mt19937_64 rng(stratum_seed(o.seed, s));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, std::sqrt(s2));
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < per; ++i) {
      // First coordinate: stratified on the quantile of |z1|^2 / (2 sigma^2) ~ Exp(1).
      const double q = (static_cast<double>(s) + unif(rng)) / static_cast<double>(strata);
      const double rho = -std::log1p(-q);
      const double ang = 2.0 * std::numbers::pi * unif(rng);
      const double r = std::sqrt(2.0 * s2 * rho);
      z[0] = Complex(r * std::cos(ang), r * std::sin(ang));
      double r2 = r * r;
      for (int k = 1; k < n; ++k) {
        z[static_cast<std::size_t>(k)] = Complex(normal(rng), normal(rng));
        r2 += std::norm(z[static_cast<std::size_t>(k)]);
      }
      const double log_p = log_norm - r2 / (2.0 * s2);
      const double w = f(z, t) * std::exp(-log_p);
      sum += w;
      sum2 += w * w;
    }
    const double m = sum / static_cast<double>(per);
    const double sv = (sum2 / static_cast<double>(per) - m * m) * static_cast<double>(per) / static_cast<double>(per - 1);
    est += m / static_cast<double>(strata);
    var += sv / static_cast<double>(per) / static_cast<double>(strata * strata);
  }
  return {t, est, std::sqrt(std::max(var, 0.0)), IndexMethod::MonteCarlo, per * strata, o.seed};
}

inline double index_quadrature_once(const IndexIntegrand& f, double t, double C, int nodes, const std::vector<double>& cscale) {
  const int n = f.n();
  const auto rule = gauss_hermite(nodes);
  // Real coordinate x = a y with the Gaussian weight exp(-y^2) matched to the proposal scale.
  const double a = std::sqrt(C / t);
  std::vector<double> scale(static_cast<std::size_t>(n), 1.0);
  for (std::size_t i = 0; i < cscale.size() && i < scale.size(); ++i) scale[i] = cscale[i];
  std::vector<double> factor(rule.nodes.size());
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) factor[k] = rule.weights[k] * std::exp(rule.nodes[k] * rule.nodes[k]) * a;
  const int dims = 2 * n;
  std::vector<std::size_t> idx(static_cast<std::size_t>(dims), 0);
  std::vector<Complex> z(static_cast<std::size_t>(n));
  double jac = 1.0;
  for (double c : scale) jac *= c * c;
  double sum = 0.0;
  for (;;) {
    double w = jac;
    for (int i = 0; i < n; ++i) {
      const std::size_t ix = idx[static_cast<std::size_t>(2 * i)], iy = idx[static_cast<std::size_t>(2 * i + 1)];
      const double c = scale[static_cast<std::size_t>(i)];
      z[static_cast<std::size_t>(i)] = Complex(a * rule.nodes[ix], a * rule.nodes[iy]) * c;
      w *= factor[ix] * factor[iy];
    }
    sum += w * f(z, t);
    int k = 0;
    while (k < dims && ++idx[static_cast<std::size_t>(k)] == rule.nodes.size()) idx[static_cast<std::size_t>(k++)] = 0;
    if (k == dims) break;
  }
  return sum;
}

}  // namespace detail

/// One estimate of the index integral at time t. The growth constant C of the
/// non-degeneracy report sets the Gaussian proposal / quadrature scale.
inline IndexEntry compute_index(const MixedPolynomial& f, const std::optional<NondegeneracyReport>& report, double t,
                                const IndexOptions& o = {}) {
  if (!report) throw Error(ErrorCode::MissingTamenessReport, "index needs the non-degeneracy report (growth constant)");
  if (!(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "t must be positive");
  const IndexIntegrand integrand(f);
  const double C = report->fitted_C;
  IndexEntry e;
  if (o.method == IndexMethod::MonteCarlo) {
    e = detail::index_monte_carlo(integrand, t, C, o);
  } else {
    if (f.nvars() > 2) throw Error(ErrorCode::Unsupported, "tensor quadrature supports n <= 2");
    const int nodes = o.nodes > 0 ? o.nodes : (f.nvars() == 1 ? 128 : 40);
    const double full = detail::index_quadrature_once(integrand, t, C, nodes, o.coordinate_scale);
    const double coarse = detail::index_quadrature_once(integrand, t, C, nodes * 3 / 4, o.coordinate_scale);
    e.t = t;
    e.estimate = full;
    e.std_error = std::max(std::abs(full - coarse), 1e-10 * std::abs(full));
    e.method = IndexMethod::Quadrature;
    e.samples = static_cast<std::size_t>(std::pow(nodes, 2 * f.nvars()));
    e.seed = o.seed;
  }
  if (o.max_relative_stderr > 0.0 && e.std_error > o.max_relative_stderr * std::abs(e.estimate)) {
    throw Error(ErrorCode::BudgetTooSmall, "standard error " + std::to_string(e.std_error) + " above tolerance");
  }
  return e;
}

/// compute_index at every t, pairwise 3-sigma agreement, pooled estimate.
/// Each t uses its own derived seed so the estimates are independent.
inline IndexResult mckean_singer_check(const MixedPolynomial& f, const std::optional<NondegeneracyReport>& report,
                                       const std::vector<double>& t_grid, const IndexOptions& o = {}) {
  if (t_grid.empty()) throw Error(ErrorCode::InvalidArgument, "empty t grid");
  IndexResult r;
  double wsum = 0.0, wx = 0.0;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    IndexOptions oi = o;
    oi.seed = detail::stratum_seed(o.seed, 1000003ULL + i);
    r.entries.push_back(compute_index(f, report, t_grid[i], oi));
    r.entries.back().seed = oi.seed;
    const double w = 1.0 / (r.entries.back().std_error * r.entries.back().std_error);
    wsum += w;
    wx += w * r.entries.back().estimate;
  }
  r.pooled = wx / wsum;
  r.pooled_stderr = std::sqrt(1.0 / wsum);
  r.mu_rounded = std::lround(r.pooled);
  const auto [lo, hi] = std::minmax_element(t_grid.begin(), t_grid.end());
  r.grid_spans_decade = t_grid.size() >= 3 && *hi >= 10.0 * *lo;
  for (std::size_t i = 0; i < r.entries.size(); ++i) {
    for (std::size_t j = i + 1; j < r.entries.size(); ++j) {
      const auto& a = r.entries[i];
      const auto& b = r.entries[j];
      const double z = std::abs(a.estimate - b.estimate) / std::hypot(a.std_error, b.std_error);
      r.max_z = std::max(r.max_z, z);
      if (z > 3.0) {
        std::ostringstream os;
        os << "estimates at t=" << a.t << " and t=" << b.t << " differ by z=" << z;
        throw Error(ErrorCode::ConstancyViolated, os.str());
      }
    }
  }
  return r;
}

}  // namespace lgheat
