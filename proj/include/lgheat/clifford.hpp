#pragma once

// Operators on the exterior algebra spanned by dz^1..dz^n, dzbar^1..dzbar^n.
//
// A basis element is a 2n-bit mask; bit i < n is dz^{i+1} and bit n + i is
// dzbar^{i+1}. Every sign comes from insertion_sign(): putting generator g
// into (or taking it out of) a mask costs (-1)^(set bits below g).

#include <bit>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "lgheat/errors.hpp"
#include "lgheat/poly.hpp"
#include "lgheat/scalar.hpp"

namespace lgheat {

using Mask = std::uint32_t;

inline int form_degree(Mask m) { return std::popcount(m); }

inline int insertion_sign(Mask m, int generator) {
  const Mask below = m & ((Mask(1) << generator) - 1U);
  return (std::popcount(below) % 2) ? -1 : 1;
}

enum class CliffordKind { C, CHat, CBar, CHatBar };

template <typename C>
class ExteriorOperator {
 public:
  using Row = std::map<Mask, C>;

  ExteriorOperator() = default;
  explicit ExteriorOperator(int n) : n_(n), rows_(std::size_t(1) << (2 * n)) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "exterior algebra needs n >= 1");
    if (is_exact_v<C> && n > 6) throw Error(ErrorCode::Unsupported, "exact exterior operators are capped at n = 6");
    if (n > 8) throw Error(ErrorCode::Unsupported, "exterior operators are capped at n = 8");
  }

  static ExteriorOperator identity(int n) {
    ExteriorOperator r(n);
    for (Mask m = 0; m < r.dim(); ++m) r.rows_[m][m] = one();
    return r;
  }

  /// generator g in [0, 2n) wedged on the left.
  static ExteriorOperator wedge(int n, int g) {
    ExteriorOperator r(n);
    const Mask bit = Mask(1) << g;
    for (Mask m = 0; m < r.dim(); ++m) {
      if (m & bit) continue;
      r.rows_[m | bit][m] = from_rational<C>(Rational(insertion_sign(m, g)));
    }
    return r;
  }

  /// Contraction with the vector field dual to generator g.
  static ExteriorOperator contraction(int n, int g) {
    ExteriorOperator r(n);
    const Mask bit = Mask(1) << g;
    for (Mask m = 0; m < r.dim(); ++m) {
      if (!(m & bit)) continue;
      r.rows_[m & ~bit][m] = from_rational<C>(Rational(insertion_sign(m, g)));
    }
    return r;
  }

  int n() const { return n_; }
  Mask dim() const { return static_cast<Mask>(rows_.size()); }
  const std::vector<Row>& rows() const { return rows_; }

  C entry(Mask row, Mask col) const {
    const auto it = rows_[row].find(col);
    return it == rows_[row].end() ? C{} : it->second;
  }

  void add_entry(Mask row, Mask col, const C& v) {
    if (is_zero(v)) return;
    auto [it, inserted] = rows_[row].try_emplace(col, v);
    if (!inserted) {
      it->second += v;
      if (is_zero(it->second)) rows_[row].erase(it);
    }
  }

  std::size_t nonzeros() const {
    std::size_t s = 0;
    for (const auto& r : rows_) s += r.size();
    return s;
  }

  bool is_zero_operator() const { return nonzeros() == 0; }

  /// True iff every entry maps form degree k to form degree k.
  bool preserves_degree() const {
    for (Mask r = 0; r < dim(); ++r) {
      for (const auto& [c, v] : rows_[r]) {
        if (form_degree(r) != form_degree(c)) return false;
      }
    }
    return true;
  }

  ExteriorOperator& operator+=(const ExteriorOperator& o) {
    check(o);
    for (Mask r = 0; r < dim(); ++r) {
      for (const auto& [c, v] : o.rows_[r]) add_entry(r, c, v);
    }
    return *this;
  }
  ExteriorOperator& operator-=(const ExteriorOperator& o) {
    check(o);
    for (Mask r = 0; r < dim(); ++r) {
      for (const auto& [c, v] : o.rows_[r]) add_entry(r, c, -v);
    }
    return *this;
  }
  ExteriorOperator& operator*=(const C& s) {
    if (is_zero(s)) {
      for (auto& r : rows_) r.clear();
      return *this;
    }
    for (auto& r : rows_) {
      for (auto& [c, v] : r) v *= s;
    }
    return *this;
  }

  friend ExteriorOperator operator+(ExteriorOperator a, const ExteriorOperator& b) { return a += b; }
  friend ExteriorOperator operator-(ExteriorOperator a, const ExteriorOperator& b) { return a -= b; }
  friend ExteriorOperator operator-(ExteriorOperator a) { return a *= from_rational<C>(Rational(-1)); }
  friend ExteriorOperator operator*(ExteriorOperator a, const C& s) { return a *= s; }
  friend ExteriorOperator operator*(const C& s, ExteriorOperator a) { return a *= s; }

  friend ExteriorOperator operator*(const ExteriorOperator& a, const ExteriorOperator& b) {
    a.check(b);
    ExteriorOperator r(a.n_);
    for (Mask i = 0; i < a.dim(); ++i) {
      for (const auto& [k, x] : a.rows_[i]) {
        for (const auto& [j, y] : b.rows_[k]) r.add_entry(i, j, x * y);
      }
    }
    return r;
  }

  friend bool operator==(const ExteriorOperator& a, const ExteriorOperator& b) {
    return a.n_ == b.n_ && a.rows_ == b.rows_;
  }

  template <typename D>
  ExteriorOperator<D> cast() const {
    ExteriorOperator<D> r(n_);
    for (Mask i = 0; i < dim(); ++i) {
      for (const auto& [j, v] : rows_[i]) r.add_entry(i, j, convert_scalar<D>(v));
    }
    return r;
  }

  /// Sparse triplets "row col value", one per line.
  std::string triplets() const {
    std::ostringstream os;
    for (Mask i = 0; i < dim(); ++i) {
      for (const auto& [j, v] : rows_[i]) os << i << ' ' << j << ' ' << scalar_text(v) << '\n';
    }
    return os.str();
  }

 private:
  static C one() { return from_rational<C>(Rational(1)); }

  static std::string scalar_text(const C& v) {
    if constexpr (std::is_same_v<C, Rational>) {
      return v.get_str();
    } else if constexpr (std::is_same_v<C, GaussianRational>) {
      return to_string(v);
    } else {
      std::ostringstream os;
      os.precision(17);
      os << v;
      return os.str();
    }
  }

  void check(const ExteriorOperator& o) const {
    if (n_ != o.n_) throw Error(ErrorCode::InvalidArgument, "exterior operators of different n");
  }

  int n_ = 0;
  std::vector<Row> rows_;
};

template <typename C>
ExteriorOperator<C> commutator(const ExteriorOperator<C>& a, const ExteriorOperator<C>& b) {
  return a * b - b * a;
}

template <typename C>
ExteriorOperator<C> anticommutator(const ExteriorOperator<C>& a, const ExteriorOperator<C>& b) {
  return a * b + b * a;
}

template <typename C>
ExteriorOperator<C> power(const ExteriorOperator<C>& a, unsigned m) {
  ExteriorOperator<C> r = ExteriorOperator<C>::identity(a.n());
  for (unsigned k = 0; k < m; ++k) r = r * a;
  return r;
}

/// c_i = dz^i - iota, chat_i = dz^i + iota, and the same with dzbar. i is 1-based.
template <typename C>
ExteriorOperator<C> generator(CliffordKind kind, int i, int n) {
  if (i < 1 || i > n) throw Error(ErrorCode::VariableOutOfRange, "generator index out of range");
  const bool bar = kind == CliffordKind::CBar || kind == CliffordKind::CHatBar;
  const bool hat = kind == CliffordKind::CHat || kind == CliffordKind::CHatBar;
  const int g = (bar ? n : 0) + (i - 1);
  auto e = ExteriorOperator<C>::wedge(n, g);
  const auto iota = ExteriorOperator<C>::contraction(n, g);
  return hat ? e + iota : e - iota;
}

/// Square of a generator: -1 for c, cbar and +1 for chat, chatbar.
inline int generator_square(CliffordKind kind) {
  return (kind == CliffordKind::C || kind == CliffordKind::CBar) ? -1 : 1;
}

/// N built from the Clifford formula n + (1/2) sum (c_i chat_i + cbar_i chatbar_i).
template <typename C>
ExteriorOperator<C> number_operator(int n) {
  ExteriorOperator<C> sum(n);
  for (int i = 1; i <= n; ++i) {
    sum += generator<C>(CliffordKind::C, i, n) * generator<C>(CliffordKind::CHat, i, n);
    sum += generator<C>(CliffordKind::CBar, i, n) * generator<C>(CliffordKind::CHatBar, i, n);
  }
  return ExteriorOperator<C>::identity(n) * from_rational<C>(Rational(n)) + sum * from_rational<C>(Rational(1, 2));
}

/// The grading operator built directly: k on forms of degree k.
template <typename C>
ExteriorOperator<C> degree_operator(int n) {
  ExteriorOperator<C> r(n);
  for (Mask m = 0; m < r.dim(); ++m) r.add_entry(m, m, from_rational<C>(Rational(form_degree(m))));
  return r;
}

template <typename C>
C supertrace(const ExteriorOperator<C>& a) {
  C s{};
  for (Mask m = 0; m < a.dim(); ++m) {
    const C d = a.entry(m, m);
    if (form_degree(m) % 2) {
      s -= d;
    } else {
      s += d;
    }
  }
  return s;
}

template <typename C>
C trace(const ExteriorOperator<C>& a) {
  C s{};
  for (Mask m = 0; m < a.dim(); ++m) s += a.entry(m, m);
  return s;
}

// ---- L_f ---------------------------------------------------------------------------

/// Metric factor in L_f: g^{mu-bar nu} = kappa * delta for the metric used here.
inline constexpr int kLfKappa = 2;

/// L_f = sum_{mu,l} H_{mu l} A_{mu l} + conj(H_{mu l}) Abar_{mu l} with
/// A_{mu l} = -kappa iota_{dzbar^mu} dz^l and Abar_{mu l} = -kappa iota_{dz^mu} dzbar^l.
template <typename C>
struct LfStructure {
  int n = 0;
  std::vector<ExteriorOperator<C>> a;     // index mu * n + l
  std::vector<ExteriorOperator<C>> abar;  // index mu * n + l
};

template <typename C>
LfStructure<C> lf_structure(int n) {
  LfStructure<C> s;
  s.n = n;
  const C k = from_rational<C>(Rational(-kLfKappa));
  for (int mu = 0; mu < n; ++mu) {
    for (int l = 0; l < n; ++l) {
      s.a.push_back(ExteriorOperator<C>::contraction(n, n + mu) * ExteriorOperator<C>::wedge(n, l) * k);
      s.abar.push_back(ExteriorOperator<C>::contraction(n, mu) * ExteriorOperator<C>::wedge(n, n + l) * k);
    }
  }
  return s;
}

/// L_f for a symmetric Hessian given row-major as n*n entries.
template <typename C>
ExteriorOperator<C> build_Lf(const std::vector<C>& hessian, int n) {
  if (hessian.size() != static_cast<std::size_t>(n * n)) throw Error(ErrorCode::InvalidArgument, "Hessian must be n x n");
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      if (!(hessian[static_cast<std::size_t>(i * n + j)] == hessian[static_cast<std::size_t>(j * n + i)])) {
        throw Error(ErrorCode::InvalidArgument, "Hessian must be symmetric");
      }
    }
  }
  const auto s = lf_structure<C>(n);
  ExteriorOperator<C> r(n);
  for (std::size_t k = 0; k < hessian.size(); ++k) {
    const C& h = hessian[k];
    if (is_zero(h)) continue;
    r += s.a[k] * h;
    r += s.abar[k] * conj(h);
  }
  return r;
}

}  // namespace lgheat
