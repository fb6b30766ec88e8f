#pragma once

// Compiled first and second holomorphic derivatives of f for numeric loops.

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

#include "lgheat/poly.hpp"

namespace lgheat {

using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

class HolomorphicDerivatives {
 public:
  HolomorphicDerivatives() = default;

  template <typename C>
  explicit HolomorphicDerivatives(const Poly<C>& f) : n_(f.nvars()) {
    if (!f.is_holomorphic()) throw Error(ErrorCode::NotHolomorphic, "expected a holomorphic polynomial");
    for (int i = 0; i < n_; ++i) {
      const Poly<C> di = wirtinger_derivative(f, i, false);
      grad_.emplace_back(di);
      for (int j = 0; j < n_; ++j) hess_.emplace_back(wirtinger_derivative(di, j, false));
    }
  }

  int n() const { return n_; }

  CVector gradient(std::span<const Complex> z) const {
    CVector g(n_);
    for (int i = 0; i < n_; ++i) g(i) = grad_[static_cast<std::size_t>(i)](z);
    return g;
  }

  CMatrix hessian(std::span<const Complex> z) const {
    CMatrix h(n_, n_);
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) h(i, j) = hess_[static_cast<std::size_t>(i * n_ + j)](z);
    }
    return h;
  }

  /// |df|^2 at z.
  double gradient_norm2(std::span<const Complex> z) const {
    double s = 0.0;
    for (const auto& g : grad_) s += std::norm(g(z));
    return s;
  }

 private:
  int n_ = 0;
  std::vector<CompiledPoly> grad_;
  std::vector<CompiledPoly> hess_;
};

}  // namespace lgheat
