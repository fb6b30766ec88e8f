#pragma once

// Gauss-Hermite rules from the Golub-Welsch eigenproblem.

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <vector>

#include "lgheat/errors.hpp"

namespace lgheat {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Nodes and weights with sum w_k f(x_k) ~ integral of exp(-x^2) f(x) over R.
inline QuadratureRule gauss_hermite(int count) {
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "quadrature needs at least one node");
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(count, count);
  for (int k = 1; k < count; ++k) {
    j(k, k - 1) = j(k - 1, k) = std::sqrt(k / 2.0);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  QuadratureRule r;
  const double mu0 = std::sqrt(std::numbers::pi);
  for (int k = 0; k < count; ++k) {
    r.nodes.push_back(es.eigenvalues()(k));
    const double v = es.eigenvectors()(0, k);
    r.weights.push_back(mu0 * v * v);
  }
  return r;
}

}  // namespace lgheat
