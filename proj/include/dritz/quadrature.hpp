#pragma once

#include <Eigen/Dense>

namespace dritz {

// Quadrature rule on a reference domain: points are rows of `points`
// (one column per coordinate), weights sum to the reference measure.
struct QuadratureRule {
  Eigen::MatrixXd points;
  Eigen::VectorXd weights;
  int degree = 0;  // declared polynomial exactness

  int size() const { return static_cast<int>(weights.size()); }
};

// n-point Gauss-Legendre rule on [0,1]; exact through degree 2n-1.
QuadratureRule gauss_legendre_unit(int n);

// Rule on the reference triangle {(x,y): x,y >= 0, x+y <= 1} exact through
// total degree `degree`, built as a collapsed tensor Gauss rule.
QuadratureRule triangle_rule(int degree);

}  // namespace dritz
