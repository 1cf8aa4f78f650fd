#include "dritz/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace dritz {

QuadratureRule gauss_legendre_unit(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre_unit: n must be >= 1");
  Eigen::VectorXd x(n), w(n);
  // Newton iteration on P_n over [-1,1]; nodes come in symmetric pairs.
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
  QuadratureRule rule;
  rule.points.resize(n, 1);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.points(i, 0) = 0.5 * (x[i] + 1.0);
    rule.weights[i] = 0.5 * w[i];
  }
  rule.degree = 2 * n - 1;
  return rule;
}

QuadratureRule triangle_rule(int degree) {
  if (degree < 0) throw std::invalid_argument("triangle_rule: degree must be >= 0");
  // Duffy map (u,v) -> (u(1-v), v) with Jacobian (1-v): a polynomial of total
  // degree d becomes degree <= d in u and d+1 in v, so m Gauss points per
  // direction with 2m-1 >= degree+1 suffice.
  const int m = (degree + 3) / 2;
  const QuadratureRule g = gauss_legendre_unit(m);
  QuadratureRule rule;
  rule.points.resize(m * m, 2);
  rule.weights.resize(m * m);
  int r = 0;
  for (int iu = 0; iu < m; ++iu) {
    for (int iv = 0; iv < m; ++iv, ++r) {
      const double u = g.points(iu, 0);
      const double v = g.points(iv, 0);
      rule.points(r, 0) = (1.0 - v) * u;
      rule.points(r, 1) = v;
      rule.weights[r] = g.weights[iu] * g.weights[iv] * (1.0 - v);
    }
  }
  rule.degree = degree;
  return rule;
}

}  // namespace dritz
