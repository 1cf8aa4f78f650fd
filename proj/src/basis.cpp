#include "dritz/basis.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace dritz {

int local_dimension(int dimension, int k) {
  if (k < 0) throw std::invalid_argument("local_dimension: k must be >= 0");
  if (dimension == 1) return k + 1;
  if (dimension == 2) return (k + 1) * (k + 2) / 2;
  throw std::invalid_argument("local_dimension: dimension must be 1 or 2");
}

void legendre_basis(int k, const Eigen::VectorXd& t, Eigen::MatrixXd& val,
                    Eigen::MatrixXd& der) {
  const int n = static_cast<int>(t.size());
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, k + 1);
  Eigen::MatrixXd Pd = Eigen::MatrixXd::Zero(n, k + 1);
  const Eigen::VectorXd x = 2.0 * t.array() - 1.0;
  P.col(0).setOnes();
  if (k >= 1) {
    P.col(1) = x;
    Pd.col(1).setOnes();
  }
  for (int j = 1; j < k; ++j) {
    P.col(j + 1) =
        ((2.0 * j + 1.0) * x.array() * P.col(j).array() - j * P.col(j - 1).array()) /
        (j + 1.0);
    Pd.col(j + 1) = Pd.col(j - 1) + (2.0 * j + 1.0) * P.col(j);
  }
  val.resize(n, k + 1);
  der.resize(n, k + 1);
  for (int j = 0; j <= k; ++j) {
    const double scale = std::sqrt(2.0 * j + 1.0);
    val.col(j) = scale * P.col(j);
    der.col(j) = 2.0 * scale * Pd.col(j);  // chain rule for t -> 2t-1
  }
}

namespace {

// Jacobi polynomials P_n^{(alpha,beta)} for n = 0..nmax at the points x.
Eigen::MatrixXd jacobi_values(double alpha, double beta, int nmax,
                              const Eigen::VectorXd& x) {
  const int q = static_cast<int>(x.size());
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(q, nmax + 1);
  P.col(0).setOnes();
  if (nmax >= 1)
    P.col(1) = 0.5 * ((alpha - beta) + (alpha + beta + 2.0) * x.array());
  for (int n = 2; n <= nmax; ++n) {
    const double a1 = 2.0 * n * (n + alpha + beta) * (2.0 * n + alpha + beta - 2.0);
    const double a2 = (2.0 * n + alpha + beta - 1.0) * (alpha * alpha - beta * beta);
    const double a3 = (2.0 * n + alpha + beta - 1.0) * (2.0 * n + alpha + beta) *
                      (2.0 * n + alpha + beta - 2.0);
    const double a4 =
        2.0 * (n + alpha - 1.0) * (n + beta - 1.0) * (2.0 * n + alpha + beta);
    P.col(n) = ((a2 + a3 * x.array()) * P.col(n - 1).array() -
                a4 * P.col(n - 2).array()) /
               a1;
  }
  return P;
}

Eigen::MatrixXd jacobi_derivatives(double alpha, double beta, int nmax,
                                   const Eigen::VectorXd& x) {
  const int q = static_cast<int>(x.size());
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(q, nmax + 1);
  if (nmax >= 1) {
    const Eigen::MatrixXd shifted = jacobi_values(alpha + 1, beta + 1, nmax - 1, x);
    for (int n = 1; n <= nmax; ++n)
      D.col(n) = 0.5 * (n + alpha + beta + 1.0) * shifted.col(n - 1);
  }
  return D;
}

}  // namespace

void dubiner_basis(int k, const Eigen::MatrixXd& pts, Eigen::MatrixXd& val,
                   Eigen::MatrixXd& dx, Eigen::MatrixXd& dy) {
  const int q = static_cast<int>(pts.rows());
  const int nd = local_dimension(2, k);
  val.resize(q, nd);
  dx.resize(q, nd);
  dy.resize(q, nd);

  Eigen::VectorXd a(q), b(q), one_m(q);
  for (int r = 0; r < q; ++r) {
    const double t1 = pts(r, 0), t2 = pts(r, 1);
    one_m[r] = 1.0 - t2;
    a[r] = one_m[r] > 1e-14 ? 2.0 * t1 / one_m[r] - 1.0 : -1.0;
    b[r] = 2.0 * t2 - 1.0;
  }
  const Eigen::MatrixXd Pa = jacobi_values(0, 0, k, a);
  const Eigen::MatrixXd Pad = jacobi_derivatives(0, 0, k, a);

  int idx = 0;
  for (int deg = 0; deg <= k; ++deg) {
    for (int m = deg; m >= 0; --m, ++idx) {
      const int n = deg - m;
      const double N = std::sqrt(2.0 * (2 * m + 1) * (m + n + 1));
      const Eigen::MatrixXd Gv = jacobi_values(2.0 * m + 1.0, 0.0, n, b);
      const Eigen::MatrixXd Gd = jacobi_derivatives(2.0 * m + 1.0, 0.0, n, b);
      for (int r = 0; r < q; ++r) {
        const double G = Gv(r, n);
        const double Gder = Gd(r, n);
        if (m == 0) {
          val(r, idx) = N * G;
          dx(r, idx) = 0.0;
          dy(r, idx) = N * 2.0 * Gder;
        } else {
          const double F = Pa(r, m);
          const double Fd = Pad(r, m);
          const double S = std::pow(one_m[r], m);
          const double Sm1 = std::pow(one_m[r], m - 1);
          val(r, idx) = N * F * S * G;
          dx(r, idx) = 2.0 * N * Fd * Sm1 * G;
          dy(r, idx) =
              N * (Fd * (a[r] + 1.0) * Sm1 * G - m * F * Sm1 * G + 2.0 * F * S * Gder);
        }
      }
    }
  }
}

}  // namespace dritz
