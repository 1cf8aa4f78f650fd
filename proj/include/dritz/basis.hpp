#pragma once

#include <Eigen/Dense>

namespace dritz {

// Number of degree-k polynomial basis functions on a simplex.
int local_dimension(int dimension, int k);

// Orthonormal shifted Legendre basis on [0,1]: phi_j(t) = sqrt(2j+1) P_j(2t-1).
// Fills val(q, j) and der(q, j) = d(phi_j)/dt for j = 0..k at the points t.
void legendre_basis(int k, const Eigen::VectorXd& t, Eigen::MatrixXd& val,
                    Eigen::MatrixXd& der);

// Orthonormal Dubiner basis on the reference triangle {x,y >= 0, x+y <= 1}.
// pts has rows (x, y); fills value and both reference-coordinate derivative
// tables, each (num points) x (local dimension).
void dubiner_basis(int k, const Eigen::MatrixXd& pts, Eigen::MatrixXd& val,
                   Eigen::MatrixXd& dx, Eigen::MatrixXd& dy);

}  // namespace dritz
