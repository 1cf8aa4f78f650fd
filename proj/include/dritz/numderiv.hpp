#pragma once

#include "dritz/dg_space.hpp"

#include <Eigen/Sparse>

#include <iosfwd>
#include <vector>

namespace dritz {

using SpMat = Eigen::SparseMatrix<double>;

// Trace selection for the sided numerical derivatives: the upwinded trace
// Q^+/Q^- = {v} +/- (1/2) sgn(nu_i) [v] with sgn(0) = +1, or their average.
enum class Side { Plus, Minus, Central };

struct DerivativeOperator {
  const DGSpace* space = nullptr;
  int coordinate = 0;
  Side side = Side::Central;
  SpMat D;  // coefficients -> coefficients of the numerical partial
};

// All sparse operators the schemes and energies need, assembled in one sweep:
// sided/central numerical partials Dp/Dm/Dc, piecewise-gradient projections P,
// lifting components R (interior edges only), and the block mass diagonal.
struct OperatorSet {
  const DGSpace* space = nullptr;
  std::vector<SpMat> Dp, Dm, Dc, P, R;
  Eigen::VectorXd mass;
};

OperatorSet assemble_operators(const DGSpace& space);

DerivativeOperator assemble_partial(const DGSpace& space, int coordinate, Side side);

// Component i equals the coordinate-i numerical partial applied to v.
DGFunction numerical_gradient(const DGFunction& v, Side side);

// Vector field R(v) defined against vector test functions by
// int R(v).phi = -sum_{interior edges} int [v] {phi . nu}.
DGFunction lifting(const DGFunction& v);

// ||central gradient - (piecewise gradient + lifting)||_L2, the defect of the
// gradient decomposition identity (zero on the whole space up to roundoff).
double decomposition_residual(const DGFunction& v);

// Coordinate text export: one "row col value" line per stored entry.
void export_triplets(const SpMat& A, std::ostream& os);

}  // namespace dritz
