#include "dritz/numderiv.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace dritz {

namespace {

using Trip = Eigen::Triplet<double>;

void scatter_block(std::vector<Trip>& out, int row_elem, int col_elem, int m,
                   const Eigen::MatrixXd& block, double scale) {
  if (scale == 0.0) return;
  const int r0 = row_elem * m;
  const int c0 = col_elem * m;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      const double val = scale * block(a, b);
      if (val != 0.0) out.emplace_back(r0 + a, c0 + b, val);
    }
}

}  // namespace

OperatorSet assemble_operators(const DGSpace& space) {
  const Mesh& mesh = *space.mesh;
  const int d = mesh.dimension;
  const int m = space.local_dim;
  const int N = space.dim;

  std::vector<std::vector<Trip>> tp(d), tm(d), tl(d), tq(d);

  // Volume contributions: -int_T v d_i(phi) for the sided/central operators
  // and +int_T d_i(v) phi for the piecewise-gradient projections.
  for (int t = 0; t < mesh.num_elements(); ++t) {
    const Eigen::VectorXd w = space.physical_weights(t);
    for (int i = 0; i < d; ++i) {
      const Eigen::MatrixXd G = space.grad_table(t, i);
      const Eigen::MatrixXd vw = space.vol_vals.transpose() * w.asDiagonal() * G;
      scatter_block(tq[i], t, t, m, vw, 1.0);
      scatter_block(tp[i], t, t, m, vw.transpose(), -1.0);
      scatter_block(tm[i], t, t, m, vw.transpose(), -1.0);
    }
  }

  // Interior edges: + int_e Q_i(v) nu_i [phi] with the upwinded traces
  // Q^+/- = {v} +/- (1/2) sgn(nu_i) [v], and the lifting pairing
  // -int_e [v] nu_i {phi}.
  for (std::size_t e = 0; e < mesh.interior_edges.size(); ++e) {
    const Edge& edge = mesh.interior_edges[e];
    const EdgeTraces& tr = space.interior_traces[e];
    const Eigen::MatrixXd App =
        tr.plus_vals.transpose() * tr.weights.asDiagonal() * tr.plus_vals;
    const Eigen::MatrixXd Apm =
        tr.plus_vals.transpose() * tr.weights.asDiagonal() * tr.minus_vals;
    const Eigen::MatrixXd Amp = Apm.transpose();
    const Eigen::MatrixXd Amm =
        tr.minus_vals.transpose() * tr.weights.asDiagonal() * tr.minus_vals;
    const int P = edge.plus_element;
    const int M = edge.minus_element;
    for (int i = 0; i < d; ++i) {
      const double nu = edge.normal(i);
      if (nu == 0.0) continue;
      const double s = (nu >= 0.0) ? 1.0 : -1.0;
      const double cpp = 0.5 * (1.0 + s);  // plus-trace weight on v_plus
      const double cpm = 0.5 * (1.0 - s);
      scatter_block(tp[i], P, P, m, App, nu * cpp);
      scatter_block(tp[i], P, M, m, Apm, nu * cpm);
      scatter_block(tp[i], M, P, m, Amp, -nu * cpp);
      scatter_block(tp[i], M, M, m, Amm, -nu * cpm);
      scatter_block(tm[i], P, P, m, App, nu * cpm);
      scatter_block(tm[i], P, M, m, Apm, nu * cpp);
      scatter_block(tm[i], M, P, m, Amp, -nu * cpm);
      scatter_block(tm[i], M, M, m, Amm, -nu * cpp);
      scatter_block(tl[i], P, P, m, App, -0.5 * nu);
      scatter_block(tl[i], P, M, m, Apm, 0.5 * nu);
      scatter_block(tl[i], M, P, m, Amp, -0.5 * nu);
      scatter_block(tl[i], M, M, m, Amm, 0.5 * nu);
    }
  }

  // Boundary edges: both sided traces reduce to the inside value.
  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    const Edge& edge = mesh.boundary_edges[e];
    const EdgeTraces& tr = space.boundary_traces[e];
    const Eigen::MatrixXd A =
        tr.plus_vals.transpose() * tr.weights.asDiagonal() * tr.plus_vals;
    const int T = edge.plus_element;
    for (int i = 0; i < d; ++i) {
      const double nu = edge.normal(i);
      if (nu == 0.0) continue;
      scatter_block(tp[i], T, T, m, A, nu);
      scatter_block(tm[i], T, T, m, A, nu);
    }
  }

  OperatorSet ops;
  ops.space = &space;
  ops.mass = space.mass_diagonal();
  const Eigen::VectorXd minv = ops.mass.cwiseInverse();
  ops.Dp.resize(d);
  ops.Dm.resize(d);
  ops.Dc.resize(d);
  ops.P.resize(d);
  ops.R.resize(d);
  for (int i = 0; i < d; ++i) {
    SpMat Bp(N, N), Bm(N, N), Bl(N, N), Bq(N, N);
    Bp.setFromTriplets(tp[i].begin(), tp[i].end());
    Bm.setFromTriplets(tm[i].begin(), tm[i].end());
    Bl.setFromTriplets(tl[i].begin(), tl[i].end());
    Bq.setFromTriplets(tq[i].begin(), tq[i].end());
    ops.Dp[i] = minv.asDiagonal() * Bp;
    ops.Dm[i] = minv.asDiagonal() * Bm;
    ops.Dc[i] = 0.5 * (ops.Dp[i] + ops.Dm[i]);
    ops.P[i] = minv.asDiagonal() * Bq;
    ops.R[i] = minv.asDiagonal() * Bl;
  }
  return ops;
}

DerivativeOperator assemble_partial(const DGSpace& space, int coordinate, Side side) {
  if (coordinate < 0 || coordinate >= space.mesh->dimension)
    throw std::invalid_argument("assemble_partial: coordinate out of range");
  OperatorSet ops = assemble_operators(space);
  DerivativeOperator op;
  op.space = &space;
  op.coordinate = coordinate;
  op.side = side;
  switch (side) {
    case Side::Plus:
      op.D = std::move(ops.Dp[coordinate]);
      break;
    case Side::Minus:
      op.D = std::move(ops.Dm[coordinate]);
      break;
    case Side::Central:
      op.D = std::move(ops.Dc[coordinate]);
      break;
  }
  return op;
}

DGFunction numerical_gradient(const DGFunction& v, Side side) {
  if (v.components != 1)
    throw std::invalid_argument("numerical_gradient: scalar argument required");
  const DGSpace& space = *v.space;
  const OperatorSet ops = assemble_operators(space);
  const int d = space.mesh->dimension;
  DGFunction out(space, d);
  for (int i = 0; i < d; ++i) {
    const SpMat& D = (side == Side::Plus)    ? ops.Dp[i]
                     : (side == Side::Minus) ? ops.Dm[i]
                                             : ops.Dc[i];
    out.component(i) = D * v.coeffs;
  }
  return out;
}

DGFunction lifting(const DGFunction& v) {
  if (v.components != 1)
    throw std::invalid_argument("lifting: scalar argument required");
  const DGSpace& space = *v.space;
  const OperatorSet ops = assemble_operators(space);
  const int d = space.mesh->dimension;
  DGFunction out(space, d);
  for (int i = 0; i < d; ++i) out.component(i) = ops.R[i] * v.coeffs;
  return out;
}

double decomposition_residual(const DGFunction& v) {
  if (v.components != 1)
    throw std::invalid_argument("decomposition_residual: scalar argument required");
  const DGSpace& space = *v.space;
  const OperatorSet ops = assemble_operators(space);
  const int d = space.mesh->dimension;
  double acc = 0.0;
  for (int i = 0; i < d; ++i) {
    const Eigen::VectorXd diff =
        ops.Dc[i] * v.coeffs - (ops.P[i] * v.coeffs + ops.R[i] * v.coeffs);
    acc += diff.dot(ops.mass.cwiseProduct(diff));
  }
  return std::sqrt(acc);
}

void export_triplets(const SpMat& A, std::ostream& os) {
  os.precision(17);
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it)
      os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

}  // namespace dritz
