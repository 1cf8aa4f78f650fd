#include "dritz/poisson_linear.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace dritz {

namespace {

using Trip = Eigen::Triplet<double>;

void append_block(std::vector<Trip>& out, int row0, int col0,
                  const Eigen::MatrixXd& block, double scale) {
  if (scale == 0.0) return;
  for (int r = 0; r < block.rows(); ++r)
    for (int c = 0; c < block.cols(); ++c) {
      const double val = scale * block(r, c);
      if (val != 0.0) out.emplace_back(row0 + r, col0 + c, val);
    }
}

Eigen::Vector2d as_point(const Eigen::MatrixXd& pts, Eigen::Index row) {
  Eigen::Vector2d x = Eigen::Vector2d::Zero();
  x.head(pts.cols()) = pts.row(row).transpose();
  return x;
}

SpMat piecewise_stiffness(const DGSpace& space) {
  const int m = space.local_dim;
  std::vector<Trip> trips;
  for (int t = 0; t < space.mesh->num_elements(); ++t) {
    const Eigen::VectorXd w = space.physical_weights(t);
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < space.mesh->dimension; ++i) {
      const Eigen::MatrixXd G = space.grad_table(t, i);
      block += G.transpose() * w.asDiagonal() * G;
    }
    append_block(trips, t * m, t * m, block, 1.0);
  }
  SpMat S(space.dim, space.dim);
  S.setFromTriplets(trips.begin(), trips.end());
  return S;
}

// E(phi, u) = sum over the selected edges of int {grad u . nu} [phi].
SpMat flux_matrix(const DGSpace& space, bool include_boundary) {
  const Mesh& mesh = *space.mesh;
  const int m = space.local_dim;
  const int d = mesh.dimension;
  std::vector<Trip> trips;
  for (std::size_t e = 0; e < mesh.interior_edges.size(); ++e) {
    const Edge& edge = mesh.interior_edges[e];
    const EdgeTraces& tr = space.interior_traces[e];
    const int P = edge.plus_element;
    const int M = edge.minus_element;
    const auto gp = space.basis_grad_at(P, tr.points);
    const auto gm = space.basis_grad_at(M, tr.points);
    Eigen::MatrixXd gnP = Eigen::MatrixXd::Zero(tr.points.rows(), m);
    Eigen::MatrixXd gnM = Eigen::MatrixXd::Zero(tr.points.rows(), m);
    for (int i = 0; i < d; ++i) {
      gnP += edge.normal(i) * gp[i];
      gnM += edge.normal(i) * gm[i];
    }
    const Eigen::MatrixXd WP = tr.weights.asDiagonal() * gnP;
    const Eigen::MatrixXd WM = tr.weights.asDiagonal() * gnM;
    append_block(trips, P * m, P * m, tr.plus_vals.transpose() * WP, 0.5);
    append_block(trips, P * m, M * m, tr.plus_vals.transpose() * WM, 0.5);
    append_block(trips, M * m, P * m, tr.minus_vals.transpose() * WP, -0.5);
    append_block(trips, M * m, M * m, tr.minus_vals.transpose() * WM, -0.5);
  }
  if (include_boundary) {
    for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
      const Edge& edge = mesh.boundary_edges[e];
      const EdgeTraces& tr = space.boundary_traces[e];
      const int T = edge.plus_element;
      const auto gt = space.basis_grad_at(T, tr.points);
      Eigen::MatrixXd gn = Eigen::MatrixXd::Zero(tr.points.rows(), m);
      for (int i = 0; i < d; ++i) gn += edge.normal(i) * gt[i];
      append_block(trips, T * m, T * m,
                   tr.plus_vals.transpose() * tr.weights.asDiagonal() * gn, 1.0);
    }
  }
  SpMat E(space.dim, space.dim);
  E.setFromTriplets(trips.begin(), trips.end());
  return E;
}

Eigen::VectorXd volume_load(const DGSpace& space, const ScalarFn& F) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(space.dim);
  if (!F) return b;
  const int m = space.local_dim;
  for (int t = 0; t < space.mesh->num_elements(); ++t) {
    const Eigen::VectorXd w = space.physical_weights(t);
    const Eigen::MatrixXd pts = space.physical_points(t);
    Eigen::VectorXd fw(w.size());
    for (Eigen::Index q = 0; q < w.size(); ++q)
      fw(q) = w(q) * F(as_point(pts, q));
    b.segment(t * m, m) = space.vol_vals.transpose() * fw;
  }
  return b;
}

// l(phi) = sum_boundary int g (grad phi . nu), the Nitsche data term.
Eigen::VectorXd boundary_flux_load(const DGSpace& space, const ScalarFn& g) {
  Eigen::VectorXd l = Eigen::VectorXd::Zero(space.dim);
  if (!g) return l;
  const Mesh& mesh = *space.mesh;
  const int m = space.local_dim;
  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    const Edge& edge = mesh.boundary_edges[e];
    const EdgeTraces& tr = space.boundary_traces[e];
    const int T = edge.plus_element;
    const auto gt = space.basis_grad_at(T, tr.points);
    Eigen::MatrixXd gn = Eigen::MatrixXd::Zero(tr.points.rows(), m);
    for (int i = 0; i < mesh.dimension; ++i) gn += edge.normal(i) * gt[i];
    Eigen::VectorXd gw(tr.weights.size());
    for (Eigen::Index q = 0; q < tr.weights.size(); ++q)
      gw(q) = tr.weights(q) * g(as_point(tr.points, q));
    l.segment(T * m, m) += gn.transpose() * gw;
  }
  return l;
}

// Per-coordinate boundary trace pairing nu_i int u phi and its data load.
void boundary_trace_ops(const DGSpace& space, const ScalarFn& g,
                        std::vector<SpMat>& C, std::vector<Eigen::VectorXd>& l) {
  const Mesh& mesh = *space.mesh;
  const int d = mesh.dimension;
  const int m = space.local_dim;
  std::vector<std::vector<Trip>> trips(d);
  C.assign(d, SpMat(space.dim, space.dim));
  l.assign(d, Eigen::VectorXd::Zero(space.dim));
  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    const Edge& edge = mesh.boundary_edges[e];
    const EdgeTraces& tr = space.boundary_traces[e];
    const int T = edge.plus_element;
    const Eigen::MatrixXd A =
        tr.plus_vals.transpose() * tr.weights.asDiagonal() * tr.plus_vals;
    Eigen::VectorXd gw = Eigen::VectorXd::Zero(tr.weights.size());
    if (g)
      for (Eigen::Index q = 0; q < tr.weights.size(); ++q)
        gw(q) = tr.weights(q) * g(as_point(tr.points, q));
    for (int i = 0; i < d; ++i) {
      const double nu = edge.normal(i);
      if (nu == 0.0) continue;
      append_block(trips[i], T * m, T * m, A, nu);
      if (g) l[i].segment(T * m, m) += nu * (tr.plus_vals.transpose() * gw);
    }
  }
  for (int i = 0; i < d; ++i) C[i].setFromTriplets(trips[i].begin(), trips[i].end());
}

SpMat symmetrize(const SpMat& A) { return 0.5 * (A + SpMat(A.transpose())); }

}  // namespace

JumpOperatorAssembly assemble_jump_operator(const DGSpace& space) {
  const Mesh& mesh = *space.mesh;
  const int m = space.local_dim;
  std::vector<Trip> trips;
  for (std::size_t e = 0; e < mesh.interior_edges.size(); ++e) {
    const Edge& edge = mesh.interior_edges[e];
    const EdgeTraces& tr = space.interior_traces[e];
    const double wgt = edge.gamma / edge.size;
    const Eigen::MatrixXd App =
        tr.plus_vals.transpose() * tr.weights.asDiagonal() * tr.plus_vals;
    const Eigen::MatrixXd Apm =
        tr.plus_vals.transpose() * tr.weights.asDiagonal() * tr.minus_vals;
    const Eigen::MatrixXd Amm =
        tr.minus_vals.transpose() * tr.weights.asDiagonal() * tr.minus_vals;
    const int P = edge.plus_element;
    const int M = edge.minus_element;
    append_block(trips, P * m, P * m, App, wgt);
    append_block(trips, P * m, M * m, Apm, -wgt);
    append_block(trips, M * m, P * m, Apm.transpose(), -wgt);
    append_block(trips, M * m, M * m, Amm, wgt);
  }
  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    const Edge& edge = mesh.boundary_edges[e];
    const EdgeTraces& tr = space.boundary_traces[e];
    const int T = edge.plus_element;
    append_block(trips, T * m, T * m,
                 tr.plus_vals.transpose() * tr.weights.asDiagonal() * tr.plus_vals,
                 edge.gamma / edge.size);
  }
  JumpOperatorAssembly out;
  out.space = &space;
  out.J.resize(space.dim, space.dim);
  out.J.setFromTriplets(trips.begin(), trips.end());
  return out;
}

Eigen::VectorXd jump_boundary_load(const DGSpace& space, const ScalarFn& g) {
  Eigen::VectorXd l = Eigen::VectorXd::Zero(space.dim);
  if (!g) return l;
  const Mesh& mesh = *space.mesh;
  const int m = space.local_dim;
  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    const Edge& edge = mesh.boundary_edges[e];
    const EdgeTraces& tr = space.boundary_traces[e];
    Eigen::VectorXd gw(tr.weights.size());
    for (Eigen::Index q = 0; q < tr.weights.size(); ++q)
      gw(q) = tr.weights(q) * g(as_point(tr.points, q)) * edge.gamma / edge.size;
    l.segment(edge.plus_element * m, m) += tr.plus_vals.transpose() * gw;
  }
  return l;
}

LinearScheme assemble(SchemeKind kind, const DGSpace& space, const ScalarFn& F,
                      const ScalarFn& g) {
  LinearScheme out;
  out.kind = kind;
  out.space = &space;
  const SpMat J = assemble_jump_operator(space).J;
  const Eigen::VectorXd load = volume_load(space, F);
  const Eigen::VectorXd gpen = jump_boundary_load(space, g);

  switch (kind) {
    case SchemeKind::PW: {
      out.A = piecewise_stiffness(space) + J;
      out.b = load + gpen;
      break;
    }
    case SchemeKind::SIPDG: {
      const SpMat E = flux_matrix(space, /*include_boundary=*/true);
      out.A = piecewise_stiffness(space) - E - SpMat(E.transpose()) + J;
      out.b = load + gpen - boundary_flux_load(space, g);
      break;
    }
    case SchemeKind::BO: {
      const OperatorSet ops = assemble_operators(space);
      SpMat A = piecewise_stiffness(space);
      for (int i = 0; i < space.mesh->dimension; ++i)
        A = A + SpMat(ops.R[i].transpose() * SpMat(ops.mass.asDiagonal() * ops.R[i]));
      const SpMat E = flux_matrix(space, /*include_boundary=*/false);
      out.A = A - E - SpMat(E.transpose()) + 2.0 * J;
      out.b = load + 2.0 * gpen;
      break;
    }
    case SchemeKind::LDG: {
      const OperatorSet ops = assemble_operators(space);
      const Eigen::VectorXd minv = ops.mass.cwiseInverse();
      std::vector<SpMat> C;
      std::vector<Eigen::VectorXd> l;
      boundary_trace_ops(space, g, C, l);
      SpMat A(space.dim, space.dim);
      Eigen::VectorXd b = load + gpen;
      for (int i = 0; i < space.mesh->dimension; ++i) {
        const SpMat Dt = ops.Dc[i] - SpMat(minv.asDiagonal() * C[i]);
        A = A + SpMat(Dt.transpose() * SpMat(ops.mass.asDiagonal() * Dt));
        b -= Dt.transpose() * l[i];
      }
      out.A = A + J;
      out.b = b;
      break;
    }
    case SchemeKind::DWDG: {
      // The scheme's sided derivatives treat the exterior boundary trace as
      // the Dirichlet data rather than the interior value; keeping the raw
      // operators instead drops the convergence order to one.
      const OperatorSet ops = assemble_operators(space);
      const Eigen::VectorXd minv = ops.mass.cwiseInverse();
      std::vector<SpMat> C;
      std::vector<Eigen::VectorXd> l;
      boundary_trace_ops(space, g, C, l);
      SpMat A(space.dim, space.dim);
      Eigen::VectorXd b = load + gpen;
      for (int i = 0; i < space.mesh->dimension; ++i) {
        const SpMat Bc(minv.asDiagonal() * C[i]);
        const SpMat Dp = ops.Dp[i] - Bc;
        const SpMat Dm = ops.Dm[i] - Bc;
        A = A + SpMat(0.5 * SpMat(Dp.transpose() *
                                  SpMat(ops.mass.asDiagonal() * Dp)));
        A = A + SpMat(0.5 * SpMat(Dm.transpose() *
                                  SpMat(ops.mass.asDiagonal() * Dm)));
        b -= 0.5 * (Dp.transpose() * l[i]) + 0.5 * (Dm.transpose() * l[i]);
      }
      out.A = A + J;
      out.b = b;
      break;
    }
  }
  out.A = symmetrize(out.A);  // remove assembly round-off skew
  return out;
}

DGFunction solve(const LinearScheme& scheme) {
  const Eigen::Index n = scheme.A.rows();
  Eigen::VectorXd x;
  if (n <= 2000) {
    const Eigen::MatrixXd Ad(scheme.A);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(Ad);
    if (ldlt.info() != Eigen::Success)
      throw std::runtime_error("solve: dense factorization failed");
    x = ldlt.solve(scheme.b);
  } else {
    Eigen::SimplicialLDLT<SpMat> ldlt(scheme.A);
    if (ldlt.info() != Eigen::Success)
      throw std::runtime_error("solve: sparse factorization failed");
    x = ldlt.solve(scheme.b);
  }
  const double resid = (scheme.A * x - scheme.b).norm();
  const double scale = std::max(1.0, scheme.b.norm());
  if (!(resid <= 1e-10 * scale))
    throw std::runtime_error("solve: residual " + std::to_string(resid) +
                             " exceeds tolerance");
  DGFunction u(*scheme.space);
  u.coeffs = x;
  return u;
}

double consistency_residual(SchemeKind kind, const DGSpace& space,
                            const ScalarFn& u_exact, const ScalarFn& F,
                            const ScalarFn& g) {
  const LinearScheme scheme = assemble(kind, space, F, g);
  const DGFunction pu = project_local_l2(space, u_exact);
  const Eigen::VectorXd r = scheme.A * pu.coeffs - scheme.b;
  // Dual norm against the gradient-plus-penalty inner product.
  const SpMat N =
      piecewise_stiffness(space) + assemble_jump_operator(space).J;
  Eigen::SimplicialLDLT<SpMat> ldlt(N);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("consistency_residual: norm factorization failed");
  const Eigen::VectorXd z = ldlt.solve(r);
  return std::sqrt(std::max(0.0, r.dot(z)));
}

}  // namespace dritz
