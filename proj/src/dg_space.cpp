#include "dritz/dg_space.hpp"

#include "dritz/basis.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace dritz {

DGSpace::DGSpace(const Mesh& m, int k) : mesh(&m), degree(k) {
  if (k < 0) throw std::invalid_argument("DGSpace: degree must be >= 0");
  local_dim = local_dimension(m.dimension, k);
  dim = m.num_elements() * local_dim;

  const int qdeg = 2 * k + 2;
  if (m.dimension == 1) {
    int nq = (qdeg + 2) / 2;   // smallest rule exact through qdeg
    if (nq % 2 == 1) ++nq;     // even rule: keep nodes off element midpoints
    volume_rule = gauss_legendre_unit(nq);
    Eigen::MatrixXd val, der;
    legendre_basis(k, volume_rule.points.col(0), val, der);
    vol_vals = val;
    vol_ref_grads[0] = der;
  } else {
    volume_rule = triangle_rule(qdeg);
    dubiner_basis(k, volume_rule.points, vol_vals, vol_ref_grads[0], vol_ref_grads[1]);
    edge_rule = gauss_legendre_unit(k + 2);
  }

  geometry.resize(m.num_elements());
  for (int e = 0; e < m.num_elements(); ++e) {
    ElementGeometry& g = geometry[e];
    if (m.dimension == 1) {
      g.v0 = m.vertices[m.elements[e].v[0]];
      g.detJ = m.elements[e].measure;
    } else {
      const Eigen::Vector2d &p0 = m.vertices[m.elements[e].v[0]],
                            &p1 = m.vertices[m.elements[e].v[1]],
                            &p2 = m.vertices[m.elements[e].v[2]];
      g.v0 = p0;
      g.J.col(0) = p1 - p0;
      g.J.col(1) = p2 - p0;
      g.detJ = std::abs(g.J.determinant());
      g.Jinv = g.J.inverse();
    }
  }

  const auto make_traces = [&](const Edge& edge) {
    EdgeTraces t;
    if (m.dimension == 1) {
      t.points.resize(1, 1);
      t.points(0, 0) = edge.p0.x();
      t.weights = Eigen::VectorXd::Ones(1);
    } else {
      const int q = edge_rule.size();
      t.points.resize(q, 2);
      for (int i = 0; i < q; ++i)
        t.points.row(i) =
            edge.p0 + edge_rule.points(i, 0) * (edge.p1 - edge.p0);
      t.weights = edge_rule.weights * edge.size;
    }
    t.plus_vals = basis_at(edge.plus_element, t.points);
    if (edge.interior) t.minus_vals = basis_at(edge.minus_element, t.points);
    return t;
  };
  interior_traces.reserve(m.interior_edges.size());
  for (const Edge& e : m.interior_edges) interior_traces.push_back(make_traces(e));
  boundary_traces.reserve(m.boundary_edges.size());
  for (const Edge& e : m.boundary_edges) boundary_traces.push_back(make_traces(e));
}

Eigen::MatrixXd DGSpace::physical_points(int e) const {
  const ElementGeometry& g = geometry[e];
  const int q = volume_rule.size();
  Eigen::MatrixXd pts(q, mesh->dimension);
  if (mesh->dimension == 1) {
    for (int i = 0; i < q; ++i)
      pts(i, 0) = g.v0.x() + volume_rule.points(i, 0) * g.detJ;
  } else {
    for (int i = 0; i < q; ++i) {
      const Eigen::Vector2d x =
          g.v0 + g.J * Eigen::Vector2d(volume_rule.points(i, 0),
                                       volume_rule.points(i, 1));
      pts.row(i) = x;
    }
  }
  return pts;
}

Eigen::VectorXd DGSpace::physical_weights(int e) const {
  return volume_rule.weights * geometry[e].detJ;
}

Eigen::MatrixXd DGSpace::grad_table(int e, int coordinate) const {
  const ElementGeometry& g = geometry[e];
  if (mesh->dimension == 1) return vol_ref_grads[0] / g.detJ;
  // grad_x phi = Jinv^T grad_ref phi
  return vol_ref_grads[0] * g.Jinv(0, coordinate) +
         vol_ref_grads[1] * g.Jinv(1, coordinate);
}

Eigen::MatrixXd DGSpace::ref_coords(int e, const Eigen::MatrixXd& pts) const {
  const ElementGeometry& g = geometry[e];
  Eigen::MatrixXd r(pts.rows(), mesh->dimension);
  if (mesh->dimension == 1) {
    for (int i = 0; i < pts.rows(); ++i) r(i, 0) = (pts(i, 0) - g.v0.x()) / g.detJ;
  } else {
    for (int i = 0; i < pts.rows(); ++i) {
      const Eigen::Vector2d t =
          g.Jinv * (Eigen::Vector2d(pts(i, 0), pts(i, 1)) - g.v0);
      r.row(i) = t;
    }
  }
  return r;
}

Eigen::MatrixXd DGSpace::basis_at(int e, const Eigen::MatrixXd& pts) const {
  const Eigen::MatrixXd r = ref_coords(e, pts);
  Eigen::MatrixXd val, d1, d2;
  if (mesh->dimension == 1) {
    legendre_basis(degree, r.col(0), val, d1);
  } else {
    dubiner_basis(degree, r, val, d1, d2);
  }
  return val;
}

std::array<Eigen::MatrixXd, 2> DGSpace::basis_grad_at(int e,
                                                      const Eigen::MatrixXd& pts) const {
  const Eigen::MatrixXd r = ref_coords(e, pts);
  const ElementGeometry& g = geometry[e];
  Eigen::MatrixXd val, d1, d2;
  if (mesh->dimension == 1) {
    legendre_basis(degree, r.col(0), val, d1);
    return {d1 / g.detJ, Eigen::MatrixXd()};
  }
  dubiner_basis(degree, r, val, d1, d2);
  return {d1 * g.Jinv(0, 0) + d2 * g.Jinv(1, 0),
          d1 * g.Jinv(0, 1) + d2 * g.Jinv(1, 1)};
}

Eigen::VectorXd DGSpace::mass_diagonal() const {
  Eigen::VectorXd d(dim);
  for (int e = 0; e < mesh->num_elements(); ++e)
    d.segment(e * local_dim, local_dim).setConstant(geometry[e].detJ);
  return d;
}

DGFunction project_local_l2(const DGSpace& space, const ScalarFn& f) {
  DGFunction v(space, 1);
  const int m = space.local_dim;
  for (int e = 0; e < space.mesh->num_elements(); ++e) {
    const Eigen::MatrixXd pts = space.physical_points(e);
    Eigen::VectorXd fv(pts.rows());
    for (int q = 0; q < pts.rows(); ++q)
      fv[q] = f(space.mesh->dimension == 1
                    ? Eigen::Vector2d(pts(q, 0), 0.0)
                    : Eigen::Vector2d(pts(q, 0), pts(q, 1)));
    // Orthonormal reference basis: mass = detJ * I, so the reference-weighted
    // moments are already the coefficients.
    v.coeffs.segment(e * m, m) =
        space.vol_vals.transpose() * (space.volume_rule.weights.array() * fv.array()).matrix();
  }
  return v;
}

DGFunction project_local_l2(
    const DGSpace& space,
    const std::function<Eigen::VectorXd(const Eigen::Vector2d&)>& f, int components) {
  DGFunction v(space, components);
  const int m = space.local_dim;
  for (int e = 0; e < space.mesh->num_elements(); ++e) {
    const Eigen::MatrixXd pts = space.physical_points(e);
    Eigen::MatrixXd fv(pts.rows(), components);
    for (int q = 0; q < pts.rows(); ++q) {
      const Eigen::Vector2d x = space.mesh->dimension == 1
                                    ? Eigen::Vector2d(pts(q, 0), 0.0)
                                    : Eigen::Vector2d(pts(q, 0), pts(q, 1));
      fv.row(q) = f(x).transpose();
    }
    for (int c = 0; c < components; ++c)
      v.coeffs.segment(c * space.dim + e * m, m) =
          space.vol_vals.transpose() *
          (space.volume_rule.weights.array() * fv.col(c).array()).matrix();
  }
  return v;
}

Eigen::VectorXd evaluate(const DGFunction& v, int element_id,
                         const Eigen::Vector2d& local_point) {
  const DGSpace& s = *v.space;
  if (element_id < 0 || element_id >= s.mesh->num_elements())
    throw std::out_of_range("evaluate: element id out of range");
  Eigen::MatrixXd val, d1, d2;
  if (s.mesh->dimension == 1) {
    Eigen::VectorXd t(1);
    t[0] = local_point.x();
    legendre_basis(s.degree, t, val, d1);
  } else {
    Eigen::MatrixXd t(1, 2);
    t << local_point.x(), local_point.y();
    dubiner_basis(s.degree, t, val, d1, d2);
  }
  Eigen::VectorXd out(v.components);
  for (int c = 0; c < v.components; ++c)
    out[c] = val.row(0).dot(v.coeffs.segment(c * s.dim + element_id * s.local_dim,
                                             s.local_dim));
  return out;
}

namespace {

void require_p(double p) {
  if (!(p > 1.0)) throw std::invalid_argument("norm: p must be > 1");
}

Eigen::Vector2d as_point(const Eigen::MatrixXd& pts, int q, int dim) {
  return dim == 1 ? Eigen::Vector2d(pts(q, 0), 0.0)
                  : Eigen::Vector2d(pts(q, 0), pts(q, 1));
}

}  // namespace

double lp_norm(const DGFunction& v, double p) {
  require_p(p);
  const DGSpace& s = *v.space;
  const int m = s.local_dim;
  double acc = 0.0;
  for (int e = 0; e < s.mesh->num_elements(); ++e) {
    const Eigen::VectorXd w = s.physical_weights(e);
    Eigen::ArrayXd norm2 = Eigen::ArrayXd::Zero(w.size());
    for (int c = 0; c < v.components; ++c) {
      const Eigen::VectorXd vals =
          s.vol_vals * v.coeffs.segment(c * s.dim + e * m, m);
      norm2 += vals.array().square();
    }
    acc += (w.array() * norm2.pow(p / 2.0)).sum();
  }
  return std::pow(acc, 1.0 / p);
}

double lp_error(const DGFunction& v, const ScalarFn& f_exact, double p) {
  require_p(p);
  const DGSpace& s = *v.space;
  const int m = s.local_dim;
  double acc = 0.0;
  for (int e = 0; e < s.mesh->num_elements(); ++e) {
    const Eigen::MatrixXd pts = s.physical_points(e);
    const Eigen::VectorXd w = s.physical_weights(e);
    const Eigen::VectorXd vals = s.vol_vals * v.coeffs.segment(e * m, m);
    for (int q = 0; q < w.size(); ++q) {
      const double diff = vals[q] - f_exact(as_point(pts, q, s.mesh->dimension));
      acc += w[q] * std::pow(std::abs(diff), p);
    }
  }
  return std::pow(acc, 1.0 / p);
}

double lp_error(const DGFunction& v, const VectorFn& f_exact, double p) {
  require_p(p);
  const DGSpace& s = *v.space;
  const int m = s.local_dim;
  const int d = s.mesh->dimension;
  double acc = 0.0;
  for (int e = 0; e < s.mesh->num_elements(); ++e) {
    const Eigen::MatrixXd pts = s.physical_points(e);
    const Eigen::VectorXd w = s.physical_weights(e);
    std::array<Eigen::VectorXd, 2> vals;
    for (int c = 0; c < v.components; ++c)
      vals[c] = s.vol_vals * v.coeffs.segment(c * s.dim + e * m, m);
    for (int q = 0; q < w.size(); ++q) {
      const Eigen::Vector2d ge = f_exact(as_point(pts, q, d));
      double diff2 = 0.0;
      for (int c = 0; c < v.components; ++c) {
        const double dv = vals[c][q] - ge[c];
        diff2 += dv * dv;
      }
      acc += w[q] * std::pow(diff2, p / 2.0);
    }
  }
  return std::pow(acc, 1.0 / p);
}

namespace {

double piecewise_gradient_lp(const DGFunction& v, double p) {
  const DGSpace& s = *v.space;
  const int m = s.local_dim;
  const int d = s.mesh->dimension;
  double acc = 0.0;
  for (int e = 0; e < s.mesh->num_elements(); ++e) {
    const Eigen::VectorXd w = s.physical_weights(e);
    Eigen::ArrayXd norm2 = Eigen::ArrayXd::Zero(w.size());
    for (int i = 0; i < d; ++i) {
      const Eigen::VectorXd gi = s.grad_table(e, i) * v.coeffs.segment(e * m, m);
      norm2 += gi.array().square();
    }
    acc += (w.array() * norm2.pow(p / 2.0)).sum();
  }
  return std::pow(acc, 1.0 / p);
}

}  // namespace

double broken_w1p_seminorm(const DGFunction& v, double p, bool use_penalty_weights) {
  require_p(p);
  const DGSpace& s = *v.space;
  const int m = s.local_dim;
  double jump_acc = 0.0;
  for (size_t ie = 0; ie < s.mesh->interior_edges.size(); ++ie) {
    const Edge& edge = s.mesh->interior_edges[ie];
    const EdgeTraces& t = s.interior_traces[ie];
    const Eigen::VectorXd jump =
        t.plus_vals * v.coeffs.segment(edge.plus_element * m, m) -
        t.minus_vals * v.coeffs.segment(edge.minus_element * m, m);
    const double gam = use_penalty_weights ? edge.gamma : 1.0;
    const double cw = gam * std::pow(edge.size, 1.0 - p);
    for (int q = 0; q < t.weights.size(); ++q)
      jump_acc += cw * t.weights[q] * std::pow(std::abs(jump[q]), p);
  }
  return piecewise_gradient_lp(v, p) + std::pow(jump_acc, 1.0 / p);
}

double broken_w1p_norm(const DGFunction& v, double p, const ScalarFn& g) {
  require_p(p);
  const DGSpace& s = *v.space;
  const int m = s.local_dim;
  double bnd_acc = 0.0;
  for (size_t be = 0; be < s.mesh->boundary_edges.size(); ++be) {
    const Edge& edge = s.mesh->boundary_edges[be];
    const EdgeTraces& t = s.boundary_traces[be];
    const Eigen::VectorXd vals =
        t.plus_vals * v.coeffs.segment(edge.plus_element * m, m);
    const double cw = edge.gamma * std::pow(edge.size, 1.0 - p);
    for (int q = 0; q < t.weights.size(); ++q) {
      const double diff = vals[q] - g(as_point(t.points, q, s.mesh->dimension));
      bnd_acc += cw * t.weights[q] * std::pow(std::abs(diff), p);
    }
  }
  return broken_w1p_seminorm(v, p, true) + std::pow(bnd_acc, 1.0 / p);
}

void export_coefficients(const DGFunction& v, std::ostream& os) {
  const DGSpace& s = *v.space;
  for (int c = 0; c < v.components; ++c) {
    for (int e = 0; e < s.mesh->num_elements(); ++e) {
      for (int j = 0; j < s.local_dim; ++j) {
        if (v.components > 1) os << c << ' ';
        os << e << ' ' << j << ' '
           << v.coeffs[c * s.dim + e * s.local_dim + j] << '\n';
      }
    }
  }
}

}  // namespace dritz
