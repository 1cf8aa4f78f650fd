#pragma once

#include "dritz/mesh.hpp"
#include "dritz/quadrature.hpp"

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <iosfwd>
#include <vector>

namespace dritz {

using ScalarFn = std::function<double(const Eigen::Vector2d&)>;
using VectorFn = std::function<Eigen::Vector2d(const Eigen::Vector2d&)>;

struct ElementGeometry {
  double detJ = 0.0;  // 1D: element length; 2D: |det J| = 2 x area
  Eigen::Matrix2d J = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d Jinv = Eigen::Matrix2d::Identity();
  Eigen::Vector2d v0 = Eigen::Vector2d::Zero();  // first vertex
};

// Precomputed basis traces on one edge's quadrature points.
struct EdgeTraces {
  Eigen::MatrixXd points;      // q x d physical points
  Eigen::VectorXd weights;     // physical weights (1D point edges: {1})
  Eigen::MatrixXd plus_vals;   // q x m basis values from the plus element
  Eigen::MatrixXd minus_vals;  // empty on boundary edges
};

// Broken polynomial space of degree k on a mesh, with an orthonormal
// per-element basis (local mass matrices are detJ x identity) and fixed
// quadrature rules. 1D volume rules always use an even number of Gauss
// points so no node falls on an element midpoint.
struct DGSpace {
  DGSpace(const Mesh& mesh, int degree);

  const Mesh* mesh = nullptr;
  int degree = 0;
  int local_dim = 0;
  int dim = 0;

  QuadratureRule volume_rule;  // on the reference element
  Eigen::MatrixXd vol_vals;    // q x m basis values at volume points
  std::array<Eigen::MatrixXd, 2> vol_ref_grads;  // reference-coordinate tables
  QuadratureRule edge_rule;    // on [0,1]; 2D only

  std::vector<ElementGeometry> geometry;
  std::vector<EdgeTraces> interior_traces;  // parallel to mesh interior_edges
  std::vector<EdgeTraces> boundary_traces;

  Eigen::MatrixXd physical_points(int element) const;   // q x d
  Eigen::VectorXd physical_weights(int element) const;  // q
  // Physical-derivative table d(phi_j)/d(x_i) at the volume points.
  Eigen::MatrixXd grad_table(int element, int coordinate) const;
  Eigen::MatrixXd ref_coords(int element, const Eigen::MatrixXd& pts) const;
  Eigen::MatrixXd basis_at(int element, const Eigen::MatrixXd& pts) const;
  std::array<Eigen::MatrixXd, 2> basis_grad_at(int element,
                                               const Eigen::MatrixXd& pts) const;
  Eigen::VectorXd mass_diagonal() const;
};

// A member of the space (or a vector field over it): coefficients are stored
// component-major, coeffs.segment(c * dim, dim) holding component c.
struct DGFunction {
  const DGSpace* space = nullptr;
  int components = 1;
  Eigen::VectorXd coeffs;

  DGFunction() = default;
  DGFunction(const DGSpace& s, int comps = 1)
      : space(&s), components(comps),
        coeffs(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(comps) * s.dim)) {}
  Eigen::VectorBlock<Eigen::VectorXd> component(int c) {
    return coeffs.segment(c * space->dim, space->dim);
  }
  Eigen::VectorXd component(int c) const {
    return coeffs.segment(c * space->dim, space->dim);
  }
};

// Elementwise L2 projection (exact per-element mass solve with the space's
// quadrature).
DGFunction project_local_l2(const DGSpace& space, const ScalarFn& f);
DGFunction project_local_l2(const DGSpace& space,
                            const std::function<Eigen::VectorXd(const Eigen::Vector2d&)>& f,
                            int components);

// Value(s) at a reference-element point of the given element.
Eigen::VectorXd evaluate(const DGFunction& v, int element_id,
                         const Eigen::Vector2d& local_point);

// (sum_T sum_q w_q |v(x_q)|^p)^{1/p}; vector-valued functions use the
// pointwise Euclidean norm.
double lp_norm(const DGFunction& v, double p);
// Same, for the pointwise difference v - f_exact.
double lp_error(const DGFunction& v, const ScalarFn& f_exact, double p);
// Vector-field difference against an exact gradient field.
double lp_error(const DGFunction& v, const VectorFn& f_exact, double p);

// ||grad v||_Lp + (sum_interior gamma_e h_e^{1-p} int |[v]|^p)^{1/p} with the
// piecewise gradient; with use_penalty_weights off, gamma_e is replaced by 1.
double broken_w1p_seminorm(const DGFunction& v, double p, bool use_penalty_weights);
// seminorm + (sum_boundary gamma_e h_e^{1-p} int |v-g|^p)^{1/p}.
double broken_w1p_norm(const DGFunction& v, double p, const ScalarFn& g);

// Plain-text export: one row per coefficient (element id, local dof index,
// coefficient); vector fields get a leading component column.
void export_coefficients(const DGFunction& v, std::ostream& os);

}  // namespace dritz
