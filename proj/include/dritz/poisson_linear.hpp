#pragma once

#include "dritz/dg_space.hpp"
#include "dritz/numderiv.hpp"

#include <Eigen/Sparse>

namespace dritz {

// Quadratic (p = 2) interior-penalty schemes for the Poisson problem.
enum class SchemeKind { PW, SIPDG, BO, LDG, DWDG };

struct LinearScheme {
  SchemeKind kind = SchemeKind::PW;
  const DGSpace* space = nullptr;
  SpMat A;            // symmetric stiffness-plus-penalty matrix
  Eigen::VectorXd b;  // load vector including boundary data terms
};

// The penalty pairing: sum over interior edges of (gamma_e/h_e) int [u][phi]
// plus the boundary version with the trace itself.  Penalty weights come from
// the per-edge gamma stored on the mesh.
struct JumpOperatorAssembly {
  const DGSpace* space = nullptr;
  SpMat J;
};

JumpOperatorAssembly assemble_jump_operator(const DGSpace& space);

// Load vector of the boundary penalty against data g:
// l(phi) = sum_boundary (gamma_e/h_e) int g phi.
Eigen::VectorXd jump_boundary_load(const DGSpace& space, const ScalarFn& g);

// Assemble the stationarity system of the scheme's quadratic energy.  F is
// the volume load, g the Dirichlet data (null means 0).
LinearScheme assemble(SchemeKind kind, const DGSpace& space, const ScalarFn& F,
                      const ScalarFn& g = nullptr);

// Direct sparse/dense symmetric solve; verifies the relative residual.
DGFunction solve(const LinearScheme& scheme);

// Residual of the scheme at the interpolated exact solution, measured in the
// dual norm induced by the gradient-plus-penalty inner product: with
// r = A P(u_exact) - b and N the PW matrix, returns sqrt(r^T N^{-1} r).
// Stays O(1) for the inconsistent piecewise scheme and decays for the
// consistent ones.
double consistency_residual(SchemeKind kind, const DGSpace& space,
                            const ScalarFn& u_exact, const ScalarFn& F,
                            const ScalarFn& g = nullptr);

}  // namespace dritz
