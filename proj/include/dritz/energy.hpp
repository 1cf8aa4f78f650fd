#pragma once

#include "dritz/dg_space.hpp"
#include "dritz/numderiv.hpp"

#include <Eigen/Sparse>

#include <functional>
#include <optional>
#include <vector>

namespace dritz {

// Optional constants documenting a coercivity/growth bound
// f(xi, v, x) >= alpha0 (|xi|^p - |v|^r + a0) used only for spot checks.
struct GrowthMetadata {
  double alpha0 = 0.0;
  double alpha1 = 0.0;
  double r = 0.0;
  double q = 0.0;
  double a0 = 0.0;
};

// Integrand f(xi, v, x) with exact partial derivatives in xi and v.
struct Density {
  double p = 2.0;  // growth exponent
  std::function<double(const Eigen::Vector2d&, double, const Eigen::Vector2d&)> eval;
  std::function<Eigen::Vector2d(const Eigen::Vector2d&, double, const Eigen::Vector2d&)>
      grad_xi;
  std::function<double(const Eigen::Vector2d&, double, const Eigen::Vector2d&)> grad_v;
  std::optional<GrowthMetadata> growth;
};

// f = (1/p)(|xi|^2 + eps^2)^{p/2} - F(x) v.  With eps = 0 (the default) this
// is the exact p-Laplace density; grad_xi is taken as 0 at xi = 0, the
// continuous limit for p > 1.
Density plaplace_density(double p, ScalarFn F, double eps = 0.0);

// Which discrete gradient field enters the volume term.
enum class GradientKind {
  DgFeCentral,           // central numerical gradient
  Piecewise,             // elementwise gradient, no jump information
  PiecewisePlusLifting,  // elementwise gradient plus the jump lifting
};

struct EnergySetup {
  const DGSpace* space = nullptr;
  Density density;
  GradientKind kind = GradientKind::DgFeCentral;
  ScalarFn boundary_g;      // null means g = 0
  double penalty_p = 2.0;   // exponent of the jump/boundary penalties
};

// Evaluator with all quadrature samplers precomputed as sparse matrices, so
// repeated value/gradient calls during minimization are sparse mat-vecs plus
// pointwise density evaluations.
class DiscreteEnergy {
 public:
  explicit DiscreteEnergy(EnergySetup setup);

  double value(const Eigen::VectorXd& coeffs) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& coeffs) const;
  // Jump-plus-boundary penalty part of the energy on its own.
  double penalty(const Eigen::VectorXd& coeffs) const;

  const EnergySetup& setup() const { return setup_; }
  int dim() const { return setup_.space->dim; }

 private:
  EnergySetup setup_;
  int d_ = 1;
  SpMat Ev_;               // volume point values
  std::vector<SpMat> S_;   // volume gradient samples per coordinate
  Eigen::VectorXd wvol_;   // physical volume weights
  Eigen::MatrixXd xvol_;   // volume points, one row per sample
  SpMat Jmp_;              // interior jump samples
  Eigen::VectorXd wjmp_;   // edge weights times gamma_e h_e^{1-p}
  SpMat Bnd_;              // boundary trace samples
  Eigen::VectorXd wbnd_;
  Eigen::VectorXd gbnd_;   // boundary data at the sample points
};

double discrete_energy(const EnergySetup& setup, const DGFunction& v);
Eigen::VectorXd discrete_energy_gradient(const EnergySetup& setup, const DGFunction& v);

// Quadratic interior-penalty energy (p = 2): elementwise (1/2)|grad v|^2,
// minus the consistency edge terms [v]{grad v . nu} with boundary jumps taken
// against g, plus (1/2) gamma h^{-1} penalties, minus the load term int F v.
double sipdg_energy(const DGSpace& space, double gamma, const ScalarFn& g,
                    const ScalarFn& F, const DGFunction& v);

}  // namespace dritz
