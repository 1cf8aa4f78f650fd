#pragma once

#include <Eigen/Dense>

#include <functional>
#include <iosfwd>

namespace dritz {

// Combined callback: returns the objective value at x and fills grad.
using Objective =
    std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

struct MinimizeOptions {
  double gtol = 1e-8;      // max-norm gradient tolerance
  int maxiter = 20000;
  int memory = 10;         // curvature pairs; >= dimension switches to a
                           // dense BFGS inverse-Hessian update
  double c1 = 1e-4;        // sufficient-decrease parameter
  double c2 = 0.9;         // curvature parameter
  double initial_step = 1.0;
  std::ostream* trace = nullptr;  // optional per-iteration CSV stream
};

enum class Termination { Converged, MaxIterations, LineSearchFailure };

struct MinimizeResult {
  Eigen::VectorXd x;
  double energy = 0.0;
  double gradient_norm = 0.0;  // max-norm at the final iterate
  int iterations = 0;
  int function_evaluations = 0;
  int gradient_evaluations = 0;
  Termination termination = Termination::Converged;
};

// Quasi-Newton minimization (limited-memory BFGS, or dense BFGS when the
// memory covers the full dimension) with a strong-Wolfe line search and a
// backtracking fallback.
MinimizeResult minimize(const Objective& objective, const Eigen::VectorXd& x0,
                        const MinimizeOptions& options = {});

}  // namespace dritz
