#pragma once

#include "dritz/dg_space.hpp"
#include "dritz/energy.hpp"
#include "dritz/optimizer.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace dritz {

// One convergence study: which problem, on which mesh family, minimized how.
// Parsed from a flat `key = value` config file; unknown keys are rejected.
struct StudyConfig {
  std::string problem = "test1_p2.5";
  int dimension = 1;
  double p = 2.5;
  double gamma = 100.0;
  int degree = 1;
  std::vector<int> levels;
  GradientKind kind = GradientKind::DgFeCentral;
  double optimizer_gtol = 1e-6;
  int optimizer_maxiter = 20000;
  int optimizer_memory = 0;  // 0 = cover the full dimension (dense update)
  double optimizer_c1 = 1e-4;
  double optimizer_c2 = 0.9;
  std::string initial_guess = "zero";  // "zero" or a registry name to project
  std::string exact;     // registry names; required for problem = custom
  std::string forcing;
  std::string boundary;
  int fe_reference_n = 640;
  std::string out;
};

// Built-in problem presets (levels, exponents, data) for the recognized
// problem ids; throws on unknown ids.
StudyConfig preset_config(const std::string& problem);

StudyConfig parse_config(std::istream& in);
StudyConfig parse_config_file(const std::string& path);

struct TableRow {
  double inv_h = 0.0;
  double lp_error = 0.0;
  double lp_rate = 0.0;  // NaN on the first row
  double w1p_error = 0.0;
  double w1p_rate = 0.0;
  int iterations = 0;
  double energy = 0.0;
  double penalty = 0.0;  // jump + boundary penalty part of the energy
  std::string note;      // nonempty on optimizer failure
};

struct ConvergenceTable {
  std::vector<TableRow> rows;
};

// log(e1/e2) / log(h1/h2); all arguments must be positive, h1 != h2.
double compute_rate(double e1, double e2, double h1, double h2);

ConvergenceTable run_study(const StudyConfig& config);

enum class TableFormat { Csv, Markdown };
std::string emit_table(const ConvergenceTable& table, TableFormat format);

// Conforming piecewise-linear reference minimizer of the continuous energy
// on (0,1) with nodal boundary interpolation of g (used when no closed-form
// solution exists).
struct FEReference {
  double a = 0.0;
  double b = 1.0;
  int n = 0;
  Eigen::VectorXd values;  // n+1 nodal values
  double value(double x) const;
  double derivative(double x) const;
  double energy = 0.0;
};

FEReference fe_reference(double p, const ScalarFn& F, const ScalarFn& g,
                         int n_fine, const MinimizeOptions& options = {});

// Named pointwise functions usable from config files (exact solutions,
// forcing terms, boundary data, initial guesses).
const std::map<std::string, ScalarFn>& function_registry();
// Exact gradients, keyed like their scalar counterparts.
const std::map<std::string, VectorFn>& gradient_registry();

// Linear piecewise-gradient scheme study on the translated unit square:
// broken H1 error columns per penalty value.  Returns CSV text.
std::string run_table1(const std::vector<double>& gammas,
                       const std::vector<int>& levels, int degree = 2);

// Solution samples at the finest study level: `x[,y],u_h,u_exact` CSV text.
std::string plot_data(const StudyConfig& config);

}  // namespace dritz
