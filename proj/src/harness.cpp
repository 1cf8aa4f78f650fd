#include "dritz/harness.hpp"

#include "dritz/mesh.hpp"
#include "dritz/numderiv.hpp"
#include "dritz/poisson_linear.hpp"
#include "dritz/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace dritz {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string sci(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.2e", v);
  return buf;
}

std::string fixed2(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string int_str(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(std::llround(v)));
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': bad number '" + value + "'");
  }
  if (used != value.size())
    throw std::invalid_argument("config key '" + key + "': bad number '" + value + "'");
  return out;
}

int parse_int(const std::string& key, const std::string& value) {
  const double d = parse_double(key, value);
  const int i = static_cast<int>(std::llround(d));
  if (d != static_cast<double>(i))
    throw std::invalid_argument("config key '" + key + "': expected integer");
  return i;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty())
      throw std::invalid_argument("config key '" + key + "': empty list entry");
    out.push_back(parse_int(key, item));
  }
  if (out.empty()) throw std::invalid_argument("config key '" + key + "': empty list");
  return out;
}

const ScalarFn& lookup_scalar(const std::string& name) {
  const auto& reg = function_registry();
  auto it = reg.find(name);
  if (it == reg.end())
    throw std::invalid_argument("unknown registry function '" + name + "'");
  return it->second;
}

VectorFn lookup_gradient(const std::string& name) {
  const auto& reg = gradient_registry();
  auto it = reg.find(name);
  if (it == reg.end()) return nullptr;
  return it->second;
}

double safe_rate(double e1, double e2, double h1, double h2) {
  if (!(e1 > 0.0) || !(e2 > 0.0) || std::isnan(e1) || std::isnan(e2)) return kNaN;
  return compute_rate(e1, e2, h1, h2);
}

// ||grad u - numerical gradient of u_h||_{L^p} for the requested
// reconstruction.  Studies report the central flavor (elementwise part plus
// jump lifting) because that is the field the energy is minimized over; the
// piecewise flavor isolates the elementwise derivative, which is what stalls
// when the lifting is dropped from the scheme.
double gradient_error(const DGSpace& space, const DGFunction& u,
                      const VectorFn& grad_exact, double p, GradientKind kind) {
  if (!grad_exact) return kNaN;
  const OperatorSet ops = assemble_operators(space);
  const auto& D = (kind == GradientKind::Piecewise) ? ops.P : ops.Dc;
  DGFunction gfun(space, space.mesh->dimension);
  for (int i = 0; i < space.mesh->dimension; ++i)
    gfun.component(i) = D[i] * u.coeffs;
  return lp_error(gfun, grad_exact, p);
}

struct ResolvedProblem {
  ScalarFn exact;          // may wrap the FE reference
  VectorFn exact_gradient; // may be null
  ScalarFn forcing;
  ScalarFn boundary;
  ScalarFn initial;        // null = zero start
  bool linear_table1 = false;
};

ResolvedProblem resolve_problem(const StudyConfig& cfg) {
  ResolvedProblem out;
  out.linear_table1 = (cfg.problem == "table1_poisson");
  if (!cfg.forcing.empty()) out.forcing = lookup_scalar(cfg.forcing);
  if (!cfg.boundary.empty()) out.boundary = lookup_scalar(cfg.boundary);
  if (!cfg.exact.empty()) {
    out.exact = lookup_scalar(cfg.exact);
    out.exact_gradient = lookup_gradient(cfg.exact);
  } else if (cfg.dimension == 1) {
    if (cfg.fe_reference_n < 2 * cfg.levels.back())
      throw std::invalid_argument(
          "fe_reference_n must be at least twice the finest level");
    MinimizeOptions ropts;
    ropts.gtol = 1e-8;
    ropts.maxiter = 100000;
    auto ref = std::make_shared<FEReference>(
        fe_reference(cfg.p, out.forcing, out.boundary, cfg.fe_reference_n, ropts));
    out.exact = [ref](const Eigen::Vector2d& x) { return ref->value(x(0)); };
    out.exact_gradient = [ref](const Eigen::Vector2d& x) {
      return Eigen::Vector2d{ref->derivative(x(0)), 0.0};
    };
  } else {
    throw std::invalid_argument("no exact solution and no 1D reference available");
  }
  if (cfg.initial_guess != "zero") out.initial = lookup_scalar(cfg.initial_guess);
  return out;
}

struct LevelResult {
  DGFunction u;
  TableRow row;
};

LevelResult run_level(const StudyConfig& cfg, const ResolvedProblem& prob,
                      const DGSpace& space) {
  LevelResult out;
  if (prob.linear_table1) {
    const LinearScheme scheme =
        assemble(SchemeKind::PW, space, prob.forcing, prob.boundary);
    out.u = solve(scheme);
    out.row.iterations = 0;
    out.row.energy = 0.5 * out.u.coeffs.dot(scheme.A * out.u.coeffs) -
                     scheme.b.dot(out.u.coeffs);
    out.row.penalty = 0.0;
    return out;
  }

  EnergySetup setup;
  setup.space = &space;
  setup.density = plaplace_density(cfg.p, prob.forcing);
  setup.kind = cfg.kind;
  setup.boundary_g = prob.boundary;
  setup.penalty_p = cfg.p;
  const DiscreteEnergy energy(setup);

  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(space.dim);
  if (prob.initial) x0 = project_local_l2(space, prob.initial).coeffs;

  MinimizeOptions opts;
  opts.gtol = cfg.optimizer_gtol;
  opts.maxiter = cfg.optimizer_maxiter;
  opts.memory = (cfg.optimizer_memory == 0) ? space.dim : cfg.optimizer_memory;
  opts.c1 = cfg.optimizer_c1;
  opts.c2 = cfg.optimizer_c2;

  const Objective obj = [&energy](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
    grad = energy.gradient(x);
    return energy.value(x);
  };
  const MinimizeResult res = minimize(obj, x0, opts);

  out.u = DGFunction(space);
  out.u.coeffs = res.x;
  out.row.iterations = res.iterations;
  out.row.energy = res.energy;
  out.row.penalty = energy.penalty(res.x);
  if (res.termination == Termination::LineSearchFailure)
    out.row.note = "line_search_failure";
  else if (res.termination == Termination::MaxIterations)
    out.row.note = "max_iterations";
  return out;
}

Mesh build_level_mesh(const StudyConfig& cfg, int n) {
  if (cfg.dimension == 1) return build_interval_mesh(n, 0.0, 1.0, cfg.gamma);
  const std::array<double, 2> origin =
      (cfg.problem == "table1_poisson") ? std::array<double, 2>{-0.5, -0.5}
                                        : std::array<double, 2>{0.0, 0.0};
  return build_unit_square_tri_mesh(n, cfg.gamma, origin);
}

void validate(const StudyConfig& cfg) {
  if (cfg.p <= 1.0) throw std::invalid_argument("config: p must exceed 1");
  if (cfg.gamma < 0.0) throw std::invalid_argument("config: gamma must be >= 0");
  if (cfg.degree < 0) throw std::invalid_argument("config: degree must be >= 0");
  if (cfg.dimension != 1 && cfg.dimension != 2)
    throw std::invalid_argument("config: dimension must be 1 or 2");
  if (cfg.levels.empty()) throw std::invalid_argument("config: levels required");
  for (std::size_t i = 0; i < cfg.levels.size(); ++i) {
    if (cfg.levels[i] < 1)
      throw std::invalid_argument("config: levels must be positive");
    if (i > 0 && cfg.levels[i] <= cfg.levels[i - 1])
      throw std::invalid_argument("config: levels must be strictly increasing");
  }
  if (cfg.forcing.empty()) throw std::invalid_argument("config: forcing required");
  if (cfg.boundary.empty()) throw std::invalid_argument("config: boundary required");
}

}  // namespace

const std::map<std::string, ScalarFn>& function_registry() {
  static const std::map<std::string, ScalarFn> reg = [] {
    std::map<std::string, ScalarFn> r;
    r["zero"] = [](const Eigen::Vector2d&) { return 0.0; };
    r["one"] = [](const Eigen::Vector2d&) { return 1.0; };
    r["x"] = [](const Eigen::Vector2d& x) { return x(0); };
    r["half_x"] = [](const Eigen::Vector2d& x) { return 0.5 * x(0); };
    r["x_cubed"] = [](const Eigen::Vector2d& x) { return x(0) * x(0) * x(0); };
    r["sin_pi_x"] = [](const Eigen::Vector2d& x) { return std::sin(kPi * x(0)); };
    r["exp_x_plus_y"] = [](const Eigen::Vector2d& x) {
      return std::exp(x(0) + x(1));
    };
    r["square_bubble"] = [](const Eigen::Vector2d& x) {
      return (0.25 - x(0) * x(0)) * (0.25 - x(1) * x(1));
    };
    r["forcing_test1"] = [](const Eigen::Vector2d& x) {
      return -9.0 * std::sqrt(3.0) * x(0) * x(0);
    };
    r["forcing_test2"] = [](const Eigen::Vector2d& x) {
      const double c = std::abs(kPi * std::cos(kPi * x(0)));
      if (c == 0.0) return 0.0;  // removable only off the quadrature set
      return 0.5 * kPi * kPi * std::sin(kPi * x(0)) / std::sqrt(c);
    };
    r["forcing_test3"] = [](const Eigen::Vector2d& x) {
      const double d = 100.0 * x(0) * x(0) + 1.0;
      return 2000.0 * x(0) / (d * d);
    };
    r["forcing_test4"] = [](const Eigen::Vector2d& x) {
      return -3.0 * std::pow(2.0, 0.25) * std::exp(1.5 * (x(0) + x(1)));
    };
    r["forcing_table1"] = [](const Eigen::Vector2d& x) {
      return 2.0 * (0.25 - x(0) * x(0)) + 2.0 * (0.25 - x(1) * x(1));
    };
    r["forcing_sin_poisson"] = [](const Eigen::Vector2d& x) {
      return kPi * kPi * std::sin(kPi * x(0));
    };
    return r;
  }();
  return reg;
}

const std::map<std::string, VectorFn>& gradient_registry() {
  static const std::map<std::string, VectorFn> reg = [] {
    std::map<std::string, VectorFn> r;
    r["zero"] = [](const Eigen::Vector2d&) { return Eigen::Vector2d{0.0, 0.0}; };
    r["one"] = [](const Eigen::Vector2d&) { return Eigen::Vector2d{0.0, 0.0}; };
    r["x"] = [](const Eigen::Vector2d&) { return Eigen::Vector2d{1.0, 0.0}; };
    r["half_x"] = [](const Eigen::Vector2d&) { return Eigen::Vector2d{0.5, 0.0}; };
    r["x_cubed"] = [](const Eigen::Vector2d& x) {
      return Eigen::Vector2d{3.0 * x(0) * x(0), 0.0};
    };
    r["sin_pi_x"] = [](const Eigen::Vector2d& x) {
      return Eigen::Vector2d{kPi * std::cos(kPi * x(0)), 0.0};
    };
    r["exp_x_plus_y"] = [](const Eigen::Vector2d& x) {
      const double e = std::exp(x(0) + x(1));
      return Eigen::Vector2d{e, e};
    };
    r["square_bubble"] = [](const Eigen::Vector2d& x) {
      return Eigen::Vector2d{-2.0 * x(0) * (0.25 - x(1) * x(1)),
                             -2.0 * x(1) * (0.25 - x(0) * x(0))};
    };
    return r;
  }();
  return reg;
}

StudyConfig preset_config(const std::string& problem) {
  StudyConfig cfg;
  cfg.problem = problem;
  if (problem == "test1_p2.5") {
    cfg.dimension = 1;
    cfg.p = 2.5;
    cfg.gamma = 100.0;
    cfg.degree = 1;
    cfg.levels = {10, 20, 40, 80, 160, 320};
    cfg.exact = "x_cubed";
    cfg.forcing = "forcing_test1";
    cfg.boundary = "x";
  } else if (problem == "test2_p1.5") {
    cfg.dimension = 1;
    cfg.p = 1.5;
    cfg.gamma = 10.0;
    cfg.degree = 1;
    cfg.levels = {10, 20, 40, 80, 160, 320};
    cfg.exact = "sin_pi_x";
    cfg.forcing = "forcing_test2";
    cfg.boundary = "zero";
  } else if (problem == "test3_p8.3") {
    cfg.dimension = 1;
    cfg.p = 8.3;
    cfg.gamma = 10.0;
    cfg.degree = 1;
    cfg.levels = {10, 20, 40, 80, 160, 320};
    cfg.exact = "";  // compared against the conforming reference
    cfg.forcing = "forcing_test3";
    cfg.boundary = "half_x";
    cfg.initial_guess = "half_x";
    cfg.fe_reference_n = 640;
  } else if (problem == "test4_2d_p2.5") {
    cfg.dimension = 2;
    cfg.p = 2.5;
    cfg.gamma = 100.0;
    cfg.degree = 1;
    cfg.levels = {4, 8, 16, 32};
    cfg.exact = "exp_x_plus_y";
    cfg.forcing = "forcing_test4";
    cfg.boundary = "exp_x_plus_y";
  } else if (problem == "table1_poisson") {
    cfg.dimension = 2;
    cfg.p = 2.0;
    cfg.gamma = 10.0;
    cfg.degree = 2;
    cfg.levels = {4, 8, 16, 32, 64};
    cfg.exact = "square_bubble";
    cfg.forcing = "forcing_table1";
    cfg.boundary = "zero";
  } else if (problem == "custom") {
    cfg.dimension = 1;
    cfg.p = 2.0;
    cfg.gamma = 10.0;
    cfg.degree = 1;
    cfg.levels = {};
  } else {
    throw std::invalid_argument("unknown problem id '" + problem + "'");
  }
  return cfg;
}

StudyConfig parse_config(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  while (std::getline(in, line)) {
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line is not 'key = value': " + stripped);
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) throw std::invalid_argument("config line has empty key");
    for (const auto& e : entries)
      if (e.first == key)
        throw std::invalid_argument("duplicate config key '" + key + "'");
    entries.emplace_back(key, value);
  }

  std::string problem;
  for (const auto& e : entries)
    if (e.first == "problem") problem = e.second;
  if (problem.empty())
    throw std::invalid_argument("config: 'problem' key is required");

  StudyConfig cfg = preset_config(problem);
  const bool custom = (problem == "custom");
  for (const auto& [key, value] : entries) {
    if (key == "problem") {
      continue;
    } else if (key == "dimension") {
      const int dim = parse_int(key, value);
      if (!custom && dim != cfg.dimension)
        throw std::invalid_argument("config: dimension is fixed by this problem");
      cfg.dimension = dim;
    } else if (key == "p") {
      cfg.p = parse_double(key, value);
    } else if (key == "gamma") {
      cfg.gamma = parse_double(key, value);
    } else if (key == "degree") {
      cfg.degree = parse_int(key, value);
    } else if (key == "levels") {
      cfg.levels = parse_int_list(key, value);
    } else if (key == "gradient_kind") {
      if (value == "dgfe_central")
        cfg.kind = GradientKind::DgFeCentral;
      else if (value == "piecewise")
        cfg.kind = GradientKind::Piecewise;
      else if (value == "piecewise_plus_lifting")
        cfg.kind = GradientKind::PiecewisePlusLifting;
      else
        throw std::invalid_argument("config: unknown gradient_kind '" + value + "'");
    } else if (key == "optimizer_gtol") {
      cfg.optimizer_gtol = parse_double(key, value);
    } else if (key == "optimizer_maxiter") {
      cfg.optimizer_maxiter = parse_int(key, value);
    } else if (key == "optimizer_memory") {
      cfg.optimizer_memory = (value == "dense") ? 0 : parse_int(key, value);
    } else if (key == "optimizer_c1") {
      cfg.optimizer_c1 = parse_double(key, value);
    } else if (key == "optimizer_c2") {
      cfg.optimizer_c2 = parse_double(key, value);
    } else if (key == "initial_guess") {
      if (value != "zero") lookup_scalar(value);  // fail fast on unknown names
      cfg.initial_guess = value;
    } else if (key == "exact") {
      lookup_scalar(value);
      cfg.exact = value;
    } else if (key == "forcing") {
      lookup_scalar(value);
      cfg.forcing = value;
    } else if (key == "boundary") {
      lookup_scalar(value);
      cfg.boundary = value;
    } else if (key == "fe_reference_n") {
      cfg.fe_reference_n = parse_int(key, value);
    } else if (key == "out") {
      cfg.out = value;
    } else {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
  validate(cfg);
  return cfg;
}

StudyConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  return parse_config(in);
}

double compute_rate(double e1, double e2, double h1, double h2) {
  if (!(e1 > 0.0) || !(e2 > 0.0) || !(h1 > 0.0) || !(h2 > 0.0) || h1 == h2)
    throw std::invalid_argument("compute_rate: needs positive errors and h1 != h2");
  return std::log(e1 / e2) / std::log(h1 / h2);
}

ConvergenceTable run_study(const StudyConfig& cfg) {
  validate(cfg);
  const ResolvedProblem prob = resolve_problem(cfg);

  ConvergenceTable table;
  for (std::size_t li = 0; li < cfg.levels.size(); ++li) {
    const int n = cfg.levels[li];
    const Mesh mesh = build_level_mesh(cfg, n);
    const DGSpace space(mesh, cfg.degree);
    LevelResult lvl = run_level(cfg, prob, space);
    lvl.row.inv_h = n;
    const double p_err = prob.linear_table1 ? 2.0 : cfg.p;
    lvl.row.lp_error = prob.exact ? lp_error(lvl.u, prob.exact, p_err) : kNaN;
    lvl.row.w1p_error = gradient_error(space, lvl.u, prob.exact_gradient, p_err,
                                       GradientKind::DgFeCentral);
    if (li == 0) {
      lvl.row.lp_rate = kNaN;
      lvl.row.w1p_rate = kNaN;
    } else {
      const TableRow& prev = table.rows.back();
      lvl.row.lp_rate = safe_rate(prev.lp_error, lvl.row.lp_error, 1.0 / prev.inv_h,
                                  1.0 / lvl.row.inv_h);
      lvl.row.w1p_rate = safe_rate(prev.w1p_error, lvl.row.w1p_error,
                                   1.0 / prev.inv_h, 1.0 / lvl.row.inv_h);
    }
    table.rows.push_back(std::move(lvl.row));
  }
  return table;
}

std::string emit_table(const ConvergenceTable& table, TableFormat format) {
  if (table.rows.empty()) throw std::invalid_argument("emit_table: empty table");
  std::string out;
  if (format == TableFormat::Csv) {
    out += "inv_h,Lp_error,Lp_rate,W1p_error,W1p_rate,iterations\n";
    for (const TableRow& r : table.rows) {
      out += int_str(r.inv_h) + ',' + sci(r.lp_error) + ',' + fixed2(r.lp_rate) +
             ',' + sci(r.w1p_error) + ',' + fixed2(r.w1p_rate) + ',' +
             std::to_string(r.iterations) + '\n';
    }
    for (const TableRow& r : table.rows)
      if (!r.note.empty())
        out += "# " + int_str(r.inv_h) + ": " + r.note + '\n';
  } else {
    out += "| 1/h | Lp error | rate | W1p error | rate | iterations |\n";
    out += "| --- | --- | --- | --- | --- | --- |\n";
    for (const TableRow& r : table.rows) {
      auto cell = [](const std::string& s) { return s.empty() ? "-" : s; };
      out += "| " + int_str(r.inv_h) + " | " + sci(r.lp_error) + " | " +
             cell(fixed2(r.lp_rate)) + " | " + sci(r.w1p_error) + " | " +
             cell(fixed2(r.w1p_rate)) + " | " + std::to_string(r.iterations) +
             " |\n";
    }
    for (const TableRow& r : table.rows)
      if (!r.note.empty()) out += "footnote " + int_str(r.inv_h) + ": " + r.note + '\n';
  }
  return out;
}

double FEReference::value(double x) const {
  const double h = (b - a) / n;
  const double t = std::min(std::max((x - a) / h, 0.0), static_cast<double>(n));
  const int j = std::min(static_cast<int>(t), n - 1);
  const double s = t - j;
  return (1.0 - s) * values(j) + s * values(j + 1);
}

double FEReference::derivative(double x) const {
  const double h = (b - a) / n;
  const double t = std::min(std::max((x - a) / h, 0.0), static_cast<double>(n));
  const int j = std::min(static_cast<int>(t), n - 1);
  return (values(j + 1) - values(j)) / h;
}

FEReference fe_reference(double p, const ScalarFn& F, const ScalarFn& g,
                         int n_fine, const MinimizeOptions& options) {
  if (n_fine < 2) throw std::invalid_argument("fe_reference: n_fine must be >= 2");
  if (p <= 1.0) throw std::invalid_argument("fe_reference: p must exceed 1");
  const int n = n_fine;
  const double h = 1.0 / n;
  const QuadratureRule rule = gauss_legendre_unit(4);
  const int nq = static_cast<int>(rule.weights.size());

  auto eval_g = [&g](double x) {
    return g ? g(Eigen::Vector2d{x, 0.0}) : 0.0;
  };
  const double g0 = eval_g(0.0);
  const double g1 = eval_g(1.0);

  // Nodal load L_a = int F phi_a, assembled once.
  Eigen::VectorXd L = Eigen::VectorXd::Zero(n + 1);
  if (F) {
    for (int j = 0; j < n; ++j)
      for (int q = 0; q < nq; ++q) {
        const double t = rule.points(q, 0);
        const double x = (j + t) * h;
        const double w = h * rule.weights(q) * F(Eigen::Vector2d{x, 0.0});
        L(j) += w * (1.0 - t);
        L(j + 1) += w * t;
      }
  }

  // Unknowns are the interior nodal values.
  const int dim = n - 1;
  auto to_full = [&](const Eigen::VectorXd& z) {
    Eigen::VectorXd v(n + 1);
    v(0) = g0;
    v.segment(1, dim) = z;
    v(n) = g1;
    return v;
  };
  const Objective obj = [&](const Eigen::VectorXd& z, Eigen::VectorXd& grad) {
    const Eigen::VectorXd v = to_full(z);
    double E = -L.dot(v);
    Eigen::VectorXd gfull = -L;
    for (int j = 0; j < n; ++j) {
      const double s = (v(j + 1) - v(j)) / h;
      E += h / p * std::pow(std::abs(s), p);
      const double ds = (s == 0.0) ? 0.0 : std::pow(std::abs(s), p - 2.0) * s;
      gfull(j) -= ds;
      gfull(j + 1) += ds;
    }
    grad = gfull.segment(1, dim);
    return E;
  };

  Eigen::VectorXd z0(dim);
  for (int j = 1; j < n; ++j) z0(j - 1) = eval_g(j * h);

  MinimizeOptions opts = options;
  opts.memory = std::max(opts.memory, dim);  // dense update for the reference
  const MinimizeResult res = minimize(obj, z0, opts);
  if (res.termination == Termination::LineSearchFailure &&
      res.gradient_norm > 1e-5)
    throw std::runtime_error("fe_reference: minimization failed");

  FEReference ref;
  ref.a = 0.0;
  ref.b = 1.0;
  ref.n = n;
  ref.values = to_full(res.x);
  ref.energy = res.energy;
  return ref;
}

std::string run_table1(const std::vector<double>& gammas,
                       const std::vector<int>& levels, int degree) {
  if (gammas.empty() || levels.empty())
    throw std::invalid_argument("run_table1: gammas and levels required");
  const ScalarFn& F = lookup_scalar("forcing_table1");
  const VectorFn grad_exact = lookup_gradient("square_bubble");

  std::vector<std::vector<double>> errs(gammas.size());
  for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
    for (int n : levels) {
      const Mesh mesh = build_unit_square_tri_mesh(n, gammas[gi], {-0.5, -0.5});
      const DGSpace space(mesh, degree);
      const DGFunction u = solve(assemble(SchemeKind::PW, space, F, nullptr));
      errs[gi].push_back(
          gradient_error(space, u, grad_exact, 2.0, GradientKind::Piecewise));
    }
  }

  std::string out = "inv_h";
  for (double gamma : gammas) {
    std::string gs = int_str(gamma);
    if (std::llround(gamma) != gamma) gs = sci(gamma);
    out += ",h1_error_gamma" + gs + ",h1_rate_gamma" + gs;
  }
  out += '\n';
  for (std::size_t li = 0; li < levels.size(); ++li) {
    out += int_str(levels[li]);
    for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
      out += ',' + sci(errs[gi][li]);
      out += ',';
      if (li > 0)
        out += fixed2(safe_rate(errs[gi][li - 1], errs[gi][li],
                                1.0 / levels[li - 1], 1.0 / levels[li]));
    }
    out += '\n';
  }
  return out;
}

std::string plot_data(const StudyConfig& cfg) {
  validate(cfg);
  const ResolvedProblem prob = resolve_problem(cfg);
  const int n = cfg.levels.back();
  const Mesh mesh = build_level_mesh(cfg, n);
  const DGSpace space(mesh, cfg.degree);
  const LevelResult lvl = run_level(cfg, prob, space);

  std::ostringstream os;
  os.precision(12);
  if (cfg.dimension == 1) {
    os << "x,u_h,u_exact\n";
    const int samples = 8;
    for (int t = 0; t < mesh.num_elements(); ++t) {
      for (int s = 0; s <= samples; ++s) {
        const Eigen::Vector2d ref{static_cast<double>(s) / samples, 0.0};
        const ElementGeometry& geo = space.geometry[t];
        const double x = geo.v0(0) + geo.detJ * ref(0);
        const double uh = evaluate(lvl.u, t, ref)(0);
        const double ue =
            prob.exact ? prob.exact(Eigen::Vector2d{x, 0.0}) : kNaN;
        os << x << ',' << uh << ',' << ue << '\n';
      }
    }
  } else {
    os << "x,y,u_h,u_exact\n";
    for (int t = 0; t < mesh.num_elements(); ++t) {
      const Eigen::MatrixXd pts = space.physical_points(t);
      for (Eigen::Index q = 0; q < pts.rows(); ++q) {
        const Eigen::Vector2d ref = space.volume_rule.points.row(q).transpose();
        const double uh = evaluate(lvl.u, t, ref)(0);
        const Eigen::Vector2d x = pts.row(q).transpose();
        const double ue = prob.exact ? prob.exact(x) : kNaN;
        os << x(0) << ',' << x(1) << ',' << uh << ',' << ue << '\n';
      }
    }
  }
  return os.str();
}

}  // namespace dritz
