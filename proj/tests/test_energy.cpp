#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dritz/energy.hpp"
#include "dritz/mesh.hpp"
#include "dritz/poisson_linear.hpp"

#include <cmath>
#include <random>

using namespace dritz;

namespace {

const ScalarFn fn_zero = [](const Eigen::Vector2d&) { return 0.0; };
const ScalarFn fn_one = [](const Eigen::Vector2d&) { return 1.0; };
const ScalarFn fn_x = [](const Eigen::Vector2d& x) { return x(0); };

Eigen::VectorXd random_coeffs(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = dist(rng);
  return v;
}

Eigen::VectorXd fd_gradient(const DiscreteEnergy& energy,
                            const Eigen::VectorXd& x, double h) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    xp(i) = x(i) + h;
    const double fp = energy.value(xp);
    xp(i) = x(i) - h;
    const double fm = energy.value(xp);
    xp(i) = x(i);
    g(i) = (fp - fm) / (2.0 * h);
  }
  return g;
}

EnergySetup make_setup(const DGSpace& space, double p, GradientKind kind,
                       const ScalarFn& F, const ScalarFn& g) {
  EnergySetup setup;
  setup.space = &space;
  setup.density = plaplace_density(p, F);
  setup.kind = kind;
  setup.boundary_g = g;
  setup.penalty_p = p;
  return setup;
}

}  // namespace

TEST_CASE("quadratic density values and derivatives") {
  const Density den = plaplace_density(2.0, nullptr);
  const Eigen::Vector2d xi{3.0, 4.0};
  const Eigen::Vector2d x{0.1, 0.2};
  CHECK(den.eval(xi, 7.0, x) == doctest::Approx(12.5).epsilon(1e-14));
  const Eigen::Vector2d g = den.grad_xi(xi, 7.0, x);
  CHECK(g(0) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(g(1) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(den.grad_v(xi, 7.0, x) == 0.0);
}

TEST_CASE("fractional-exponent density example") {
  const Density den = plaplace_density(2.5, fn_one);
  const Eigen::Vector2d xi{2.0, 0.0};
  const Eigen::Vector2d x{0.3, 0.0};
  CHECK(den.eval(xi, 1.0, x) ==
        doctest::Approx(std::pow(2.0, 2.5) / 2.5 - 1.0).epsilon(1e-12));
  CHECK(den.grad_xi(xi, 1.0, x)(0) ==
        doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-12));
  CHECK(den.grad_v(xi, 1.0, x) == doctest::Approx(-1.0));
}

TEST_CASE("gradient at a vanishing argument is zero") {
  for (double p : {1.5, 2.5, 8.3}) {
    const Density den = plaplace_density(p, nullptr);
    const Eigen::Vector2d zero = Eigen::Vector2d::Zero();
    CHECK(den.grad_xi(zero, 0.3, zero).norm() == 0.0);
  }
}

TEST_CASE("exponents at or below one are rejected") {
  CHECK_THROWS_AS(plaplace_density(1.0, nullptr), std::invalid_argument);
  CHECK_THROWS_AS(plaplace_density(0.5, nullptr), std::invalid_argument);
}

TEST_CASE("density derivatives match finite differences") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (double p : {1.5, 2.0, 2.5, 8.3}) {
    const Density den = plaplace_density(p, [](const Eigen::Vector2d& x) {
      return std::sin(x(0)) + x(1);
    });
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::Vector2d xi{dist(rng), dist(rng)};
      if (xi.norm() < 0.3) xi += Eigen::Vector2d{1.0, 1.0};  // keep off the kink
      const double v = dist(rng);
      const Eigen::Vector2d x{0.25 * dist(rng), 0.25 * dist(rng)};
      const double h = 1e-6;
      for (int i = 0; i < 2; ++i) {
        Eigen::Vector2d e = Eigen::Vector2d::Zero();
        e(i) = h;
        const double fd =
            (den.eval(xi + e, v, x) - den.eval(xi - e, v, x)) / (2.0 * h);
        CHECK(den.grad_xi(xi, v, x)(i) ==
              doctest::Approx(fd).epsilon(1e-6).scale(1.0));
      }
      const double fdv =
          (den.eval(xi, v + h, x) - den.eval(xi, v - h, x)) / (2.0 * h);
      CHECK(den.grad_v(xi, v, x) == doctest::Approx(fdv).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("growth metadata spot check") {
  // f = (1/p)|xi|^p - v with p = 2.5 satisfies
  // f >= a0 (|xi|^p - |v|^r + c) for a0 = 0.4, r = 2, c = -1.5625.
  Density den = plaplace_density(2.5, fn_one);
  den.growth = GrowthMetadata{0.4, 1.0, 2.0, 2.5, -1.5625};
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Vector2d xi{dist(rng), dist(rng)};
    const double v = dist(rng);
    const Eigen::Vector2d x{0.1, 0.1};
    const auto& meta = *den.growth;
    const double bound =
        meta.alpha0 *
        (std::pow(xi.norm(), 2.5) - std::pow(std::abs(v), meta.r) + meta.a0);
    CHECK(den.eval(xi, v, x) >= bound - 1e-12);
  }
}

TEST_CASE("energy of the zero function with zero data is zero") {
  const Mesh mesh = build_interval_mesh(4, 0.0, 1.0, 10.0);
  const DGSpace space(mesh, 1);
  const DGFunction zero(space);
  for (GradientKind kind : {GradientKind::DgFeCentral, GradientKind::Piecewise,
                            GradientKind::PiecewisePlusLifting}) {
    const EnergySetup setup = make_setup(space, 2.5, kind, fn_zero, fn_zero);
    CHECK(discrete_energy(setup, zero) == doctest::Approx(0.0).scale(1.0));
    CHECK(discrete_energy_gradient(setup, zero).cwiseAbs().maxCoeff() <
          1e-14);
  }
}

TEST_CASE("single-element linear function has energy one half") {
  const Mesh mesh = build_interval_mesh(1, 0.0, 1.0, 10.0);
  const DGSpace space(mesh, 1);
  const DGFunction v = project_local_l2(space, fn_x);
  for (GradientKind kind : {GradientKind::DgFeCentral, GradientKind::Piecewise,
                            GradientKind::PiecewisePlusLifting}) {
    const EnergySetup setup = make_setup(space, 2.0, kind, fn_zero, fn_x);
    CHECK(discrete_energy(setup, v) == doctest::Approx(0.5).epsilon(1e-13));
  }
}

TEST_CASE("central and lifting-corrected energies coincide") {
  const Mesh m1 = build_interval_mesh(5, 0.0, 1.0, 10.0);
  const Mesh m2 = build_unit_square_tri_mesh(2, 10.0);
  for (const Mesh* mesh : {&m1, &m2}) {
    for (int k : {0, 1, 2}) {
      const DGSpace space(*mesh, k);
      const EnergySetup central =
          make_setup(space, 2.5, GradientKind::DgFeCentral, fn_one, fn_x);
      const EnergySetup lifted =
          make_setup(space, 2.5, GradientKind::PiecewisePlusLifting, fn_one, fn_x);
      const DiscreteEnergy Ec(central), El(lifted);
      for (unsigned seed = 0; seed < 30; ++seed) {
        DGFunction v(space);
        v.coeffs = random_coeffs(space.dim, 400 + seed);
        const double a = Ec.value(v.coeffs);
        const double b = El.value(v.coeffs);
        CHECK(std::abs(a - b) <= 1e-10 * (1.0 + std::abs(a)));
      }
    }
  }
}

TEST_CASE("plain piecewise energy ignores jump information in the gradient") {
  const Mesh mesh = build_interval_mesh(2, 0.0, 1.0, 0.0);  // no penalty
  const DGSpace space(mesh, 0);
  DGFunction step(space);
  step.coeffs << 0.0, 1.0;
  const EnergySetup pw =
      make_setup(space, 2.0, GradientKind::Piecewise, fn_zero, fn_zero);
  const EnergySetup ct =
      make_setup(space, 2.0, GradientKind::DgFeCentral, fn_zero, fn_zero);
  // piecewise gradient of a step is zero; the numerical gradient is not
  CHECK(discrete_energy(pw, step) == doctest::Approx(0.0).scale(1.0));
  CHECK(discrete_energy(ct, step) > 0.4);
}

TEST_CASE("energy gradients match finite differences") {
  const Mesh m1 = build_interval_mesh(4, 0.0, 1.0, 10.0);
  const Mesh m2 = build_unit_square_tri_mesh(2, 10.0);
  for (const Mesh* mesh : {&m1, &m2}) {
    const DGSpace space(*mesh, 1);
    for (double p : {1.5, 2.0, 2.5, 8.3}) {
      for (GradientKind kind :
           {GradientKind::DgFeCentral, GradientKind::Piecewise,
            GradientKind::PiecewisePlusLifting}) {
        const EnergySetup setup = make_setup(space, p, kind, fn_one, fn_x);
        const DiscreteEnergy energy(setup);
        Eigen::VectorXd x = random_coeffs(space.dim, 900);
        x.array() += 0.5;  // keep gradients away from the p < 2 kink
        const Eigen::VectorXd g = energy.gradient(x);
        const Eigen::VectorXd fd = fd_gradient(energy, x, 1e-6);
        for (Eigen::Index i = 0; i < x.size(); ++i)
          CHECK(g(i) == doctest::Approx(fd(i)).epsilon(1e-5).scale(1.0));
      }
    }
  }
}

TEST_CASE("quadratic energies have affine gradients") {
  const Mesh mesh = build_interval_mesh(4, 0.0, 1.0, 10.0);
  const DGSpace space(mesh, 1);
  const EnergySetup setup =
      make_setup(space, 2.0, GradientKind::DgFeCentral, fn_one, fn_x);
  const DiscreteEnergy energy(setup);
  const Eigen::VectorXd c1 = random_coeffs(space.dim, 21);
  const Eigen::VectorXd c2 = random_coeffs(space.dim, 22);
  const Eigen::VectorXd lhs = energy.gradient(c1 + c2);
  const Eigen::VectorXd rhs = energy.gradient(c1) + energy.gradient(c2) -
                              energy.gradient(Eigen::VectorXd::Zero(space.dim));
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("penalties vanish on conforming data matches") {
  const Mesh mesh = build_interval_mesh(4, 0.0, 1.0, 100.0);
  const DGSpace space(mesh, 1);
  const DGFunction v = project_local_l2(space, fn_x);
  const EnergySetup setup =
      make_setup(space, 2.5, GradientKind::DgFeCentral, fn_zero, fn_x);
  const DiscreteEnergy energy(setup);
  CHECK(energy.penalty(v.coeffs) < 1e-12);
}

TEST_CASE("penalty value of the unit step") {
  const Mesh mesh = build_interval_mesh(2, 0.0, 1.0, 1.0);
  const DGSpace space(mesh, 0);
  DGFunction step(space);
  step.coeffs << 0.0, 1.0;
  const EnergySetup setup =
      make_setup(space, 2.0, GradientKind::Piecewise, fn_zero, fn_zero);
  const DiscreteEnergy energy(setup);
  // interior jump 1 at weight h^{-1} = 2 plus the right boundary mismatch 1
  CHECK(energy.penalty(step.coeffs) == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("energy is midpoint convex along random lines") {
  const Mesh mesh = build_interval_mesh(4, 0.0, 1.0, 10.0);
  const DGSpace space(mesh, 1);
  const EnergySetup setup =
      make_setup(space, 2.5, GradientKind::DgFeCentral, fn_one, fn_x);
  const DiscreteEnergy energy(setup);
  for (unsigned seed = 0; seed < 10; ++seed) {
    const Eigen::VectorXd v = random_coeffs(space.dim, 600 + seed);
    const Eigen::VectorXd w = random_coeffs(space.dim, 700 + seed);
    double samples[5];
    for (int s = 0; s < 5; ++s)
      samples[s] = energy.value(v + (0.25 * s) * w);
    for (int s = 1; s < 4; ++s)
      CHECK(samples[s] <= 0.5 * (samples[s - 1] + samples[s + 1]) + 1e-10);
  }
}

TEST_CASE("interior-penalty quadratic energy examples") {
  const Mesh mesh = build_interval_mesh(1, 0.0, 1.0, 10.0);
  const DGSpace space(mesh, 1);
  const DGFunction zero(space);
  CHECK(sipdg_energy(space, 10.0, fn_zero, fn_zero, zero) ==
        doctest::Approx(0.0).scale(1.0));
  const DGFunction v = project_local_l2(space, fn_x);
  // continuous with matching data: only the volume term remains
  CHECK(sipdg_energy(space, 10.0, fn_x, fn_zero, v) ==
        doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("interior-penalty energy is stationary at the linear solve") {
  const Mesh mesh = build_interval_mesh(8, 0.0, 1.0, 10.0);
  const DGSpace space(mesh, 1);
  const ScalarFn F = [](const Eigen::Vector2d& x) {
    return 9.8696044010893586 * std::sin(3.14159265358979323846 * x(0));
  };
  const LinearScheme scheme = assemble(SchemeKind::SIPDG, space, F, fn_zero);
  const DGFunction u = solve(scheme);
  // finite-difference gradient of the energy at the solution
  const double h = 1e-6;
  double gmax = 0.0;
  DGFunction probe = u;
  for (int i = 0; i < space.dim; ++i) {
    probe.coeffs(i) = u.coeffs(i) + h;
    const double fp = sipdg_energy(space, 10.0, fn_zero, F, probe);
    probe.coeffs(i) = u.coeffs(i) - h;
    const double fm = sipdg_energy(space, 10.0, fn_zero, F, probe);
    probe.coeffs(i) = u.coeffs(i);
    gmax = std::max(gmax, std::abs(fp - fm) / (2.0 * h));
  }
  CHECK(gmax < 1e-8);
}
