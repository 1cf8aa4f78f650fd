#include "dritz/optimizer.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace dritz {

namespace {

struct LinePoint {
  double a = 0.0;    // step length
  double phi = 0.0;  // objective along the ray
  double dphi = 0.0; // directional derivative along the ray
};

struct RayFn {
  const Objective& objective;
  const Eigen::VectorXd& x;
  const Eigen::VectorXd& d;
  int* evals;
  // Scratch for the most recent evaluation, reused by the caller on accept.
  Eigen::VectorXd xa;
  Eigen::VectorXd ga;

  LinePoint operator()(double a) {
    xa = x + a * d;
    const double f = objective(xa, ga);
    ++*evals;
    return {a, f, ga.dot(d)};
  }
};

// Minimizer of the cubic interpolating two value/slope samples; falls back to
// the midpoint when the data is degenerate or the minimizer is not safely
// inside the interval.
double cubic_step(const LinePoint& lo, const LinePoint& hi) {
  const double mid = 0.5 * (lo.a + hi.a);
  const double span = hi.a - lo.a;
  if (span == 0.0) return mid;
  const double d1 = lo.dphi + hi.dphi - 3.0 * (lo.phi - hi.phi) / (lo.a - hi.a);
  const double disc = d1 * d1 - lo.dphi * hi.dphi;
  if (!(disc >= 0.0)) return mid;
  const double d2 = (span >= 0.0 ? 1.0 : -1.0) * std::sqrt(disc);
  const double denom = hi.dphi - lo.dphi + 2.0 * d2;
  if (denom == 0.0) return mid;
  const double a = hi.a - (hi.a - lo.a) * (hi.dphi + d2 - d1) / denom;
  const double margin = 0.1 * std::abs(span);
  const double amin = std::min(lo.a, hi.a) + margin;
  const double amax = std::max(lo.a, hi.a) - margin;
  if (!(a >= amin && a <= amax)) return mid;
  return a;
}

// Strong-Wolfe search (bracket + zoom with cubic interpolation).  Returns
// true and the accepted point through `out`; RayFn retains the matching
// x/gradient pair.
bool wolfe_search(RayFn& ray, const LinePoint& p0, double c1, double c2,
                  double first_trial, LinePoint& out) {
  const double phi0 = p0.phi;
  const double dphi0 = p0.dphi;
  auto armijo = [&](const LinePoint& p) {
    return p.phi <= phi0 + c1 * p.a * dphi0;
  };
  auto curvature = [&](const LinePoint& p) {
    return std::abs(p.dphi) <= -c2 * dphi0;
  };

  auto zoom = [&](LinePoint lo, LinePoint hi) {
    for (int it = 0; it < 30; ++it) {
      LinePoint trial = ray(cubic_step(lo, hi));
      if (!armijo(trial) || trial.phi >= lo.phi) {
        hi = trial;
      } else {
        if (curvature(trial)) {
          out = trial;
          return true;
        }
        if (trial.dphi * (hi.a - lo.a) >= 0.0) hi = lo;
        lo = trial;
      }
      if (std::abs(hi.a - lo.a) < 1e-16 * std::max(1.0, std::abs(lo.a))) break;
    }
    // The bracket collapsed; accept the best sufficient-decrease point seen.
    if (armijo(lo) && lo.a > 0.0) {
      out = ray(lo.a);
      return true;
    }
    return false;
  };

  LinePoint prev{0.0, phi0, dphi0};
  double trial = first_trial;
  for (int it = 0; it < 25; ++it) {
    LinePoint cur = ray(trial);
    if (!std::isfinite(cur.phi)) {  // step overshot into overflow; shrink
      trial *= 0.5;
      continue;
    }
    if (!armijo(cur) || (it > 0 && cur.phi >= prev.phi)) return zoom(prev, cur);
    if (curvature(cur)) {
      out = cur;
      return true;
    }
    if (cur.dphi >= 0.0) return zoom(cur, prev);
    prev = cur;
    trial = std::min(2.0 * trial, 1e10);
  }
  return false;
}

// Armijo-only halving fallback for steps where the curvature condition is
// unattainable (e.g. near gradient kinks of p < 2 energies).
bool backtracking_search(RayFn& ray, const LinePoint& p0, double c1,
                         LinePoint& out) {
  const double eps = std::numeric_limits<double>::epsilon();
  double a = 1.0;
  for (int it = 0; it < 60; ++it) {
    // Once the required decrease falls below the rounding resolution of the
    // objective, the test can only pass through round-off; stop searching.
    if (c1 * a * std::abs(p0.dphi) <= 4.0 * eps * std::abs(p0.phi)) return false;
    LinePoint cur = ray(a);
    if (std::isfinite(cur.phi) && cur.phi <= p0.phi + c1 * a * p0.dphi) {
      out = cur;
      return true;
    }
    a *= 0.5;
  }
  return false;
}

}  // namespace

MinimizeResult minimize(const Objective& objective, const Eigen::VectorXd& x0,
                        const MinimizeOptions& options) {
  if (options.gtol <= 0.0 || options.maxiter < 0 || options.memory < 1 ||
      options.c1 <= 0.0 || options.c2 <= options.c1 || options.c2 >= 1.0)
    throw std::invalid_argument("minimize: invalid options");

  const int n = static_cast<int>(x0.size());
  MinimizeResult res;
  res.x = x0;

  Eigen::VectorXd g(n);
  double f = objective(res.x, g);
  ++res.function_evaluations;
  if (!std::isfinite(f) || !g.allFinite())
    throw std::invalid_argument("minimize: objective not finite at start");

  const bool dense = options.memory >= n;
  Eigen::MatrixXd H;  // dense inverse-Hessian approximation
  if (dense) H = Eigen::MatrixXd::Identity(n, n);
  std::deque<Eigen::VectorXd> hist_s, hist_y;
  std::deque<double> hist_rho;

  if (options.trace) *options.trace << "iteration,energy,gradient_norm,step\n";

  auto direction = [&](const Eigen::VectorXd& grad) -> Eigen::VectorXd {
    if (dense) return -(H.selfadjointView<Eigen::Lower>() * grad);
    Eigen::VectorXd q = grad;
    const int k = static_cast<int>(hist_s.size());
    Eigen::VectorXd alpha(k);
    for (int i = k - 1; i >= 0; --i) {
      alpha(i) = hist_rho[i] * hist_s[i].dot(q);
      q -= alpha(i) * hist_y[i];
    }
    if (k > 0) q *= hist_s[k - 1].dot(hist_y[k - 1]) / hist_y[k - 1].squaredNorm();
    for (int i = 0; i < k; ++i) {
      const double beta = hist_rho[i] * hist_y[i].dot(q);
      q += (alpha(i) - beta) * hist_s[i];
    }
    return -q;
  };
  bool model_updated = false;  // any curvature applied since the last reset
  auto reset = [&] {
    if (dense) H.setIdentity();
    hist_s.clear();
    hist_y.clear();
    hist_rho.clear();
    model_updated = false;
  };

  bool restarted_since_progress = false;
  while (true) {
    res.gradient_norm = g.lpNorm<Eigen::Infinity>();
    res.energy = f;
    if (res.gradient_norm <= options.gtol) {
      res.termination = Termination::Converged;
      break;
    }
    if (res.iterations >= options.maxiter) {
      res.termination = Termination::MaxIterations;
      break;
    }

    Eigen::VectorXd d = direction(g);
    double dg = d.dot(g);
    if (!(dg < 0.0)) {  // not a descent direction: drop the model
      reset();
      d = -g;
      dg = d.dot(g);
    }

    RayFn ray{objective, res.x, d, &res.function_evaluations, {}, {}};
    const LinePoint p0{0.0, f, dg};
    const double first_trial = (res.iterations == 0) ? options.initial_step : 1.0;
    LinePoint accepted;
    // A unit-scale step can only certify sufficient decrease when the
    // predicted progress exceeds the rounding resolution of the objective.
    const bool certifiable =
        options.c1 * std::abs(dg) >
        4.0 * std::numeric_limits<double>::epsilon() * std::abs(f);
    bool ok = false;
    if (certifiable) {
      ok = wolfe_search(ray, p0, options.c1, options.c2, first_trial, accepted);
      if (!ok) ok = backtracking_search(ray, p0, options.c1, accepted);
    } else {
      // Round-off regime: decreases are no longer representable in the
      // objective, but the gradient is still well resolved and the iterate
      // can keep drifting toward the minimizer.  Take the first
      // non-increasing trial cheaply instead of running the full search
      // machinery on noise.
      double a = first_trial;
      for (int it = 0; it < 21 && !ok; ++it, a *= 0.5) {
        const LinePoint cur = ray(a);
        if (std::isfinite(cur.phi) && cur.phi <= p0.phi) {
          accepted = cur;
          ok = true;
        }
      }
    }
    if (!ok) {
      if (!restarted_since_progress && model_updated) {
        // One retry from a fresh steepest-descent model before giving up.
        restarted_since_progress = true;
        reset();
        continue;
      }
      res.termination = Termination::LineSearchFailure;
      break;
    }
    restarted_since_progress = false;

    const Eigen::VectorXd s = ray.xa - res.x;
    const Eigen::VectorXd y = ray.ga - g;
    res.x = ray.xa;
    f = accepted.phi;
    g = ray.ga;
    ++res.iterations;

    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      model_updated = true;
      if (dense) {
        // Symmetric rank updates on the lower triangle keep the update free
        // of full-matrix temporaries.
        const double rho = 1.0 / sy;
        const Eigen::VectorXd Hy = H.selfadjointView<Eigen::Lower>() * y;
        const double yHy = y.dot(Hy);
        H.selfadjointView<Eigen::Lower>().rankUpdate(s, Hy, -rho);
        H.selfadjointView<Eigen::Lower>().rankUpdate(s, rho * rho * yHy + rho);
      } else {
        hist_s.push_back(s);
        hist_y.push_back(y);
        hist_rho.push_back(1.0 / sy);
        if (static_cast<int>(hist_s.size()) > options.memory) {
          hist_s.pop_front();
          hist_y.pop_front();
          hist_rho.pop_front();
        }
      }
    }

    if (options.trace)
      *options.trace << res.iterations << ',' << f << ','
                     << g.lpNorm<Eigen::Infinity>() << ',' << accepted.a << '\n';
  }

  res.gradient_evaluations = res.function_evaluations;
  return res;
}

}  // namespace dritz
