#include "dritz/energy.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace dritz {

namespace {

using Trip = Eigen::Triplet<double>;

// |t|^{p-2} t, continued by 0 at t = 0 (valid for p > 1).
double signed_power(double t, double p) {
  if (t == 0.0) return 0.0;
  return std::pow(std::abs(t), p - 2.0) * t;
}

void append_block(std::vector<Trip>& out, int row0, int col0,
                  const Eigen::MatrixXd& block, double sign) {
  for (int r = 0; r < block.rows(); ++r)
    for (int c = 0; c < block.cols(); ++c) {
      const double val = sign * block(r, c);
      if (val != 0.0) out.emplace_back(row0 + r, col0 + c, val);
    }
}

// Pairwise (tree) reduction: round-off grows logarithmically in the number of
// terms instead of linearly, which keeps energy differences trustworthy for
// line searches near the minimum on large meshes.
double pairwise_sum(const double* data, Eigen::Index n) {
  if (n <= 32) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) s += data[i];
    return s;
  }
  const Eigen::Index half = n / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

}  // namespace

Density plaplace_density(double p, ScalarFn F, double eps) {
  if (p <= 1.0) throw std::invalid_argument("plaplace_density: p must exceed 1");
  Density den;
  den.p = p;
  den.eval = [p, F, eps](const Eigen::Vector2d& xi, double v, const Eigen::Vector2d& x) {
    const double s2 = xi.squaredNorm() + eps * eps;
    const double fv = F ? F(x) : 0.0;
    return std::pow(s2, 0.5 * p) / p - fv * v;
  };
  den.grad_xi = [p, eps](const Eigen::Vector2d& xi, double, const Eigen::Vector2d&) {
    const double s2 = xi.squaredNorm() + eps * eps;
    if (s2 == 0.0) return Eigen::Vector2d{0.0, 0.0};
    return Eigen::Vector2d{std::pow(s2, 0.5 * p - 1.0) * xi};
  };
  den.grad_v = [F](const Eigen::Vector2d&, double, const Eigen::Vector2d& x) {
    return F ? -F(x) : 0.0;
  };
  return den;
}

DiscreteEnergy::DiscreteEnergy(EnergySetup setup) : setup_(std::move(setup)) {
  if (setup_.space == nullptr)
    throw std::invalid_argument("DiscreteEnergy: setup has no space");
  if (setup_.penalty_p <= 1.0)
    throw std::invalid_argument("DiscreteEnergy: penalty exponent must exceed 1");
  const DGSpace& space = *setup_.space;
  const Mesh& mesh = *space.mesh;
  d_ = mesh.dimension;
  const int m = space.local_dim;
  const int N = space.dim;
  const int nel = mesh.num_elements();
  const int qv = static_cast<int>(space.volume_rule.weights.size());

  // Volume value sampler, physical weights, and sample points.
  std::vector<Trip> ev;
  ev.reserve(static_cast<std::size_t>(nel) * qv * m);
  wvol_.resize(static_cast<Eigen::Index>(nel) * qv);
  xvol_.resize(static_cast<Eigen::Index>(nel) * qv, 2);
  xvol_.setZero();
  for (int t = 0; t < nel; ++t) {
    append_block(ev, t * qv, t * m, space.vol_vals, 1.0);
    wvol_.segment(t * qv, qv) = space.physical_weights(t);
    const Eigen::MatrixXd pts = space.physical_points(t);
    xvol_.block(t * qv, 0, qv, pts.cols()) = pts;
  }
  Ev_.resize(nel * qv, N);
  Ev_.setFromTriplets(ev.begin(), ev.end());

  // Per-coordinate gradient samplers for the requested gradient field.
  S_.resize(d_);
  std::vector<std::vector<Trip>> gs(d_);
  for (int t = 0; t < nel; ++t)
    for (int i = 0; i < d_; ++i)
      append_block(gs[i], t * qv, t * m, space.grad_table(t, i), 1.0);
  std::vector<SpMat> Gs(d_);
  for (int i = 0; i < d_; ++i) {
    Gs[i].resize(nel * qv, N);
    Gs[i].setFromTriplets(gs[i].begin(), gs[i].end());
  }
  if (setup_.kind == GradientKind::Piecewise) {
    for (int i = 0; i < d_; ++i) S_[i] = std::move(Gs[i]);
  } else {
    const OperatorSet ops = assemble_operators(space);
    for (int i = 0; i < d_; ++i) {
      if (setup_.kind == GradientKind::DgFeCentral)
        S_[i] = Ev_ * ops.Dc[i];
      else
        S_[i] = Gs[i] + SpMat(Ev_ * ops.R[i]);
    }
  }

  const double p = setup_.penalty_p;

  // Interior jump samples, with gamma_e h_e^{1-p} folded into the weights.
  std::vector<Trip> jmp;
  int jrows = 0;
  for (const EdgeTraces& tr : space.interior_traces)
    jrows += static_cast<int>(tr.weights.size());
  wjmp_.resize(jrows);
  {
    int row = 0;
    for (std::size_t e = 0; e < mesh.interior_edges.size(); ++e) {
      const Edge& edge = mesh.interior_edges[e];
      const EdgeTraces& tr = space.interior_traces[e];
      const int q = static_cast<int>(tr.weights.size());
      append_block(jmp, row, edge.plus_element * m, tr.plus_vals, 1.0);
      append_block(jmp, row, edge.minus_element * m, tr.minus_vals, -1.0);
      wjmp_.segment(row, q) =
          tr.weights * (edge.gamma * std::pow(edge.size, 1.0 - p));
      row += q;
    }
  }
  Jmp_.resize(jrows, N);
  Jmp_.setFromTriplets(jmp.begin(), jmp.end());

  // Boundary trace samples against the boundary data.
  std::vector<Trip> bnd;
  int brows = 0;
  for (const EdgeTraces& tr : space.boundary_traces)
    brows += static_cast<int>(tr.weights.size());
  wbnd_.resize(brows);
  gbnd_ = Eigen::VectorXd::Zero(brows);
  {
    int row = 0;
    for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
      const Edge& edge = mesh.boundary_edges[e];
      const EdgeTraces& tr = space.boundary_traces[e];
      const int q = static_cast<int>(tr.weights.size());
      append_block(bnd, row, edge.plus_element * m, tr.plus_vals, 1.0);
      wbnd_.segment(row, q) =
          tr.weights * (edge.gamma * std::pow(edge.size, 1.0 - p));
      if (setup_.boundary_g)
        for (int i = 0; i < q; ++i) {
          Eigen::Vector2d x = Eigen::Vector2d::Zero();
          x.head(tr.points.cols()) = tr.points.row(i).transpose();
          gbnd_(row + i) = setup_.boundary_g(x);
        }
      row += q;
    }
  }
  Bnd_.resize(brows, N);
  Bnd_.setFromTriplets(bnd.begin(), bnd.end());
}

double DiscreteEnergy::value(const Eigen::VectorXd& coeffs) const {
  const Density& den = setup_.density;
  const Eigen::VectorXd vv = Ev_ * coeffs;
  std::vector<Eigen::VectorXd> xi(d_);
  for (int i = 0; i < d_; ++i) xi[i] = S_[i] * coeffs;

  const double p = setup_.penalty_p;
  const Eigen::VectorXd j = Jmp_ * coeffs;
  const Eigen::VectorXd b = Bnd_ * coeffs - gbnd_;
  Eigen::VectorXd terms(vv.size() + j.size() + b.size());
  for (Eigen::Index q = 0; q < vv.size(); ++q) {
    Eigen::Vector2d g{xi[0](q), d_ == 2 ? xi[1](q) : 0.0};
    terms(q) = wvol_(q) * den.eval(g, vv(q), xvol_.row(q).transpose());
  }
  for (Eigen::Index q = 0; q < j.size(); ++q)
    terms(vv.size() + q) = wjmp_(q) * std::pow(std::abs(j(q)), p);
  for (Eigen::Index q = 0; q < b.size(); ++q)
    terms(vv.size() + j.size() + q) = wbnd_(q) * std::pow(std::abs(b(q)), p);
  return pairwise_sum(terms.data(), terms.size());
}

double DiscreteEnergy::penalty(const Eigen::VectorXd& coeffs) const {
  const double p = setup_.penalty_p;
  const Eigen::VectorXd j = Jmp_ * coeffs;
  const Eigen::VectorXd b = Bnd_ * coeffs - gbnd_;
  Eigen::VectorXd terms(j.size() + b.size());
  for (Eigen::Index q = 0; q < j.size(); ++q)
    terms(q) = wjmp_(q) * std::pow(std::abs(j(q)), p);
  for (Eigen::Index q = 0; q < b.size(); ++q)
    terms(j.size() + q) = wbnd_(q) * std::pow(std::abs(b(q)), p);
  return pairwise_sum(terms.data(), terms.size());
}

Eigen::VectorXd DiscreteEnergy::gradient(const Eigen::VectorXd& coeffs) const {
  const Density& den = setup_.density;
  const Eigen::VectorXd vv = Ev_ * coeffs;
  std::vector<Eigen::VectorXd> xi(d_);
  for (int i = 0; i < d_; ++i) xi[i] = S_[i] * coeffs;

  Eigen::VectorXd fv(vv.size());
  std::vector<Eigen::VectorXd> fxi(d_, Eigen::VectorXd(vv.size()));
  for (Eigen::Index q = 0; q < vv.size(); ++q) {
    Eigen::Vector2d g{xi[0](q), d_ == 2 ? xi[1](q) : 0.0};
    const Eigen::Vector2d x = xvol_.row(q).transpose();
    const Eigen::Vector2d dxi = den.grad_xi(g, vv(q), x);
    for (int i = 0; i < d_; ++i) fxi[i](q) = wvol_(q) * dxi(i);
    fv(q) = wvol_(q) * den.grad_v(g, vv(q), x);
  }

  Eigen::VectorXd out = Ev_.transpose() * fv;
  for (int i = 0; i < d_; ++i) out += S_[i].transpose() * fxi[i];

  const double p = setup_.penalty_p;
  Eigen::VectorXd j = Jmp_ * coeffs;
  for (Eigen::Index q = 0; q < j.size(); ++q)
    j(q) = p * wjmp_(q) * signed_power(j(q), p);
  out += Jmp_.transpose() * j;
  Eigen::VectorXd b = Bnd_ * coeffs - gbnd_;
  for (Eigen::Index q = 0; q < b.size(); ++q)
    b(q) = p * wbnd_(q) * signed_power(b(q), p);
  out += Bnd_.transpose() * b;
  return out;
}

double discrete_energy(const EnergySetup& setup, const DGFunction& v) {
  if (v.space != setup.space)
    throw std::invalid_argument("discrete_energy: function not in setup space");
  return DiscreteEnergy(setup).value(v.coeffs);
}

Eigen::VectorXd discrete_energy_gradient(const EnergySetup& setup, const DGFunction& v) {
  if (v.space != setup.space)
    throw std::invalid_argument("discrete_energy_gradient: function not in setup space");
  return DiscreteEnergy(setup).gradient(v.coeffs);
}

double sipdg_energy(const DGSpace& space, double gamma, const ScalarFn& g,
                    const ScalarFn& F, const DGFunction& v) {
  const Mesh& mesh = *space.mesh;
  const int m = space.local_dim;
  const int d = mesh.dimension;
  const Eigen::VectorXd& c = v.coeffs;
  double acc = 0.0;

  for (int t = 0; t < mesh.num_elements(); ++t) {
    const Eigen::VectorXd ct = c.segment(t * m, m);
    const Eigen::VectorXd w = space.physical_weights(t);
    const Eigen::MatrixXd pts = space.physical_points(t);
    const Eigen::VectorXd vals = space.vol_vals * ct;
    Eigen::VectorXd grad2 = Eigen::VectorXd::Zero(w.size());
    for (int i = 0; i < d; ++i) {
      const Eigen::VectorXd gi = space.grad_table(t, i) * ct;
      grad2 += gi.cwiseProduct(gi);
    }
    for (Eigen::Index q = 0; q < w.size(); ++q) {
      Eigen::Vector2d x = Eigen::Vector2d::Zero();
      x.head(pts.cols()) = pts.row(q).transpose();
      acc += w(q) * (0.5 * grad2(q) - (F ? F(x) : 0.0) * vals(q));
    }
  }

  for (std::size_t e = 0; e < mesh.interior_edges.size(); ++e) {
    const Edge& edge = mesh.interior_edges[e];
    const EdgeTraces& tr = space.interior_traces[e];
    const int P = edge.plus_element;
    const int M = edge.minus_element;
    const Eigen::VectorXd jump =
        tr.plus_vals * c.segment(P * m, m) - tr.minus_vals * c.segment(M * m, m);
    const auto gp = space.basis_grad_at(P, tr.points);
    const auto gm = space.basis_grad_at(M, tr.points);
    Eigen::VectorXd avg_n = Eigen::VectorXd::Zero(jump.size());
    for (int i = 0; i < d; ++i)
      avg_n += 0.5 * edge.normal(i) *
               (gp[i] * c.segment(P * m, m) + gm[i] * c.segment(M * m, m));
    for (Eigen::Index q = 0; q < jump.size(); ++q)
      acc += tr.weights(q) *
             (-jump(q) * avg_n(q) + 0.5 * gamma / edge.size * jump(q) * jump(q));
  }

  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    const Edge& edge = mesh.boundary_edges[e];
    const EdgeTraces& tr = space.boundary_traces[e];
    const int T = edge.plus_element;
    const Eigen::VectorXd vals = tr.plus_vals * c.segment(T * m, m);
    const auto gt = space.basis_grad_at(T, tr.points);
    Eigen::VectorXd gn = Eigen::VectorXd::Zero(vals.size());
    for (int i = 0; i < d; ++i) gn += edge.normal(i) * (gt[i] * c.segment(T * m, m));
    for (Eigen::Index q = 0; q < vals.size(); ++q) {
      Eigen::Vector2d x = Eigen::Vector2d::Zero();
      x.head(tr.points.cols()) = tr.points.row(q).transpose();
      const double diff = vals(q) - (g ? g(x) : 0.0);
      acc += tr.weights(q) *
             (-diff * gn(q) + 0.5 * gamma / edge.size * diff * diff);
    }
  }
  return acc;
}

}  // namespace dritz
