#include "synseg/energy.hpp"

#include <algorithm>
#include <cmath>
#include "json.hpp"

#include "synseg/krylov.hpp"

namespace synseg {
namespace {

std::vector<double> sample_potentials(const WedgeGrid& g, const Potentials& pots) {
  const std::size_t n = g.size();
  std::vector<double> out(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = g.point(i);
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    for (std::size_t c = 0; c < 3; ++c) out[c * n + i] = pots[c](r);
  }
  return out;
}

// int f^2 g^2 over the grid for components a, b (full space).
double cross_quartic(const WedgeGrid& g, std::span<const double> a, std::span<const double> b,
                     std::span<const double> w) {
  std::vector<double> t(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) t[i] = a[i] * a[i] * b[i] * b[i];
  return g.multiplicity() * kernels::weighted_sum(w, t);
}

}  // namespace

std::string to_json(const EnergyReport& r) {
  nlohmann::json j;
  j["total"] = r.total;
  j["kinetic_potential"] = r.kinetic_potential;
  j["quartic"] = r.quartic;
  j["coupling"] = r.coupling;
  const char* names[3] = {"u", "v", "w"};
  for (int c = 0; c < 3; ++c) {
    const auto& pc = r.per_component[static_cast<std::size_t>(c)];
    j["per_component"][names[c]] = {
        {"kinetic", pc.kinetic}, {"potential", pc.potential}, {"quartic", pc.quartic}};
  }
  return j.dump(2);
}

DiscreteFunctional::DiscreteFunctional(GridPtr grid, Parity parity, const SystemParams& params,
                                       const Potentials& pots)
    : grid_(std::move(grid)), parity_(parity), params_(params) {
  cp_ = {params.mu(), params.beta12(), params.beta13(), params.beta23()};
  for (const auto& p : pots) p.validate();
  pot_ = sample_potentials(*grid_, pots);
  if (grid_->desc().parity != parity)
    throw Error(Reason::config_error, "grid parity does not match the functional");
}

double DiscreteFunctional::component_dot(int c, std::span<const double> a,
                                         std::span<const double> b) const {
  return grid_->multiplicity() *
         kernels::weighted_dot(grid_->weights(component_symmetry(parity_, c)), a, b);
}

double DiscreteFunctional::dot(std::span<const double> a, std::span<const double> b) const {
  return grid_->multiplicity() * kernels::weighted_dot(grid_->stacked_weights(), a, b);
}

double DiscreteFunctional::dot(const Field3& a, const Field3& b) const {
  return dot(a.data(), b.data());
}

double DiscreteFunctional::l2_norm(const Field3& a) const { return std::sqrt(dot(a, a)); }

double DiscreteFunctional::h_norm(const Field3& a) const {
  Field3 t = zeros();
  norm_apply(a, t);
  return std::sqrt(std::max(0.0, dot(a, t)));
}

void DiscreteFunctional::neg_laplacian(const Field3& in, Field3& out) const {
  for (int c = 0; c < 3; ++c)
    kernels::neg_laplacian(*grid_, component_symmetry(parity_, c), in.comp(c), out.comp(c));
}

EnergyReport DiscreteFunctional::energy(const Field3& f) const {
  EnergyReport rep;
  Field3 lap = zeros();
  neg_laplacian(f, lap);
  const std::size_t n = grid_->size();
  std::vector<double> tmp(n);
  for (int c = 0; c < 3; ++c) {
    auto& pc = rep.per_component[static_cast<std::size_t>(c)];
    const auto x = f.comp(c);
    const auto w = grid_->weights(component_symmetry(parity_, c));
    pc.kinetic = 0.5 * component_dot(c, x, lap.comp(c));
    const auto pot = std::span<const double>(pot_).subspan(static_cast<std::size_t>(c) * n, n);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = pot[i] * x[i] * x[i];
    pc.potential = 0.5 * grid_->multiplicity() * kernels::weighted_sum(w, tmp);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] * x[i] * x[i] * x[i];
    pc.quartic = 0.25 * cp_.mu[static_cast<std::size_t>(c)] * grid_->multiplicity() *
                 kernels::weighted_sum(w, tmp);
    rep.kinetic_potential += pc.kinetic + pc.potential;
    rep.quartic += pc.quartic;
  }
  // weights of a product vanish wherever either factor is pinned
  const auto wu = grid_->weights(component_symmetry(parity_, 0));
  const auto ww = grid_->weights(component_symmetry(parity_, 2));
  std::vector<double> wuw(n);
  for (std::size_t i = 0; i < n; ++i) wuw[i] = std::min(wu[i], ww[i]);
  rep.coupling = 0.5 * (cp_.b12 * cross_quartic(*grid_, f.u(), f.v(), wu) +
                        cp_.b13 * cross_quartic(*grid_, f.u(), f.w(), wuw) +
                        cp_.b23 * cross_quartic(*grid_, f.v(), f.w(), wuw));
  rep.total = rep.kinetic_potential - rep.quartic - rep.coupling;
  return rep;
}

void DiscreteFunctional::gradient(const Field3& f, Field3& out) const {
  Field3 loc = zeros();
  kernels::local_gradient(cp_, pot_, f.data(), loc.data());
  neg_laplacian(f, out);
  out += loc;
  out.enforce_symmetry();
}

void DiscreteFunctional::hessian_apply(const Field3& base, const Field3& d, Field3& out) const {
  Field3 loc = zeros();
  kernels::local_hessian(cp_, pot_, base.data(), d.data(), loc.data());
  neg_laplacian(d, out);
  out += loc;
  out.enforce_symmetry();
}

void DiscreteFunctional::norm_apply(const Field3& d, Field3& out) const {
  neg_laplacian(d, out);
  auto o = out.data();
  const auto x = d.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] += pot_[i] * x[i];
  out.enforce_symmetry();
}

double DiscreteFunctional::remainder(const Field3& a, const Field3& p) const {
  const std::size_t n = grid_->size();
  const auto [m1, m2, m3] = cp_.mu;
  const auto U = a.u(), V = a.v(), W = a.w();
  const auto f = p.u(), g = p.v(), x = p.w();
  const auto wu = grid_->weights(component_symmetry(parity_, 0));
  const auto ww = grid_->weights(component_symmetry(parity_, 2));
  // R = -int( mu U f^3 + mu/4 f^4 ...) - b12 Q(U,V,f,g) - b13 Q(U,W,f,x) - b23 Q(V,W,g,x)
  // with Q(A,B,a,b) = A a b^2 + B a^2 b + a^2 b^2 / 2.
  auto Q = [](double A, double B, double s, double t) {
    return A * s * t * t + B * s * s * t + 0.5 * s * s * t * t;
  };
  std::vector<double> tu(n), tw(n), tx(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double f2 = f[i] * f[i], g2 = g[i] * g[i], x2 = x[i] * x[i];
    tu[i] = m1 * (U[i] * f2 * f[i] + 0.25 * f2 * f2) + m2 * (V[i] * g2 * g[i] + 0.25 * g2 * g2) +
            cp_.b12 * Q(U[i], V[i], f[i], g[i]);
    tw[i] = m3 * (W[i] * x2 * x[i] + 0.25 * x2 * x2);
    tx[i] = cp_.b13 * Q(U[i], W[i], f[i], x[i]) + cp_.b23 * Q(V[i], W[i], g[i], x[i]);
  }
  std::vector<double> wuw(n);
  for (std::size_t i = 0; i < n; ++i) wuw[i] = std::min(wu[i], ww[i]);
  const double m = grid_->multiplicity();
  return -m * (kernels::weighted_sum(wu, tu) + kernels::weighted_sum(ww, tw) +
               kernels::weighted_sum(wuw, tx));
}

Decomposition DiscreteFunctional::decompose(const Field3& base, const Field3& pert) const {
  Decomposition d{};
  d.J0 = energy(base).total;
  Field3 g = zeros();
  gradient(base, g);
  d.L1 = dot(g, pert);
  Field3 hp = zeros();
  hessian_apply(base, pert, hp);
  d.L2 = dot(hp, pert);
  d.R = remainder(base, pert);
  return d;
}

Metrics DiscreteFunctional::verification_metrics(const Field3& f) const {
  Metrics m;
  const std::size_t n = grid_->size();
  const double su = std::sqrt(std::abs(params_.mu(0) - params_.beta12()));
  const double sv = std::sqrt(std::abs(params_.mu(1) - params_.beta12()));
  std::vector<double> d(n), ld(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = su * f.u()[i] - sv * f.v()[i];
  const auto sym = component_symmetry(parity_, 0);
  kernels::neg_laplacian(*grid_, sym, d, ld);
  const double semi = std::sqrt(std::max(0.0, component_dot(0, d, ld)));
  const double l2 = std::sqrt(component_dot(0, d, d));
  double sup = 0.0;
  for (double x : d) sup = std::max(sup, std::abs(x));
  m.sync_defect = semi + l2 + sup;

  const auto wu = grid_->weights(component_symmetry(parity_, 0));
  const auto ww = grid_->weights(component_symmetry(parity_, 2));
  std::vector<double> wuw(n);
  for (std::size_t i = 0; i < n; ++i) wuw[i] = std::min(wu[i], ww[i]);
  m.overlap = cross_quartic(*grid_, f.u(), f.w(), wuw) + cross_quartic(*grid_, f.v(), f.w(), wuw);
  std::vector<double> u4(n);
  for (std::size_t i = 0; i < n; ++i) u4[i] = std::pow(f.u()[i], 4);
  m.quartic_u = grid_->multiplicity() * kernels::weighted_sum(wu, u4);

  Field3 g = zeros();
  gradient(f, g);
  for (int c = 0; c < 3; ++c) {
    double s = 0.0;
    for (double x : f.comp(c)) s = std::max(s, std::abs(x));
    m.sup[static_cast<std::size_t>(c)] = s;
    m.residual_l2[static_cast<std::size_t>(c)] = std::sqrt(component_dot(c, g.comp(c), g.comp(c)));
  }
  return m;
}

Field3 ansatz_residual(const PolygonConfig& cfg, const SystemParams& params,
                       const Potentials& pots, const RadialProfile& profile, GridPtr grid) {
  const PeakSet ps = peak_positions(cfg);
  const WedgeGrid& g = *grid;
  const std::size_t n = g.size();
  Field3 res(grid, cfg.parity);
  const double a = params.alpha(), c = params.gamma(), mu3 = params.mu(2);
  const double s3 = std::sqrt(mu3);
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = g.point(i);
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    // running sums; the cube defect sum_k w_k^3 - S^3 accumulates without cancellation
    double S = 0.0, T = 0.0, dS = 0.0, dT = 0.0;
    for (std::size_t k = 0; k < ps.S.size(); ++k) {
      const double ws = ps.sign[k] * eval_profile(profile, std::hypot(x[0] - ps.S[k][0], x[1] - ps.S[k][1], x[2])).value;
      const double wt = ps.sign[k] * eval_profile(profile, std::hypot(x[0] - ps.T[k][0], x[1] - ps.T[k][1], x[2])).value / s3;
      dS -= 3.0 * S * ws * (S + ws);
      dT -= 3.0 * T * wt * (T + wt);
      S += ws;
      T += wt;
    }
    const double p1 = pots[0](r) - 1.0, p2 = pots[1](r) - 1.0, p3 = pots[2](r) - 1.0;
    res.u()[i] = a * dS + p1 * a * S - params.beta13() * a * S * T * T;
    res.v()[i] = c * dS + p2 * c * S - params.beta23() * c * S * T * T;
    res.w()[i] = mu3 * dT + p3 * T -
                 (params.beta13() * a * a + params.beta23() * c * c) * S * S * T;
  }
  res.enforce_symmetry();
  return res;
}

double l1_dual_norm(const DiscreteFunctional& fn, const Field3& residual) {
  const LinearOp B = [&](std::span<const double> in, std::span<double> out) {
    Field3 a = fn.zeros(), b = fn.zeros();
    std::copy(in.begin(), in.end(), a.data().begin());
    fn.norm_apply(a, b);
    std::copy(b.data().begin(), b.data().end(), out.begin());
  };
  const auto pot = fn.potential();
  const double diag = 4.0 / (fn.grid().h() * fn.grid().h());
  const LinearOp M = [&](std::span<const double> in, std::span<double> out) {
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] / (diag + pot[i]);
  };
  const InnerProduct dot = [&](std::span<const double> x, std::span<const double> y) {
    return fn.dot(x, y);
  };
  std::vector<double> x(residual.data().size(), 0.0);
  conjugate_gradient(B, M, dot, residual.data(), x, 1e-10, 2000);
  return std::sqrt(std::max(0.0, dot(residual.data(), x)));
}

double l1_norm_estimate(const PolygonConfig& cfg, const SystemParams& params,
                        const Potentials& pots) {
  const double ell = cfg.ell;
  const double m12 = std::min(pots[0].m, pots[1].m);
  const double t1 = (std::abs(pots[0].a) + std::abs(pots[1].a)) * ell / std::pow(cfg.r, m12);
  const double t2 = std::abs(pots[2].a) * ell / std::pow(cfg.rho, pots[2].m);
  const double t3 = (std::abs(params.beta13()) + std::abs(params.beta23())) *
                    std::exp(-ring_gap(cfg)) * ell * std::sqrt(ell) / cfg.r;
  return t1 + t2 + t3;
}

}  // namespace synseg
