#include "synseg/reduction_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "json.hpp"
#include "synseg/krylov.hpp"
#include "synseg/reduced_energy.hpp"

namespace synseg {
namespace {

double sup_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s = std::max(s, std::abs(v));
  return s;
}

double mixed_norm(const DiscreteFunctional& fn, const Field3& f) {
  Field3 lap = fn.zeros();
  fn.neg_laplacian(f, lap);
  const double h1 = std::sqrt(std::max(0.0, fn.dot(f, lap) + fn.dot(f, f)));
  return h1 + sup_norm(f.data());
}

// Diagonal of -Delta_h + P, used to precondition the Newton systems.
std::vector<double> norm_diagonal(const DiscreteFunctional& fn) {
  const auto& g = fn.grid();
  const double c0 = -g.stencil()[0];
  const double ih2 = 1.0 / (g.h() * g.h()), iht2 = 1.0 / (g.h_theta() * g.h_theta());
  const std::size_t n = g.size();
  const auto pot = fn.potential();
  std::vector<double> d(3 * n);
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < g.n_rho(); ++i) {
      const double r = g.rho(i);
      const double v = 2.0 * c0 * ih2 + c0 * iht2 / (r * r) - 0.25 / (r * r);
      for (std::size_t j = 0; j < g.n_theta(); ++j)
        for (std::size_t k = 0; k < g.n_z(); ++k) {
          const std::size_t idx = g.index(i, j, k);
          d[c * n + idx] = v + pot[c * n + idx];
        }
    }
  return d;
}

}  // namespace

SolveReport refine(const PolygonConfig& cfg, const SystemParams& params, const Potentials& pots,
                   const RadialProfile& profile, const RefineOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  auto grid = std::make_shared<const WedgeGrid>(grid_for(cfg, opts.grid));
  DiscreteFunctional fn(grid, cfg.parity, params, pots);
  const Field3 ansatz = synthesize_ansatz(cfg, params, profile, grid);
  const ConstraintBasis basis = ConstraintBasis::build(cfg, params, profile, grid);

  SolveReport rep;
  rep.config = cfg;
  rep.ansatz_energy = fn.energy(ansatz);
  rep.ansatz_norm = mixed_norm(fn, ansatz);
  rep.bound_shape = l1_norm_estimate(cfg, params, pots);
  if (!opts.waive_probe) {
    ProbeOptions po;
    po.wanted = 6;
    const auto probe = rayleigh_min(fn, ansatz, &basis, po);
    rep.probe_min_abs = probe.min_abs;
    if (!(probe.min_abs > 1e-6))
      throw Error(Reason::linear_solve_failure,
                  "second variation nearly singular on E, |lambda| = " + std::to_string(probe.min_abs));
  }

  const auto diag = norm_diagonal(fn);
  const InnerProduct dot = [&](std::span<const double> a, std::span<const double> b) { return fn.dot(a, b); };
  Field3 sol = ansatz;
  Field3 grad = fn.zeros(), proj = fn.zeros();
  Field3 x = fn.zeros(), y = fn.zeros();
  const LinearOp A = [&](std::span<const double> in, std::span<double> out) {
    std::copy(in.begin(), in.end(), x.data().begin());
    basis.project(fn, x);
    fn.hessian_apply(sol, x, y);
    basis.project(fn, y);
    std::copy(y.data().begin(), y.data().end(), out.begin());
  };
  const LinearOp M = [&](std::span<const double> in, std::span<double> out) {
    std::copy(in.begin(), in.end(), x.data().begin());
    basis.project(fn, x);
    auto xd = x.data();
    for (std::size_t i = 0; i < xd.size(); ++i) xd[i] /= diag[i];
    basis.project(fn, x);
    std::copy(xd.begin(), xd.end(), out.begin());
  };

  for (int it = 0;; ++it) {
    fn.gradient(sol, grad);
    proj = grad;
    basis.project(fn, proj);
    const double res = fn.l2_norm(proj);
    rep.residual_history.push_back(res);
    rep.full_residual_history.push_back(fn.l2_norm(grad));
    rep.iterations = it;
    if (res < opts.tol) {
      rep.converged = true;
      break;
    }
    if (it >= opts.max_iter)
      throw Error(Reason::diverged, "no convergence after " + std::to_string(it) +
                                        " Newton steps, residual " + std::to_string(res));
    if (!std::isfinite(res)) throw Error(Reason::diverged, "residual is not finite");
    std::vector<double> rhs(proj.data().begin(), proj.data().end());
    for (double& v : rhs) v = -v;
    std::vector<double> step(rhs.size(), 0.0);
    // forcing term keeps the outer iteration quadratic without oversolving early steps
    const double rel = res / rep.residual_history.front();
    const double eta = std::clamp(rel * rel, opts.krylov_rtol, 1e-4);
    const auto kr = minres(A, M, dot, rhs, step, eta, opts.krylov_max_iter);
    rep.krylov_iterations.push_back(kr.iterations);
    if (!kr.converged && !(kr.residual < 1e-2 * kr.initial_residual))
      throw Error(Reason::linear_solve_failure,
                  "Newton system not solved (relative residual " +
                      std::to_string(kr.residual / kr.initial_residual) +
                      "); smallest Ritz value estimate " + std::to_string(kr.min_ritz));
    Field3 d = fn.zeros();
    std::copy(step.begin(), step.end(), d.data().begin());
    basis.project(fn, d);
    sol += d;
    sol.enforce_symmetry();
  }

  Field3 pert = sol;
  pert += -1.0 * ansatz;
  rep.pert_norm = mixed_norm(fn, pert);
  rep.energy = fn.energy(sol);
  rep.metrics = fn.verification_metrics(sol);
  for (int c = 0; c < 3; ++c) {
    const auto f = sol.comp(c);
    rep.positivity[static_cast<std::size_t>(c)] = *std::min_element(f.begin(), f.end());
  }
  const auto& h = rep.residual_history;
  if (h.size() >= 2 && h.front() > 0.0 && h.back() > 0.0)
    rep.residual_drop = std::log10(h.front() / h.back());
  if (h.size() >= 4) {
    const std::size_t n = h.size();
    const double a = std::log(h[n - 3]) - std::log(h[n - 4]);
    const double b = std::log(h[n - 2]) - std::log(h[n - 3]);
    const double c = std::log(h[n - 1]) - std::log(h[n - 2]);
    rep.newton_order = std::min(b / a, c / b);
  }
  rep.solution = std::move(sol);
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

std::vector<SweepEntry> continuation_sweep(const std::vector<int>& ells, const RunConfig& cfg,
                                           const RadialProfile& profile) {
  std::vector<SweepEntry> out;
  const SystemParams params = cfg.params();
  RefineOptions ro;
  ro.max_iter = cfg.solver.max_iter;
  ro.tol = cfg.solver.tol;
  ro.grid = cfg.grid;
  ro.waive_probe = cfg.solver.waive_probe;
  const Hypothesis hyp = classify_hypothesis(params, cfg.potentials);
  std::optional<ExpansionConstants> k;
  for (int ell : ells) {
    SweepEntry e;
    e.ell = ell;
    PolygonConfig pc = cfg.polygon(ell);
    e.seed = "separation";
    try {
      if (hyp != Hypothesis::none && ell >= 2 && cfg.ring.r <= 0.0) {
        if (!k) k = expansion_constants(params, profile);
        const ReducedModel model{*k, params, cfg.potentials, cfg.ring.parity, InteractionForm::pair_sum};
        const bool maximize = hyp == Hypothesis::Hm_i || hyp == Hypothesis::Hm_ii;
        try {
          const auto s = find_extremum(model, ell, maximize ? ExtremumMode::maximize : ExtremumMode::minimize);
          pc.r = s.best_r;
          pc.rho = s.best_rho;
          e.seed = "landscape";
        } catch (const Error&) {
          // the landscape has no interior extremum at this ell; keep the separation seed
        }
      }
      e.report = refine(pc, params, cfg.potentials, profile, ro);
    } catch (const Error& err) {
      e.error = std::string(reason_name(err.reason())) + ": " + err.what();
    }
    out.push_back(std::move(e));
  }
  return out;
}

RotationCheck check_rotation(const Field3& f) {
  const auto& g = f.grid();
  const long span = static_cast<long>(g.n_theta()) - 1;  // wedge in angular steps
  const long full = 2 * span * (f.parity() == Parity::positive ? g.desc().ell : 2 * g.desc().ell);
  const double s = f.parity() == Parity::positive ? 1.0 : -1.0;
  RotationCheck rc;
  for (int c = 0; c < 3; ++c) {
    const auto sym = component_symmetry(f.parity(), c);
    const auto v = f.comp(c);
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < g.n_rho(); ++i)
      for (std::size_t k = 0; k < g.n_z(); ++k)
        for (long J = 0; J < full; ++J) {
          const auto a = g.theta_neighbour(sym, J);
          const auto b = g.theta_neighbour(sym, J + 2 * span);
          const double va = a.sign * v[g.index(i, a.j, k)];
          const double vb = b.sign * v[g.index(i, b.j, k)];
          rc.max_defect = std::max(rc.max_defect, std::abs(vb - s * va));
          lo = std::min(lo, va);
          hi = std::max(hi, va);
        }
    rc.min[static_cast<std::size_t>(c)] = lo;
    rc.max[static_cast<std::size_t>(c)] = hi;
  }
  return rc;
}

std::string to_json(const SolveReport& r) {
  const auto& m = r.metrics;
  nlohmann::json j = {
      {"ell", r.config.ell},
      {"parity", parity_name(r.config.parity)},
      {"r", r.config.r},
      {"rho", r.config.rho},
      {"converged", r.converged},
      {"iterations", r.iterations},
      {"residual_history", r.residual_history},
      {"full_residual_history", r.full_residual_history},
      {"krylov_iterations", r.krylov_iterations},
      {"residual_drop_orders", r.residual_drop},
      {"newton_order", r.newton_order},
      {"pert_norm", r.pert_norm},
      {"ansatz_norm", r.ansatz_norm},
      {"bound_shape", r.bound_shape},
      {"energy", r.energy.total},
      {"energy_per_ell", r.energy.total / r.config.ell},
      {"ansatz_energy", r.ansatz_energy.total},
      {"metrics", {{"sync_defect", m.sync_defect}, {"overlap", m.overlap}, {"int_u4", m.quartic_u},
                   {"sup", m.sup}, {"residual_l2", m.residual_l2}}},
      {"positivity", r.positivity},
      {"wall_seconds", r.wall_seconds}};
  if (r.probe_min_abs) j["probe_min_abs_lambda"] = *r.probe_min_abs;
  return j.dump(2);
}

}  // namespace synseg
