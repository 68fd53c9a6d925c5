#include "synseg/linearized.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "json.hpp"
#include "synseg/krylov.hpp"

namespace synseg {
namespace {

// sum_k sign_k amp dW/dR(x - R e_k) and the same multiplied by W*^2(x - R e_k)
void radial_orbit(const WedgeGrid& g, std::span<const Vec3> centres, std::span<const double> signs,
                  double amp, const RadialProfile& profile, std::span<double> deriv,
                  std::span<double> weighted) {
  const long n = static_cast<long>(g.size());
#pragma omp parallel for schedule(static)
  for (long idx = 0; idx < n; ++idx) {
    const auto x = g.point(static_cast<std::size_t>(idx));
    double d1 = 0.0, d2 = 0.0;
    for (std::size_t k = 0; k < centres.size(); ++k) {
      const auto& c = centres[k];
      const double R = std::hypot(c[0], c[1]);
      const double dx = x[0] - c[0], dy = x[1] - c[1], dz = x[2] - c[2];
      const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
      if (d == 0.0) continue;
      const auto s = eval_profile(profile, d);
      // d/dR |x - R e| = -(x - c).e / d
      const double dd = -(dx * c[0] + dy * c[1]) / (R * d);
      const double v = signs[k] * amp * s.deriv * dd;
      d1 += v;
      d2 += v * s.value * s.value;
    }
    deriv[static_cast<std::size_t>(idx)] = d1;
    weighted[static_cast<std::size_t>(idx)] = d2;
  }
}

double field_dot_b(const DiscreteFunctional& fn, const Field3& a, const Field3& b) {
  Field3 t = fn.zeros();
  fn.norm_apply(b, t);
  return fn.dot(a, t);
}

// A few CG steps on (-Delta_h + P) x = r, as a preconditioner.
LinearOp approx_norm_inverse(const DiscreteFunctional& fn, int steps) {
  return [&fn, steps](std::span<const double> in, std::span<double> out) {
    const LinearOp B = [&fn](std::span<const double> a, std::span<double> b) {
      Field3 x = fn.zeros(), y = fn.zeros();
      std::copy(a.begin(), a.end(), x.data().begin());
      fn.norm_apply(x, y);
      std::copy(y.data().begin(), y.data().end(), b.begin());
    };
    const auto pot = fn.potential();
    const double h = fn.grid().h();
    const double diag = 2.5 * (2.0 / (h * h)) + 2.0 / (h * h);
    const LinearOp M = [&](std::span<const double> a, std::span<double> b) {
      for (std::size_t i = 0; i < a.size(); ++i) b[i] = a[i] / (diag + pot[i]);
    };
    const InnerProduct dot = [&fn](std::span<const double> a, std::span<const double> b) {
      return fn.dot(a, b);
    };
    std::fill(out.begin(), out.end(), 0.0);
    conjugate_gradient(B, M, dot, in, out, 1e-3, steps);
  };
}

}  // namespace

ConstraintBasis ConstraintBasis::build(const PolygonConfig& cfg, const SystemParams& params,
                                       const RadialProfile& profile, GridPtr grid) {
  const PeakSet ps = peak_positions(cfg);
  const std::size_t n = grid->size();
  ConstraintBasis b{Field3(grid, cfg.parity), Field3(grid, cfg.parity), Field3(grid, cfg.parity),
                    Field3(grid, cfg.parity)};
  std::vector<double> d(n), wd(n);
  radial_orbit(*grid, ps.S, ps.sign, 1.0, profile, d, wd);
  for (std::size_t i = 0; i < n; ++i) {
    b.ring.u()[i] = params.alpha() * d[i];
    b.ring.v()[i] = params.gamma() * d[i];
    b.c_ring.u()[i] = params.alpha() * wd[i];
    b.c_ring.v()[i] = params.gamma() * wd[i];
  }
  radial_orbit(*grid, ps.T, ps.sign, 1.0 / std::sqrt(params.mu(2)), profile, d, wd);
  for (std::size_t i = 0; i < n; ++i) {
    b.seg.w()[i] = d[i];
    b.c_seg.w()[i] = wd[i];
  }
  for (Field3* f : {&b.ring, &b.seg, &b.c_ring, &b.c_seg}) f->enforce_symmetry();
  return b;
}

void ConstraintBasis::project(const DiscreteFunctional& fn, Field3& p) const {
  // the two functionals live on disjoint components, so their Gram matrix is diagonal
  for (const Field3* c : {&c_ring, &c_seg}) {
    const double cc = fn.dot(*c, *c);
    if (cc == 0.0) continue;
    const double t = fn.dot(*c, p) / cc;
    auto pd = p.data();
    const auto cd = c->data();
    for (std::size_t i = 0; i < pd.size(); ++i) pd[i] -= t * cd[i];
  }
}

void ConstraintBasis::project(const DiscreteFunctional& fn, std::span<const double> in,
                              std::span<double> out) const {
  Field3 p = fn.zeros();
  std::copy(in.begin(), in.end(), p.data().begin());
  project(fn, p);
  std::copy(p.data().begin(), p.data().end(), out.begin());
}

std::array<double, 2> ConstraintBasis::residuals(const DiscreteFunctional& fn, const Field3& p) const {
  const double pn = fn.l2_norm(p);
  std::array<double, 2> r{};
  int i = 0;
  for (const Field3* c : {&c_ring, &c_seg}) {
    const double cn = fn.l2_norm(*c);
    r[static_cast<std::size_t>(i++)] = cn > 0.0 && pn > 0.0 ? std::abs(fn.dot(*c, p)) / (cn * pn) : 0.0;
  }
  return r;
}

ProbeResult rayleigh_min(const DiscreteFunctional& fn, const Field3& base,
                         const ConstraintBasis* basis, const ProbeOptions& opts) {
  const LinearOp A = [&](std::span<const double> in, std::span<double> out) {
    Field3 x = fn.zeros(), y = fn.zeros();
    std::copy(in.begin(), in.end(), x.data().begin());
    fn.hessian_apply(base, x, y);
    std::copy(y.data().begin(), y.data().end(), out.begin());
  };
  const LinearOp B = [&](std::span<const double> in, std::span<double> out) {
    Field3 x = fn.zeros(), y = fn.zeros();
    std::copy(in.begin(), in.end(), x.data().begin());
    fn.norm_apply(x, y);
    std::copy(y.data().begin(), y.data().end(), out.begin());
  };
  LinearOp P;
  if (basis) P = [&](std::span<const double> in, std::span<double> out) { basis->project(fn, in, out); };
  const InnerProduct dot = [&](std::span<const double> a, std::span<const double> b) { return fn.dot(a, b); };

  // start from the ansatz amplitude modes, the dilation directions and smooth noise
  std::vector<std::vector<double>> init;
  auto push = [&](const Field3& f) { init.emplace_back(f.data().begin(), f.data().end()); };
  const std::size_t n = fn.grid().size();
  const double a = fn.params().alpha(), g = fn.params().gamma();
  Field3 t = fn.zeros();
  for (std::size_t i = 0; i < n; ++i) t.u()[i] = base.u()[i], t.v()[i] = base.v()[i];
  push(t);
  for (std::size_t i = 0; i < n; ++i) t.u()[i] = g * base.u()[i], t.v()[i] = -a * base.v()[i];
  push(t);
  t = fn.zeros();
  for (std::size_t i = 0; i < n; ++i) t.w()[i] = base.w()[i];
  push(t);
  if (basis) {
    push(basis->ring);
    push(basis->seg);
  }
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> nd;
  const int block = opts.wanted + 2;
  while (static_cast<int>(init.size()) < block) {
    Field3 r = fn.zeros();
    auto rd = r.data();
    const auto bd = base.data();
    const auto env_u = base.u();
    for (std::size_t i = 0; i < rd.size(); ++i) {
      const double env = std::abs(bd[i]) + 0.3 * std::abs(env_u[i % n]);
      rd[i] = env * nd(rng);
    }
    r.enforce_symmetry();
    push(r);
  }
  init.resize(static_cast<std::size_t>(block));

  LobpcgOptions lo;
  lo.max_iter = opts.n_iter;
  lo.tol = opts.tol;
  const auto eig = lobpcg(A, B, approx_norm_inverse(fn, opts.precond_steps), P, dot, std::move(init),
                          opts.wanted, lo);
  ProbeResult res;
  res.values = eig.values;
  res.iterations = eig.iterations;
  res.converged = eig.converged;
  res.projected = basis != nullptr;
  res.history = eig.history;
  for (const auto& v : eig.vectors) {
    Field3 f = fn.zeros();
    std::copy(v.begin(), v.end(), f.data().begin());
    res.modes.push_back(std::move(f));
  }
  res.lambda_min = res.values.front();
  res.min_abs = std::abs(res.values.front());
  for (double v : res.values) res.min_abs = std::min(res.min_abs, std::abs(v));
  if (basis) res.constraint_residuals = basis->residuals(fn, res.modes.front());
  if (!res.converged)
    throw Error(Reason::iteration_stall,
                "eigenprobe did not settle after " + std::to_string(opts.n_iter) + " iterations");
  return res;
}

Alignment near_zero_alignment(const DiscreteFunctional& fn, const ProbeResult& unprojected,
                              const ConstraintBasis& basis, double zero_tol) {
  Alignment al;
  std::size_t best = 0;
  for (std::size_t i = 0; i < unprojected.values.size(); ++i)
    if (std::abs(unprojected.values[i]) < std::abs(unprojected.values[best])) best = i;
  al.lambda = unprojected.values[best];
  const double xx = field_dot_b(fn, basis.ring, basis.ring);
  auto cos_with = [&](const Field3& m) {
    const double mm = field_dot_b(fn, m, m);
    return field_dot_b(fn, basis.ring, m) / std::sqrt(xx * mm);
  };
  al.cosine = std::abs(cos_with(unprojected.modes[best]));
  // modes are orthonormal in the energy inner product
  double s = 0.0;
  for (std::size_t i = 0; i < unprojected.values.size(); ++i)
    if (std::abs(unprojected.values[i]) <= zero_tol || i == best) {
      const double c = cos_with(unprojected.modes[i]);
      s += c * c;
      ++al.near_zero;
    }
  al.subspace_cosine = std::sqrt(std::min(1.0, s));
  return al;
}

std::vector<double> dense_spectrum(const DiscreteFunctional& fn, const Field3& base,
                                   const ConstraintBasis* basis) {
  using Eigen::MatrixXd;
  const auto w = fn.grid().stacked_weights();
  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] > 0.0) live.push_back(i);
  const auto N = static_cast<Eigen::Index>(live.size());
  MatrixXd A(N, N), B(N, N);
  Field3 e = fn.zeros(), y = fn.zeros();
  const double mult = fn.grid().multiplicity();
  for (Eigen::Index j = 0; j < N; ++j) {
    std::fill(e.data().begin(), e.data().end(), 0.0);
    e.data()[live[static_cast<std::size_t>(j)]] = 1.0;
    fn.hessian_apply(base, e, y);
    for (Eigen::Index i = 0; i < N; ++i) {
      const auto li = live[static_cast<std::size_t>(i)];
      A(i, j) = mult * w[li] * y.data()[li];
    }
    fn.norm_apply(e, y);
    for (Eigen::Index i = 0; i < N; ++i) {
      const auto li = live[static_cast<std::size_t>(i)];
      B(i, j) = mult * w[li] * y.data()[li];
    }
  }
  A = 0.5 * (A + A.transpose()).eval();
  B = 0.5 * (B + B.transpose()).eval();
  if (basis) {
    MatrixXd C(N, 2);
    for (Eigen::Index i = 0; i < N; ++i) {
      const auto li = live[static_cast<std::size_t>(i)];
      C(i, 0) = mult * w[li] * basis->c_ring.data()[li];
      C(i, 1) = mult * w[li] * basis->c_seg.data()[li];
    }
    Eigen::HouseholderQR<MatrixXd> qr(C);
    const MatrixXd Qfull = qr.householderQ();
    const MatrixXd Q = Qfull.rightCols(N - 2);
    const MatrixXd Ar = Q.transpose() * A * Q;
    const MatrixXd Br = Q.transpose() * B * Q;
    A = 0.5 * (Ar + Ar.transpose());
    B = 0.5 * (Br + Br.transpose());
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> es(A, B, Eigen::EigenvaluesOnly);
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(out.begin(), out.end());
  return out;
}

std::string to_json(const EigenprobeReport& r) {
  auto probe = [](const ProbeResult& p) {
    return nlohmann::json{{"lambda_min", p.lambda_min},
                          {"min_abs_lambda", p.min_abs},
                          {"eigenvalues", p.values},
                          {"iterations", p.iterations},
                          {"converged", p.converged},
                          {"constraint_residuals", p.constraint_residuals}};
  };
  nlohmann::json j = {{"projected", probe(r.projected)},
                      {"unprojected", probe(r.unprojected)},
                      {"near_zero", {{"lambda", r.alignment.lambda},
                                     {"cosine_with_ring_direction", r.alignment.cosine},
                                     {"subspace_cosine", r.alignment.subspace_cosine},
                                     {"modes_counted", r.alignment.near_zero}}}};
  auto head = [](const std::vector<double>& v) {
    return std::vector<double>(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(v.size(), 8)));
  };
  if (!r.dense_projected.empty()) j["dense_projected_lowest"] = head(r.dense_projected);
  if (!r.dense_unprojected.empty()) j["dense_unprojected_lowest"] = head(r.dense_unprojected);
  return j.dump(2);
}

}  // namespace synseg
