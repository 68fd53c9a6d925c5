#include "oracles.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

namespace oracle {

using std::numbers::pi;

namespace {

// +1 if the trajectory from w(0) = a crosses zero (overshoot), -1 if it turns up first.
int classify(int dim, double a, double step, double r_end) {
  // series start avoids the 1/r singularity
  double r = step;
  double w = a + (a - a * a * a) * r * r / (2.0 * dim);
  double v = (a - a * a * a) * r / dim;
  auto rhs = [dim](double r, double w, double v, double& dw, double& dv) {
    dw = v;
    dv = -(dim - 1) / r * v + w - w * w * w;
  };
  while (r < r_end) {
    double k1w, k1v, k2w, k2v, k3w, k3v, k4w, k4v;
    rhs(r, w, v, k1w, k1v);
    rhs(r + step / 2, w + step / 2 * k1w, v + step / 2 * k1v, k2w, k2v);
    rhs(r + step / 2, w + step / 2 * k2w, v + step / 2 * k2v, k3w, k3v);
    rhs(r + step, w + step * k3w, v + step * k3v, k4w, k4v);
    w += step / 6 * (k1w + 2 * k2w + 2 * k3w + k4w);
    v += step / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
    r += step;
    if (w < 0.0) return 1;
    if (v > 0.0) return -1;
  }
  return 0;
}

}  // namespace

double shooting_w0_rk4(int dim, double step, double r_end) {
  double lo = 1.0, hi = 10.0 * (dim + 1);
  for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
    const double mid = 0.5 * (lo + hi);
    const int c = classify(dim, mid, step, r_end);
    if (c == 0) break;
    (c > 0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {
double cylinder_trapezoid(const synseg::RadialProfile& p, double d, double h) {
  // axis along y; s from -L to d + L, q from 0 to L
  const double L = 18.0;
  const int ns = static_cast<int>((d + 2 * L) / h);
  const int nq = static_cast<int>(L / h);
  double sum = 0.0;
  for (int i = 0; i <= ns; ++i) {
    const double s = -L + i * h;
    const double ws = (i == 0 || i == ns) ? 0.5 : 1.0;
    for (int j = 0; j <= nq; ++j) {
      const double q = j * h;
      const double wq = (j == nq) ? 0.5 : 1.0;
      const double a = synseg::eval_profile(p, std::hypot(s, q)).value;
      const double b = synseg::eval_profile(p, std::hypot(s - d, q)).value;
      sum += ws * wq * a * a * a * b * q;
    }
  }
  return 2.0 * pi * sum * h * h;
}
}  // namespace

double pair_integral_cylindrical(const synseg::RadialProfile& p, double d, double h) {
  // the q factor makes the trapezoid error O(h^2); one Richardson step removes it
  return (4.0 * cylinder_trapezoid(p, d, h / 2) - cylinder_trapezoid(p, d, h)) / 3.0;
}

std::vector<double> weighted_radial_eigenvalues(const synseg::RadialProfile& p, int l, double R,
                                                int n, int count) {
  const double h = R / (n + 1);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n), B = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double r = (i + 1) * h;
    const double w = synseg::eval_profile(p, r).value;
    A(i, i) = 2.0 / (h * h) + l * (l + 1) / (r * r) + 1.0;
    if (i > 0) A(i, i - 1) = A(i - 1, i) = -1.0 / (h * h);
    B(i, i) = w * w;
  }
  // W^2 degenerates in the tail, so solve B u = (1/Lambda) A u with A positive definite
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(B, A, Eigen::EigenvaluesOnly);
  std::vector<double> out;
  for (int i = 0; i < count && i < n; ++i) out.push_back(1.0 / es.eigenvalues()(n - 1 - i));
  return out;
}

double ring_energy_excess(const synseg::PolygonConfig& cfg, const synseg::SystemParams& params,
                          const synseg::RadialProfile& p, double h, double extent) {
  const auto ps = synseg::peak_positions(cfg);
  const int n = cfg.peak_count();
  const double a2 = params.alpha() * params.alpha(), g2 = params.gamma() * params.gamma();
  const double quad_sync = 0.5 * (a2 + g2);
  const double quart_sync = 0.25 * (params.mu(0) * a2 * a2 + params.mu(1) * g2 * g2 +
                                    2.0 * params.beta12() * a2 * g2);
  const double m3 = params.mu(2);
  const double quad_seg = 0.5 / m3, quart_seg = 0.25 * m3 / (m3 * m3);

  // one angular period 2 pi / n, periodic trapezoid in theta
  const double R = std::max(cfg.r, cfg.rho);
  const int nt = static_cast<int>(std::ceil(2 * pi / n * R / h));
  const double ht = 2 * pi / n / nt;
  const double rlo = std::max(0.0, std::min(cfg.r, cfg.rho) - extent), rhi = R + extent;
  const int nr = static_cast<int>(std::ceil((rhi - rlo) / h));
  const double hr = (rhi - rlo) / nr;
  const int nz = static_cast<int>(std::ceil(extent / h));
  const double hz = extent / nz;

  double total = 0.0;
#pragma omp parallel for reduction(+ : total) schedule(dynamic)
  for (int i = 0; i <= nr; ++i) {
    const double rr = rlo + i * hr;
    const double wr = (i == 0 || i == nr) ? 0.5 : 1.0;
    double acc = 0.0;
    for (int j = 0; j < nt; ++j) {
      const double th = j * ht;
      const double x = rr * std::cos(th), y = rr * std::sin(th);
      for (int k = 0; k <= nz; ++k) {
        const double z = k * hz;
        const double wz = (k == 0 || k == nz) ? 0.5 : 1.0;
        double dens = 0.0;
        for (int ring = 0; ring < 2; ++ring) {
          const auto& centres = ring == 0 ? ps.S : ps.T;
          double P = 0.0, Px = 0.0, Py = 0.0, Pz = 0.0;
          double quad = 0.0, quart = 0.0;
          for (int m = 0; m < n; ++m) {
            const double dx = x - centres[static_cast<std::size_t>(m)][0];
            const double dy = y - centres[static_cast<std::size_t>(m)][1];
            const double d = std::sqrt(dx * dx + dy * dy + z * z);
            const auto s = synseg::eval_profile(p, d);
            const double W = ps.sign[static_cast<std::size_t>(m)] * s.value;
            const double g = d > 1e-12 ? ps.sign[static_cast<std::size_t>(m)] * s.deriv / d : 0.0;
            const double Wx = g * dx, Wy = g * dy, Wz = g * z;
            quad += 2.0 * (P * W + Px * Wx + Py * Wy + Pz * Wz);
            quart += 4.0 * P * P * P * W + 6.0 * P * P * W * W + 4.0 * P * W * W * W;
            P += W;
            Px += Wx;
            Py += Wy;
            Pz += Wz;
          }
          dens += ring == 0 ? quad_sync * quad - quart_sync * quart : quad_seg * quad - quart_seg * quart;
        }
        acc += wr * wz * rr * dens;
      }
    }
    total += acc;
  }
  // z mirror and the n angular periods
  return 2.0 * n * total * hr * ht * hz;
}

double single_peak_energy(const synseg::RadialProfile& p, double mu3) {
  // Simpson on a fine radial grid out to 40
  const int n = 40000;
  const double h = 40.0 / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double r = i * h;
    const auto e = synseg::eval_profile(p, r);
    const double w = e.value / std::sqrt(mu3), dw = e.deriv / std::sqrt(mu3);
    const double f = (0.5 * (dw * dw + w * w) - 0.25 * mu3 * w * w * w * w) * r * r;
    s += f * (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0));
  }
  return 4.0 * pi * s * h / 3.0;
}

}  // namespace oracle
