#include "synseg/ground_state.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace synseg {
namespace {

// Extended precision lets the two bracket solutions agree far enough into the tail.
using Real = long double;
using State = std::array<Real, 2>;

struct RadialOde {
  int dim;
  Real power;
  State operator()(Real r, const State& y) const {
    const Real w = y[0], dw = y[1];
    const Real nl = std::pow(std::abs(w), power - 1) * w;
    return {dw, -(dim - 1) / r * dw + w - nl};
  }
};

// Dormand-Prince 5(4) with local extrapolation.
class Dopri5 {
 public:
  Dopri5(RadialOde f, Real rtol, Real atol, Real max_step)
      : f_(f), rtol_(rtol), atol_(atol), max_step_(max_step) {}

  // Advance y from r to r_end exactly; returns false if a step underflows.
  template <class Stop>
  bool advance(Real& r, State& y, Real r_end, Real& h, Stop&& stop) const {
    while (r < r_end) {
      h = std::min({h, max_step_, r_end - r});
      if (h < 1e-16L) return false;
      State y5, err;
      step(r, y, h, y5, err);
      Real e = 0;
      for (int i = 0; i < 2; ++i) {
        const Real sc = atol_ + rtol_ * std::max(std::abs(y[i]), std::abs(y5[i]));
        e = std::max(e, std::abs(err[i]) / sc);
      }
      if (e <= 1.0) {
        r = (r_end - r - h < 1e-18L * r_end) ? r_end : r + h;
        y = y5;
        if (stop(r, y)) return true;
      }
      const Real fac = e == 0 ? Real(5) : std::clamp(Real(0.9) * std::pow(e, Real(-0.2)), Real(0.2), Real(5));
      h *= fac;
    }
    return true;
  }

 private:
  void step(Real r, const State& y, Real h, State& out, State& err) const {
    static constexpr Real c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr Real a21 = 1.0 / 5;
    static constexpr Real a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr Real a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr Real a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr Real a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr Real b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr Real e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    auto comb = [&](std::initializer_list<std::pair<Real, const State*>> terms) {
      State s = y;
      for (auto [c, k] : terms)
        for (int i = 0; i < 2; ++i) s[i] += h * c * (*k)[i];
      return s;
    };
    const State k1 = f_(r, y);
    const State k2 = f_(r + c2 * h, comb({{a21, &k1}}));
    const State k3 = f_(r + c3 * h, comb({{a31, &k1}, {a32, &k2}}));
    const State k4 = f_(r + c4 * h, comb({{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const State k5 = f_(r + c5 * h, comb({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const State k6 =
        f_(r + h, comb({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    out = comb({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const State k7 = f_(r + h, out);
    for (int i = 0; i < 2; ++i)
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
  }

  RadialOde f_;
  Real rtol_, atol_, max_step_;
};

State series_start(int d, Real p, Real w0, Real r0) {
  const Real c2 = (w0 - std::pow(w0, p)) / (2 * d);
  const Real c4 = (1 - p * std::pow(w0, p - 1)) * c2 / (4 * (d + 2));
  const Real r2 = r0 * r0;
  return {w0 + c2 * r2 + c4 * r2 * r2, 2.0 * c2 * r0 + 4.0 * c4 * r2 * r0};
}

enum class Shot { undershoot, overshoot };

Shot classify(const Dopri5& ode, int d, Real p, Real w0, Real r0, Real r_cap) {
  Real r = r0, h = 1e-3L;
  State y = series_start(d, p, w0, r0);
  int verdict = 0;
  ode.advance(r, y, r_cap, h, [&](Real, const State& s) {
    if (s[0] < 0.0) verdict = 1;
    else if (s[1] > 0.0) verdict = -1;
    return verdict != 0;
  });
  return verdict == 1 ? Shot::overshoot : Shot::undershoot;
}

// Decaying solution of the linearized radial equation, r^{1-d/2} K_{d/2-1}(r), and its derivative.
std::pair<double, double> decaying_mode(int d, double r) {
  if (d == 1) return {std::exp(-r), -std::exp(-r)};
  if (d == 3) {
    const double g = std::exp(-r) / r;
    return {g, -g * (1.0 + 1.0 / r)};
  }
  const double nu = 0.5 * d - 1.0;
  const double s = std::pow(r, -nu);
  return {s * std::cyl_bessel_k(nu, r), -s * std::cyl_bessel_k(nu + 1.0, r)};
}

}  // namespace

RadialProfile solve_ground_state(int dim, double power, double tol, double r_max,
                                 const ShootingOptions& opts) {
  if (dim < 1) throw Error(Reason::config_error, "dimension must be positive");
  const double crit = dim <= 2 ? INFINITY : (dim + 2.0) / (dim - 2.0);
  if (!(power > 1.0) || !(power < crit))
    throw Error(Reason::config_error, "power outside the subcritical range");
  if (!(tol > 0.0) || tol > 1e-4) throw Error(Reason::config_error, "tol must lie in (0, 1e-4]");

  const RadialOde f{dim, power};
  const Dopri5 ode(f, opts.rtol, opts.atol, opts.max_step);
  const Real r0 = opts.start_radius;
  const Real r_cap = std::max(r_max, 80.0);

  Real lo = 1, hi = 10 * (dim + 1);
  if (classify(ode, dim, power, lo, r0, r_cap) != Shot::undershoot ||
      classify(ode, dim, power, hi, r0, r_cap) != Shot::overshoot) {
    throw Error(Reason::bracket_failure, "shooting functional has no sign change on [1, 10(d+1)]");
  }
  // Bisect to the resolution limit, which is always below tol.
  for (;;) {
    const Real mid = (lo + hi) / 2;
    if (!(mid > lo && mid < hi)) break;
    if (classify(ode, dim, power, mid, r0, r_cap) == Shot::overshoot) hi = mid;
    else lo = mid;
  }

  RadialProfile prof;
  prof.dim = dim;
  prof.power = power;
  prof.shoot_lo = static_cast<double>(lo);
  prof.shoot_hi = static_cast<double>(hi);

  const double dr = opts.knot_spacing;
  const std::size_t n = static_cast<std::size_t>(std::floor(r_max / dr + 1e-9)) + 1;
  prof.knots.resize(n);
  for (std::size_t i = 0; i < n; ++i) prof.knots[i] = static_cast<double>(i) * dr;
  prof.values.assign(n, 0.0);
  prof.derivs.assign(n, 0.0);
  const double w0 = static_cast<double>((lo + hi) / 2);
  prof.values[0] = w0;

  // March both bracket solutions; keep knots while they agree.
  State ylo = series_start(dim, power, lo, r0), yhi = series_start(dim, power, hi, r0);
  Real rl = r0, rh = r0, hl = 1e-3L, hh = 1e-3L;
  std::size_t last = 0;
  auto no_stop = [](Real, const State&) { return false; };
  for (std::size_t i = 1; i < n; ++i) {
    const Real target = prof.knots[i];
    ode.advance(rl, ylo, target, hl, no_stop);
    ode.advance(rh, yhi, target, hh, no_stop);
    const Real wm = (ylo[0] + yhi[0]) / 2;
    const bool agree = std::abs(ylo[0] - yhi[0]) <= 1e-9L * std::abs(wm);
    const bool shape = ylo[0] > 0 && yhi[0] > 0 && ylo[1] < 0 && yhi[1] < 0;
    if (!agree || !shape) break;
    prof.values[i] = static_cast<double>(wm);
    prof.derivs[i] = static_cast<double>((ylo[1] + yhi[1]) / 2);
    last = i;
  }
  if (last + 1 < 8) throw Error(Reason::non_decay, "shooting solutions separate immediately");

  prof.match_radius = prof.knots[last];
  if (last + 1 < n) {
    const auto [g_m, dg_m] = decaying_mode(dim, prof.match_radius);
    const double scale = prof.values[last] / g_m;
    for (std::size_t i = last + 1; i < n; ++i) {
      const auto [g, dg] = decaying_mode(dim, prof.knots[i]);
      prof.values[i] = scale * g;
      prof.derivs[i] = scale * dg;
    }
  }

  const double thresh = opts.tail_fraction * w0;
  auto it = std::find_if(prof.values.begin(), prof.values.end(),
                         [&](double v) { return v < thresh; });
  if (it == prof.values.end() || it == prof.values.end() - 1) {
    std::ostringstream os;
    os << "profile stays above " << opts.tail_fraction << "*w(0) up to R_max=" << r_max;
    throw Error(Reason::non_decay, os.str());
  }
  prof.tail_start = prof.knots[static_cast<std::size_t>(it - prof.values.begin())];

  const std::size_t first = n - std::max<std::size_t>(2, n / 10);
  double acc = 0.0;
  for (std::size_t i = first; i < n; ++i) {
    const double r = prof.knots[i];
    acc += std::log(prof.values[i] * std::pow(r, 0.5 * (dim - 1))) + r;
  }
  prof.tail_C = std::exp(acc / static_cast<double>(n - first));
  return prof;
}

double tail_model(const RadialProfile& p, double r) {
  return p.tail_C * std::pow(r, 0.5 * (1 - p.dim)) * std::exp(-r);
}

ProfileSample eval_profile(const RadialProfile& p, double r) {
  if (r > p.tail_start) {
    const double v = tail_model(p, r);
    return {v, v * (-1.0 + 0.5 * (1 - p.dim) / r)};
  }
  const double dr = p.spacing();
  std::size_t i = static_cast<std::size_t>(r / dr);
  if (i + 1 < p.knots.size() && p.knots[i + 1] <= r) ++i;
  if (i > 0 && p.knots[i] > r) --i;
  if (i + 1 >= p.knots.size()) i = p.knots.size() - 2;
  const double t = (r - p.knots[i]) / dr;
  const double t2 = t * t, t3 = t2 * t;
  const double y0 = p.values[i], y1 = p.values[i + 1];
  const double m0 = p.derivs[i] * dr, m1 = p.derivs[i + 1] * dr;
  const double value = (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * m0 +
                       (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * m1;
  const double deriv = ((6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * m0 +
                        (-6 * t2 + 6 * t) * y1 + (3 * t2 - 2 * t) * m1) /
                       dr;
  return {value, deriv};
}

double scaled_w(const RadialProfile& p, double mu3, double r) {
  return eval_profile(p, r).value / std::sqrt(mu3);
}

double ode_residual_sup(const RadialProfile& p) {
  static constexpr std::array<double, 3> c{3.0 / 4, -3.0 / 20, 1.0 / 60};
  const double dr = p.spacing();
  const std::size_t n = p.knots.size();
  auto deriv_at = [&](long j) {
    return j < 0 ? -p.derivs[static_cast<std::size_t>(-j)] : p.derivs[static_cast<std::size_t>(j)];
  };
  double sup = 0.0;
  for (std::size_t i = 0; i + 3 < n; ++i) {
    const long li = static_cast<long>(i);
    double d2 = 0.0;
    for (int k = 1; k <= 3; ++k) d2 += c[k - 1] * (deriv_at(li + k) - deriv_at(li - k));
    d2 /= dr;
    const double w = p.values[i];
    const double lap = i == 0 ? p.dim * d2 : d2 + (p.dim - 1) / p.knots[i] * p.derivs[i];
    sup = std::max(sup, std::abs(lap - w + std::pow(w, p.power)));
  }
  return sup;
}

const RadialProfile& default_profile() {
  static const RadialProfile prof = solve_ground_state(3, 3.0, 1e-10, 25.0);
  return prof;
}

}  // namespace synseg
