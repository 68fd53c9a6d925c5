#include "synseg/reduced_energy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "synseg/quadrature.hpp"

namespace synseg {

using std::numbers::pi;

namespace {

// int_t^inf W(s) s ds for the 3D profile.
class TailMass {
 public:
  explicit TailMass(const RadialProfile& p) : p_(p) {
    if (p.dim != 3) throw Error(Reason::config_error, "pair integrals need the 3D profile");
    const auto& g = gauss5();
    std::size_t top = 0;
    while (top + 1 < p.knots.size() && p.knots[top + 1] <= p.tail_start) ++top;
    top_ = top;
    cum_.assign(top + 1, 0.0);
    cum_[top] = segment(p.knots[top], p.tail_start, g);
    for (std::size_t i = top; i-- > 0;) cum_[i] = cum_[i + 1] + segment(p.knots[i], p.knots[i + 1], g);
  }

  double operator()(double t) const {
    if (t >= p_.tail_start) return p_.tail_C * std::exp(-t);
    const auto i = std::min(static_cast<std::size_t>(t / p_.spacing()), top_);
    const double nxt = i + 1 <= top_ ? cum_[i + 1] : 0.0;
    const double hi = i + 1 <= top_ ? p_.knots[i + 1] : p_.tail_start;
    return tail_start_mass() + nxt + segment(t, hi, gauss5());
  }

 private:
  double tail_start_mass() const { return p_.tail_C * std::exp(-p_.tail_start); }
  double segment(double a, double b, const GaussRule& g) const {
    double s = 0.0;
    for (int q = 0; q < GaussRule::n; ++q) {
      const double r = a + g.x[q] * (b - a);
      s += g.w[q] * eval_profile(p_, r).value * r;
    }
    return s * (b - a);
  }

  const RadialProfile& p_;
  std::size_t top_ = 0;
  std::vector<double> cum_;  // int_{knot_i}^{tail_start} W s ds
};

double potential_term(const PotentialSpec& p, double r) {
  return p.a == 0.0 ? 0.0 : p.a / std::pow(r, p.m);
}

// sum_{k=2}^{n} sign_k e^{-d_k}/d_k over the ring of n peaks at radius r
double ring_sum(double r, int n, bool alternating) {
  double s = 0.0;
  for (int k = 2; k <= n; ++k) {
    const double d = 2.0 * r * std::sin((k - 1) * pi / n);
    const double sign = alternating && (k % 2 == 0) ? -1.0 : 1.0;
    s += sign * std::exp(-d) / d;
  }
  return s;
}

// log of the ratio of the two sides of the critical-point equation, with ell^m folded out
double phi0(double t, double m, double la) {
  return la - (m + 1.0) * std::log(t) + 2.0 * pi * t - std::log(2.0 * pi / t + 1.0 / (t * t));
}
double dphi0(double t, double m) {
  const double q = 2.0 * pi / t + 1.0 / (t * t);
  return -(m + 1.0) / t + 2.0 * pi + (2.0 * pi / (t * t) + 2.0 / (t * t * t)) / q;
}
// Minimizer of phi0 (where dphi0 changes sign), by bisection.
double phi0_argmin(double m) {
  double lo = 1e-6, hi = 1.0;
  while (dphi0(hi, m) < 0.0) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (dphi0(mid, m) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double pair_integral(const RadialProfile& profile, double d) {
  const TailMass hc(profile);
  const double inner = radial_integral(
      profile,
      [&](double r, double w) { return w * w * w * r * (hc(std::abs(d - r)) - hc(d + r)); }, 2.0);
  return 2.0 * pi / d * inner;
}

double interaction_coefficient(const RadialProfile& profile) {
  if (profile.dim != 3) throw Error(Reason::config_error, "interaction coefficient needs the 3D profile");
  const double s = radial_integral(
      profile, [](double r, double w) { return w * w * w * r * std::sinh(r); }, 2.0);
  return profile.tail_C * 4.0 * pi * s;
}

ExpansionConstants expansion_constants(const SystemParams& params, const RadialProfile& profile) {
  ExpansionConstants k;
  const double m1 = params.mu(0), m2 = params.mu(1), m3 = params.mu(2), b = params.beta12();
  const double a2 = params.alpha() * params.alpha(), g2 = params.gamma() * params.gamma();
  k.beta12 = b;
  k.moment2 = radial_moment(profile, 2);
  k.moment4 = radial_moment(profile, 4);
  k.Gamma = interaction_coefficient(profile);
  k.A0 = ((m1 + m2 - 2.0 * b) / (4.0 * (m1 * m2 - b * b)) + 1.0 / (4.0 * m3)) * k.moment4;
  k.A1 = 0.5 * k.moment2;
  k.A2 = a2 * g2 * k.Gamma / pi;
  k.A3 = (m1 * a2 * a2 + m2 * g2 * g2) * k.Gamma / (2.0 * pi);
  k.A4 = k.Gamma / (2.0 * pi * m3);
  return k;
}

std::string to_json(const ExpansionConstants& k) {
  nlohmann::json j = {{"A0", k.A0}, {"A1", k.A1}, {"A2", k.A2}, {"A3", k.A3}, {"A4", k.A4},
                      {"B1", k.B1()}, {"Gamma", k.Gamma}, {"int_W2", k.moment2},
                      {"int_W4", k.moment4}};
  return j.dump(2);
}

const char* mode_name(ExtremumMode m) { return m == ExtremumMode::maximize ? "max" : "min"; }

ExtremumMode parse_mode(const std::string& s) {
  if (s == "max" || s == "maximize") return ExtremumMode::maximize;
  if (s == "min" || s == "minimize") return ExtremumMode::minimize;
  throw Error(Reason::config_error, "mode must be max or min, got '" + s + "'");
}

double ReducedModel::sync_strength() const {
  const double a2 = params.alpha() * params.alpha(), g2 = params.gamma() * params.gamma();
  if (pots[0].m == pots[1].m) return pots[0].a * a2 + pots[1].a * g2;
  return pots[0].m < pots[1].m ? pots[0].a * a2 : pots[1].a * g2;
}

double ReducedModel::seg_strength() const { return pots[2].a / params.mu(2); }

ReducedTerms ReducedModel::terms(double r, double rho, int ell) const {
  const int n = peaks(ell);
  const bool alt = parity == Parity::sign_changing;
  const double a2 = params.alpha() * params.alpha(), g2 = params.gamma() * params.gamma();
  ReducedTerms t;
  t.leading = n * k.A0;
  t.potential = n * k.A1 *
                (a2 * potential_term(pots[0], r) + g2 * potential_term(pots[1], r) +
                 potential_term(pots[2], rho) / params.mu(2));
  if (form == InteractionForm::pair_sum) {
    t.sync = -k.B1() * pi * n * ring_sum(r, n, alt);
    t.seg = -k.A4 * pi * n * ring_sum(rho, n, alt);
  } else {
    const double s = alt ? 1.0 : -1.0;
    t.sync = s * k.B1() * std::exp(-2.0 * pi * r / n) * n * n / r;
    t.seg = s * k.A4 * std::exp(-2.0 * pi * rho / n) * n * n / rho;
  }
  return t;
}

double F(const ReducedModel& model, double r, double rho, int ell, const DomainBox& box) {
  if (!box.contains(r, rho)) {
    std::ostringstream os;
    os << "(r, rho) = (" << r << ", " << rho << ") outside [" << box.lower() << ", " << box.upper()
       << "]^2";
    throw Error(Reason::out_of_domain, os.str());
  }
  return model.terms(r, rho, ell).total();
}

double minimal_ell(double m, double a_combo, double A1, double B1) {
  const double la = std::log(m * a_combo * A1) - std::log(B1);
  return std::exp(phi0(phi0_argmin(m), m, la) / m);
}

TRoot solve_t_ell(double m, double a_combo, double A1, double B1, double ell) {
  if (!(a_combo > 0.0) || !(B1 > 0.0) || !(A1 > 0.0) || !(m > 1.0))
    throw Error(Reason::no_root, "critical-point equation needs m > 1 and positive a, A1, B1");
  const double la = std::log(m * a_combo * A1) - std::log(B1) - m * std::log(ell);
  const double tmin = phi0_argmin(m);
  if (phi0(tmin, m, la) >= 0.0) {
    std::ostringstream os;
    os << "no critical point at ell=" << ell << "; smallest admissible ell is "
       << minimal_ell(m, a_combo, A1, B1);
    throw Error(Reason::no_root, os.str());
  }
  double lo = tmin, hi = 2.0 * tmin;
  while (phi0(hi, m, la) < 0.0) hi *= 2.0;
  double t = hi;
  TRoot out;
  for (int it = 1; it <= 200; ++it) {
    const double f = phi0(t, m, la);
    (f < 0.0 ? lo : hi) = t;
    double next = t - f / dphi0(t, m);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    out.iterations = it;
    if (std::abs(next - t) <= 1e-15 * t || hi - lo <= 4e-16 * hi) {
      t = next;
      break;
    }
    t = next;
  }
  out.t = t;
  const double lhs = m * a_combo * A1 / (std::pow(t, m + 1.0) * std::pow(ell, m));
  const double rhs = B1 * std::exp(-2.0 * pi * t) * (2.0 * pi / t + 1.0 / (t * t));
  out.residual = std::abs(lhs - rhs) / lhs;
  return out;
}

DomainBox default_box(const ReducedModel& model, int ell) {
  const int n = model.peaks(ell);
  const double m = model.pots[2].m;
  DomainBox box{m / (8.0 * pi), 1.0, n, m};
  const double A1 = model.k.A1;
  double M = box.lower() / (n * std::log(static_cast<double>(n)));
  const std::pair<double, double> eqs[2] = {{std::abs(model.sync_strength()), model.k.B1()},
                                            {std::abs(model.seg_strength()), model.k.A4}};
  for (const auto& [a, B] : eqs) {
    try {
      const double t = solve_t_ell(m, a, A1, B, n).t;
      const double g1 = a * A1 / std::pow(n * t, m) - B * std::exp(-2.0 * pi * t) / t;
      const double C1 = 0.5 * g1 * std::pow(n * std::log(static_cast<double>(n)), m);
      double cand = 1.0 / 16.0;
      while (!(a * A1 < C1 * std::pow(cand, m)) || !(cand > m / (2.0 * pi) - box.delta)) cand *= 2.0;
      M = std::max(M, cand);
    } catch (const Error&) {
      M = std::max(M, 1.0);
    }
  }
  box.M_big = M;
  return box;
}

LandscapeSample find_extremum(const ReducedModel& model, int ell, ExtremumMode mode,
                              const LandscapeOptions& opts) {
  const Hypothesis h = classify_hypothesis(model.params, model.pots);
  const bool wants_max = h == Hypothesis::Hm_i || h == Hypothesis::Hm_ii;
  const bool wants_min = h == Hypothesis::Htilde_iii || h == Hypothesis::Htilde_iv;
  if ((mode == ExtremumMode::maximize && !wants_max) || (mode == ExtremumMode::minimize && !wants_min))
    throw Error(Reason::config_error, std::string("potentials satisfy ") + hypothesis_name(h) +
                                          ", which does not support mode " + mode_name(mode));
  LandscapeSample s;
  s.ell = ell;
  s.mode = mode;
  s.box = opts.box ? *opts.box : default_box(model, ell);
  s.box.validate();
  const double lo = s.box.lower(), hi = s.box.upper();
  const double sgn = mode == ExtremumMode::maximize ? 1.0 : -1.0;
  const int G = std::max(opts.grid, 64);
  s.r.resize(static_cast<std::size_t>(G));
  for (int i = 0; i < G; ++i) s.r[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (G - 1);
  s.rho = s.r;
  s.excess.resize(static_cast<std::size_t>(G * G));
#pragma omp parallel for schedule(static)
  for (int i = 0; i < G; ++i)
    for (int j = 0; j < G; ++j)
      s.excess[static_cast<std::size_t>(i * G + j)] =
          model.terms(s.r[static_cast<std::size_t>(i)], s.rho[static_cast<std::size_t>(j)], ell).excess();
  s.leading = model.peaks(ell) * model.k.A0;

  int bi = 0, bj = 0;
  for (int i = 0; i < G; ++i)
    for (int j = 0; j < G; ++j)
      if (sgn * s.excess[static_cast<std::size_t>(i * G + j)] > sgn * s.excess[static_cast<std::size_t>(bi * G + bj)]) {
        bi = i;
        bj = j;
      }
  const bool coarse_edge = bi == 0 || bj == 0 || bi == G - 1 || bj == G - 1;

  double cr = s.r[static_cast<std::size_t>(bi)], cp = s.rho[static_cast<std::size_t>(bj)];
  double hw = (hi - lo) / (G - 1);
  double best = sgn * model.terms(cr, cp, ell).excess();
  for (int round = 0; round < opts.refine_rounds; ++round) {
    const double r0 = cr, p0 = cp;
    for (int a = -4; a <= 4; ++a)
      for (int b = -4; b <= 4; ++b) {
        const double r = std::clamp(r0 + a * hw / 4.0, lo, hi);
        const double p = std::clamp(p0 + b * hw / 4.0, lo, hi);
        const double v = sgn * model.terms(r, p, ell).excess();
        if (v > best) {
          best = v;
          cr = r;
          cp = p;
        }
      }
    hw *= 0.5;
  }
  s.best_r = cr;
  s.best_rho = cp;
  s.best = model.terms(cr, cp, ell);
  const double n = model.peaks(ell);
  const double scale = n * std::log(n);
  s.margin = std::min({cr - lo, hi - cr, cp - lo, hi - cp}) / scale;
  s.interior = !coarse_edge && s.margin > 1e-9 * (hi - lo) / scale;

  double band = 0.0;
  const double radii[3] = {cr, cr, cp};
  for (int c = 0; c < 3; ++c) {
    const auto& p = model.pots[static_cast<std::size_t>(c)];
    if (p.a != 0.0) band += n * model.k.A1 * std::abs(p.a) / std::pow(radii[c], p.m + p.sigma);
  }
  band += std::abs(s.best.sync) * n / cr + std::abs(s.best.seg) * n / cp;
  s.error_band = band;
  PolygonConfig cfg{ell, cr, cp, model.parity};
  const double gap = ring_gap(cfg);
  s.cross_scale_1 = std::exp(-gap) * n * n / cr;
  s.cross_scale_2 = std::exp(-2.0 * gap) * n * n / cr;

  if (!s.interior && !opts.allow_boundary) {
    std::ostringstream os;
    os << "extremum at (r, rho) = (" << cr << ", " << cp << ") lies on the edge of ["
       << lo << ", " << hi << "]^2";
    throw Error(Reason::boundary_extremum, os.str());
  }
  return s;
}

void write_landscape_csv(const LandscapeSample& s, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw Error(Reason::io_error, "cannot write " + path);
  std::fputs("r,rho,F,F_minus_leading\n", f);
  const std::size_t G = s.r.size();
  for (std::size_t i = 0; i < G; ++i)
    for (std::size_t j = 0; j < G; ++j) {
      const double e = s.excess[i * G + j];
      std::fprintf(f, "%.17g,%.17g,%.17g,%.17g\n", s.r[i], s.rho[j], s.leading + e, e);
    }
  std::fclose(f);
}

std::string to_json(const LandscapeSample& s) {
  const double n = s.box.ell;
  nlohmann::json j = {
      {"ell", s.ell},
      {"peaks_per_ring", s.box.ell},
      {"mode", mode_name(s.mode)},
      {"box", {{"delta", s.box.delta}, {"M", s.box.M_big}, {"m", s.box.m}, {"lower", s.box.lower()},
               {"upper", s.box.upper()}}},
      {"r", s.best_r},
      {"rho", s.best_rho},
      {"r_over_n_ln_n", s.best_r / (n * std::log(n))},
      {"rho_over_n_ln_n", s.best_rho / (n * std::log(n))},
      {"F", s.best.total()},
      {"F_minus_leading", s.best.excess()},
      {"terms", {{"leading", s.best.leading}, {"potential", s.best.potential},
                 {"sync_interaction", s.best.sync}, {"seg_interaction", s.best.seg}}},
      {"interior", s.interior},
      {"margin", s.margin},
      {"error_band", s.error_band},
      {"cross_scale_exp_gap", s.cross_scale_1},
      {"cross_scale_exp_2gap", s.cross_scale_2}};
  return j.dump(2);
}

}  // namespace synseg
