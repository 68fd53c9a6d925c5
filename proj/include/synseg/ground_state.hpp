#pragma once
#include <vector>

#include "synseg/error.hpp"

namespace synseg {

struct ShootingOptions {
  double rtol = 1e-14;
  double atol = 1e-18;
  double max_step = 0.05;
  double knot_spacing = 0.005;
  double start_radius = 1e-3;
  double tail_fraction = 1e-4;  // tail model takes over once w < tail_fraction * w(0)
};

// Tabulated positive radial solution of w'' + (d-1)/r w' - w + w^p = 0.
struct RadialProfile {
  int dim = 3;
  double power = 3.0;
  std::vector<double> knots;
  std::vector<double> values;
  std::vector<double> derivs;
  double tail_C = 0.0;
  double tail_start = 0.0;
  // Bisection certificate: lo undershoots, hi overshoots.
  double shoot_lo = 0.0;
  double shoot_hi = 0.0;
  // Radius where the shooting solution is continued by the decaying linear solution.
  double match_radius = 0.0;

  double w0() const { return values.front(); }
  double spacing() const { return knots[1] - knots[0]; }
  double r_max() const { return knots.back(); }
};

RadialProfile solve_ground_state(int dim, double power, double tol, double r_max,
                                 const ShootingOptions& opts = {});

struct ProfileSample {
  double value;
  double deriv;
};

ProfileSample eval_profile(const RadialProfile& p, double r);
double tail_model(const RadialProfile& p, double r);
double scaled_w(const RadialProfile& p, double mu3, double r);

// Sup over knots of |w'' + (d-1)/r w' - w + w^p| with w'' from a sixth-order stencil on w'.
double ode_residual_sup(const RadialProfile& p);

// Shared default 3D cubic ground state, solved once per process.
const RadialProfile& default_profile();

}  // namespace synseg
