#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "synseg/ansatz.hpp"
#include "synseg/quadrature.hpp"

using namespace synseg;
using std::numbers::pi;

namespace {

// Simpson rule on [0, 40], independent of the Gauss panels
double simpson_moment(const RadialProfile& p, double power) {
  const int n = 80000;
  const double h = 40.0 / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double r = i * h;
    const double f = std::pow(eval_profile(p, r).value, power) * r * r;
    s += f * (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0));
  }
  return 4.0 * pi * s * h / 3.0;
}

double peak_integral(double h, double power, int ell = 1) {
  const PolygonConfig cfg{ell, 16.0, 16.0, Parity::positive};
  const auto g = std::make_shared<const WedgeGrid>(grid_for(cfg, {h, 9.0, 4}));
  std::vector<double> d(g->size());
  for (std::size_t i = 0; i < g->size(); ++i) {
    const auto x = g->point(i);
    d[i] = std::pow(eval_profile(default_profile(), std::hypot(x[0] - 16.0, x[1], x[2])).value, power);
  }
  return g->integrate(d) / ell;
}

}  // namespace

TEST_CASE("radial moments") {
  const auto p1 = solve_ground_state(1, 3, 1e-10, 20);
  CHECK(radial_moment(p1, 2) == doctest::Approx(4.0).epsilon(1e-8));
  const auto& p = default_profile();
  for (double k : {2.0, 3.0, 4.0}) {
    const double a = radial_moment(p, k), b = simpson_moment(p, k);
    CHECK(a > 0.0);
    CHECK(std::abs(a - b) / b < 1e-8);
  }
  CHECK(radial_moment(p, 2) == doctest::Approx(18.8972513).epsilon(1e-8));
  CHECK(radial_moment(p, 4) == doctest::Approx(75.58900522).epsilon(1e-8));
}

TEST_CASE("radial integral of a closed form") {
  // int_0^inf e^{-r} dr with the tail panels
  const double v = radial_integral(default_profile(), [](double r, double) { return std::exp(-r); }, 1.0);
  CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("grid integration") {
  const double m2 = radial_moment(default_profile(), 2);
  CHECK(std::abs(peak_integral(0.2, 2) / m2 - 1.0) < 5e-3);

  const auto g = std::make_shared<const WedgeGrid>(grid_for({1, 16.0, 16.0, Parity::positive}, {0.2, 8.0, 4}));
  std::vector<double> zero(g->size(), 0.0);
  CHECK(g->integrate(zero) == 0.0);

  const double m4 = radial_moment(default_profile(), 4);
  const double c = peak_integral(0.25, 4), f = peak_integral(0.125, 4);
  CHECK(f > 0.0);
  CHECK(std::abs(c - f) / f < 2e-3);
  // error shrinks at least threefold when h halves
  const double e1 = std::abs(peak_integral(0.25, 2) / m2 - 1.0);
  const double e2 = std::abs(peak_integral(0.125, 2) / m2 - 1.0);
  CHECK(e1 / e2 >= 3.0);
  CHECK(std::abs(f / m4 - 1.0) < 1e-3);
}

TEST_CASE("wedge multiplicity") {
  // rotation-invariant density: the wedge for ell = 4 against the half-plane for ell = 1
  auto annulus = [](int ell) {
    const auto g = std::make_shared<const WedgeGrid>(grid_for({ell, 12.0, 12.0, Parity::positive}, {0.2, 6.0, 4}));
    std::vector<double> d(g->size());
    for (std::size_t i = 0; i < g->size(); ++i) {
      const auto x = g->point(i);
      const double r = std::hypot(x[0], x[1]);
      d[i] = std::exp(-(r - 12.0) * (r - 12.0) - x[2] * x[2]);
    }
    return g->integrate(d);
  };
  const double a = annulus(4), b = annulus(1);
  CHECK(std::abs(a / b - 1.0) < 1e-3);
  CHECK(a == doctest::Approx(2 * pi * 12.0 * pi).epsilon(1e-3));
}
