#include "synseg/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace synseg {

const GaussRule& gauss5() {
  static const GaussRule rule = [] {
    GaussRule g{};
    const double a = std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
    const double b = std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
    const double wa = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
    const double wb = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
    const double xs[5] = {-b, -a, 0.0, a, b};
    const double ws[5] = {wb, wa, 128.0 / 225.0, wa, wb};
    for (int i = 0; i < 5; ++i) {
      g.x[i] = 0.5 * (xs[i] + 1.0);
      g.w[i] = 0.5 * ws[i];
    }
    return g;
  }();
  return rule;
}

double radial_integral(const RadialProfile& p, const std::function<double(double, double)>& f,
                       double decay) {
  const auto& g = gauss5();
  double core = 0.0;
  for (std::size_t i = 0; i + 1 < p.knots.size() && p.knots[i] < p.tail_start; ++i) {
    const double a = p.knots[i];
    const double b = std::min(p.knots[i + 1], p.tail_start);
    const double len = b - a;
    double s = 0.0;
    for (int q = 0; q < GaussRule::n; ++q) {
      const double r = a + g.x[q] * len;
      s += g.w[q] * f(r, eval_profile(p, std::min(r, p.tail_start)).value);
    }
    core += s * len;
  }

  double tail = 0.0;
  const double span = 40.0 / decay;
  const int panels = static_cast<int>(std::ceil(span / 0.05));
  const double hp = span / panels;
  for (int k = 0; k < panels; ++k) {
    const double a = p.tail_start + k * hp;
    double s = 0.0;
    for (int q = 0; q < GaussRule::n; ++q) {
      const double r = a + g.x[q] * hp;
      s += g.w[q] * f(r, tail_model(p, r));
    }
    tail += s * hp;
  }
  return core + tail;
}

double radial_moment(const RadialProfile& p, double power) {
  const int d = p.dim;
  const double sphere = 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
  return sphere * radial_integral(
                      p, [&](double r, double w) { return std::pow(w, power) * std::pow(r, d - 1); },
                      power);
}

}  // namespace synseg
