#pragma once
#include <functional>

#include "synseg/ground_state.hpp"

namespace synseg {

// Integral over R^d of w^power, i.e. |S^{d-1}| * int_0^inf w(r)^power r^{d-1} dr,
// with the tail beyond tail_start integrated from the tail model.
double radial_moment(const RadialProfile& p, double power);

// int_0^inf f(r, w(r)) dr, piecewise Gauss on the knots and on tail panels spanning
// 40 / decay beyond tail_start (decay: exponential rate of the integrand in the tail).
double radial_integral(const RadialProfile& p, const std::function<double(double, double)>& f,
                       double decay);

// Fifth-order Gauss-Legendre nodes and weights on [0, 1].
struct GaussRule {
  static constexpr int n = 5;
  double x[n];
  double w[n];
};
const GaussRule& gauss5();

}  // namespace synseg
