#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <omp.h>

#include <cmath>
#include <random>

#include "synseg/kernels.hpp"

using namespace synseg;

namespace {

WedgeGrid make_grid(Parity parity, int order, double h = 0.2) {
  GridDescriptor d;
  d.spacing = h;
  d.ell = 4;
  d.parity = parity;
  d.rho_in = 5.0;
  d.rho_out = 15.0;
  d.z_top = 6.0;
  d.arc_radius = 10.0;
  d.order = order;
  return WedgeGrid(d);
}

std::vector<double> noise(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

double max_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("parallel kernels match the serial reference") {
  omp_set_num_threads(4);
  const WedgeGrid g = make_grid(Parity::sign_changing, 8);
  const std::size_t n = g.size();
  const auto a = noise(n, 1), b = noise(n, 2), w = noise(n, 3);

  CHECK(kernels::weighted_dot(w, a, b) == doctest::Approx(kernels::weighted_dot_serial(w, a, b)).epsilon(1e-12));
  CHECK(kernels::weighted_sum(w, a) == doctest::Approx(kernels::weighted_sum_serial(w, a)).epsilon(1e-12));

  for (int c = 0; c < 3; ++c) {
    const auto s = component_symmetry(Parity::sign_changing, c);
    std::vector<double> p(n), q(n);
    kernels::neg_laplacian(g, s, a, p);
    kernels::neg_laplacian_serial(g, s, a, q);
    double scale = 0.0;
    for (double x : q) scale = std::max(scale, std::abs(x));
    CHECK(max_diff(p, q) <= 1e-13 * scale);
  }

  const kernels::Couplings cp{{1.0, 2.0, 0.5}, 0.3, -0.1, 0.2};
  const auto uvw = noise(3 * n, 4), d = noise(3 * n, 5), pot = noise(3 * n, 6);
  std::vector<double> p(3 * n), q(3 * n);
  kernels::local_gradient(cp, pot, uvw, p);
  kernels::local_gradient_serial(cp, pot, uvw, q);
  CHECK(max_diff(p, q) == 0.0);
  kernels::local_hessian(cp, pot, uvw, d, p);
  kernels::local_hessian_serial(cp, pot, uvw, d, q);
  CHECK(max_diff(p, q) == 0.0);

  const std::array<kernels::Peak, 2> peaks{kernels::Peak{{10.0, 0.0, 0.0}, 1.5},
                                          kernels::Peak{{9.0, 3.0, 0.0}, -0.5}};
  auto f = [](double r) { return std::exp(-r); };
  std::vector<double> x(n, 0.0), y(n, 0.0);
  kernels::add_peaks(g, std::span<const kernels::Peak>(peaks), f, std::span<double>(x));
  kernels::add_peaks_serial(g, std::span<const kernels::Peak>(peaks), f, std::span<double>(y));
  CHECK(max_diff(x, y) < 1e-15);
}

TEST_CASE("reductions do not depend on the thread count") {
  const WedgeGrid g = make_grid(Parity::positive, 4);
  const auto a = noise(g.size(), 7), w = noise(g.size(), 8);
  omp_set_num_threads(1);
  const double one = kernels::weighted_dot(w, a, a);
  omp_set_num_threads(3);
  const double three = kernels::weighted_dot(w, a, a);
  omp_set_num_threads(4);
  CHECK(one == three);
}

TEST_CASE("local gradient formula") {
  const kernels::Couplings cp{{1.0, 2.0, 3.0}, 0.5, 0.25, -0.75};
  const std::vector<double> pot{1.5, 1.5, 1.5}, uvw{0.3, -0.7, 1.1};
  std::vector<double> out(3);
  kernels::local_gradient_serial(cp, pot, uvw, out);
  const double u = 0.3, v = -0.7, w = 1.1;
  CHECK(out[0] == doctest::Approx(1.5 * u - u * u * u - 0.5 * u * v * v - 0.25 * u * w * w));
  CHECK(out[1] == doctest::Approx(1.5 * v - 2 * v * v * v - 0.5 * v * u * u + 0.75 * v * w * w));
  CHECK(out[2] == doctest::Approx(1.5 * w - 3 * w * w * w - 0.25 * w * u * u + 0.75 * w * v * v));
  // Hessian is the derivative of the gradient
  const std::vector<double> d{0.2, 0.1, -0.4};
  std::vector<double> hd(3), gp(3), gm(3);
  kernels::local_hessian_serial(cp, pot, uvw, d, hd);
  const double eps = 1e-6;
  std::vector<double> up(3), um(3);
  for (int i = 0; i < 3; ++i) {
    up[static_cast<std::size_t>(i)] = uvw[static_cast<std::size_t>(i)] + eps * d[static_cast<std::size_t>(i)];
    um[static_cast<std::size_t>(i)] = uvw[static_cast<std::size_t>(i)] - eps * d[static_cast<std::size_t>(i)];
  }
  kernels::local_gradient_serial(cp, pot, up, gp);
  kernels::local_gradient_serial(cp, pot, um, gm);
  for (int i = 0; i < 3; ++i)
    CHECK(hd[static_cast<std::size_t>(i)] ==
          doctest::Approx((gp[static_cast<std::size_t>(i)] - gm[static_cast<std::size_t>(i)]) / (2 * eps)).epsilon(1e-8));
}

TEST_CASE("discrete Laplacian converges at the stencil order") {
  // Gaussian well inside the wedge
  auto err_for = [](int order, double h) {
    const WedgeGrid g = make_grid(Parity::positive, order, h);
    std::vector<double> f(g.size()), out(g.size());
    const std::array<double, 3> c{10.0, 0.0, 0.0};
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto x = g.point(i);
      const double s2 = std::pow(x[0] - c[0], 2) + std::pow(x[1] - c[1], 2) + x[2] * x[2];
      f[i] = std::exp(-s2);
    }
    kernels::neg_laplacian_serial(g, {}, f, out);
    double e = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto x = g.point(i);
      const double s2 = std::pow(x[0] - c[0], 2) + std::pow(x[1] - c[1], 2) + x[2] * x[2];
      e = std::max(e, std::abs(out[i] - (6.0 - 4.0 * s2) * std::exp(-s2)));
    }
    return e;
  };
  for (int order : {2, 4}) {
    const double e1 = err_for(order, 0.2), e2 = err_for(order, 0.1);
    const double rate = std::log2(e1 / e2);
    CHECK_MESSAGE(rate > order - 0.5, "order " << order << " rate " << rate);
  }
  CHECK(err_for(8, 0.15) < err_for(4, 0.15));
}

TEST_CASE("symmetric operator in the weighted inner product") {
  for (Parity par : {Parity::positive, Parity::sign_changing}) {
    const WedgeGrid g = make_grid(par, 6);
    for (int c = 0; c < 3; ++c) {
      const auto s = component_symmetry(par, c);
      const auto w = g.weights(s);
      auto a = noise(g.size(), 11), b = noise(g.size(), 12);
      for (std::size_t i = 0; i < g.size(); ++i)
        if (w[i] == 0.0) a[i] = b[i] = 0.0;
      std::vector<double> la(g.size()), lb(g.size());
      kernels::neg_laplacian(g, s, a, la);
      kernels::neg_laplacian(g, s, b, lb);
      const double x = kernels::weighted_dot(w, la, b), y = kernels::weighted_dot(w, a, lb);
      CHECK(x == doctest::Approx(y).epsilon(1e-10));
      CHECK(kernels::weighted_dot(w, la, a) > 0.0);
    }
  }
}
