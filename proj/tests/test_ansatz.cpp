#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>

#include "synseg/ansatz.hpp"
#include "synseg/reduction_solver.hpp"

using namespace synseg;
using std::numbers::pi;

namespace {
GridPtr make_grid(const PolygonConfig& cfg, double h = 0.25, double margin = 8.0) {
  return std::make_shared<const WedgeGrid>(grid_for(cfg, {h, margin, 4}));
}
}  // namespace

TEST_CASE("peak positions") {
  const auto ps = peak_positions({4, 1.0, 1.0, Parity::positive});
  CHECK(ps.S[0][0] == 1.0);
  CHECK(ps.S[0][1] == 0.0);
  CHECK(ps.T[0][0] == doctest::Approx(std::cos(pi / 4)));
  CHECK(ps.T[0][1] == doctest::Approx(std::sin(pi / 4)));

  const PolygonConfig c3{3, 7.0, 9.0, Parity::positive};
  const auto p3 = peak_positions(c3);
  double dmin = 1e9;
  for (std::size_t k = 1; k < p3.S.size(); ++k)
    dmin = std::min(dmin, std::hypot(p3.S[k][0] - p3.S[0][0], p3.S[k][1] - p3.S[0][1]));
  CHECK(dmin == doctest::Approx(2 * 7.0 * std::sin(pi / 3)));
  CHECK(ring_spacing(c3) == doctest::Approx(dmin));
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(std::hypot(p3.S[k][0], p3.S[k][1]) == doctest::Approx(7.0));
    CHECK(std::hypot(p3.T[k][0], p3.T[k][1]) == doctest::Approx(9.0));
  }
  const std::complex<double> z = 9.0 - 7.0 * std::polar(1.0, pi / 3);
  CHECK(ring_gap(c3) == doctest::Approx(std::abs(z)));
  CHECK(std::hypot(p3.S[0][0] - p3.T[0][0], p3.S[0][1] - p3.T[0][1]) == doctest::Approx(std::abs(z)));

  const auto alt = peak_positions({3, 5.0, 5.0, Parity::sign_changing});
  CHECK(alt.S.size() == 6);
  CHECK(alt.sign[0] == -1.0);
  CHECK(alt.sign[1] == 1.0);
  CHECK(radius_for_gap(3, Parity::positive, 16.0) ==
        doctest::Approx(16.0 / (2 * std::sin(pi / 6))));
}

TEST_CASE("domain box") {
  DomainBox b{2.0 / (8 * pi), 1.0, 50, 2.0};
  b.validate();
  CHECK(b.lower() < b.upper());
  CHECK(b.contains(0.3 * 50 * std::log(50.0), 0.5 * 50 * std::log(50.0)));
  CHECK_FALSE(b.contains(0.1 * 50 * std::log(50.0), 0.5 * 50 * std::log(50.0)));
  CHECK_THROWS_AS((DomainBox{1.0, 1.0, 50, 2.0}.validate()), Error);
  CHECK_THROWS_AS((DomainBox{0.01, 0.1, 50, 2.0}.validate()), Error);
}

TEST_CASE("neighbour sum bound") {
  // chords fall short of arcs, so the constant is fitted on r in [ell, 2 ell ln ell]
  double prev = INFINITY;
  for (int ell = 4; ell <= 64; ell *= 2) {
    double worst = 0.0;
    for (double r = ell; r <= 2.0 * ell * std::log(ell); r *= 1.1) {
      double s = 0.0;
      for (int k = 2; k <= ell; ++k) s += std::exp(-2 * r * std::sin((k - 1) * pi / ell));
      worst = std::max(worst, s / std::exp(-2 * pi * r / ell));
    }
    CHECK(worst <= 12.0);
    CHECK(worst < prev);
    prev = worst;
  }
}

TEST_CASE("ansatz synthesis") {
  const SystemParams sp({1, 1, 1}, 0.5, 0, 0);
  const auto& prof = default_profile();

  SUBCASE("single dominant peak") {
    const PolygonConfig cfg{1, 12.0, 12.0, Parity::positive};
    const Field3 f = synthesize_ansatz(cfg, sp, prof, make_grid(cfg, 0.2));
    const auto& g = f.grid();
    double best = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) best = std::max(best, f.u()[i]);
    CHECK(best == doctest::Approx(sp.alpha() * prof.w0()).epsilon(std::exp(-24.0) + 1e-14));
  }
  SUBCASE("grid too coarse") {
    const PolygonConfig cfg{3, 30.0, 30.0, Parity::positive};
    try {
      synthesize_ansatz(cfg, sp, prof, make_grid(cfg, 0.3));
      FAIL("expected GridTooCoarse");
    } catch (const Error& e) {
      CHECK(e.reason() == Reason::grid_too_coarse);
    }
  }
  SUBCASE("synchronization and decay") {
    const SystemParams q({2, 3, 1.5}, 1, 0, 0);
    const PolygonConfig cfg{3, 20.0, 20.0, Parity::positive};
    const Field3 f = synthesize_ansatz(cfg, q, prof, make_grid(cfg));
    const double a = std::sqrt(q.mu(0) - q.beta12()), b = std::sqrt(q.mu(1) - q.beta12());
    double defect = 0.0, ratio = 0.0;
    for (std::size_t i = 0; i < f.n(); ++i) {
      defect = std::max(defect, std::abs(a * f.u()[i] - b * f.v()[i]));
      const auto x = f.grid().point(i);
      ratio = std::max(ratio, f.u()[i] / std::exp(-0.5 * std::hypot(x[0] - 20.0, x[1], x[2])));
    }
    CHECK(defect < 1e-14);
    CHECK(ratio < 3.0);  // pointwise bound constant, fitted once
    double wmax = 0.0;
    for (double x : f.w()) wmax = std::max(wmax, x);
    CHECK(wmax == doctest::Approx(prof.w0() / std::sqrt(1.5)).epsilon(1e-6));
  }
  SUBCASE("sign-changing rotation") {
    const PolygonConfig cfg{3, 14.0, 14.0, Parity::sign_changing};
    const Field3 f = synthesize_ansatz(cfg, sp, prof, make_grid(cfg));
    const auto rc = check_rotation(f);
    CHECK(rc.max_defect == 0.0);
    for (int c = 0; c < 3; ++c) {
      CHECK(rc.min[static_cast<std::size_t>(c)] < 0.0);
      CHECK(rc.max[static_cast<std::size_t>(c)] > 0.0);
    }
  }
}
