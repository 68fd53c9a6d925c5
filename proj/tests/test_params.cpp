#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "synseg/params.hpp"

using namespace synseg;

TEST_CASE("sync amplitudes") {
  auto a = derive_sync_coefficients(1, 1, 0);
  CHECK(a.alpha == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(a.gamma == doctest::Approx(1.0).epsilon(1e-15));

  a = derive_sync_coefficients(1, 1, 0.5);
  CHECK(a.alpha == doctest::Approx(0.8164966).epsilon(1e-7));
  CHECK(a.alpha == a.gamma);

  a = derive_sync_coefficients(2, 3, 1);
  CHECK(a.alpha == doctest::Approx(std::sqrt(0.4)).epsilon(1e-14));
  CHECK(a.gamma == doctest::Approx(std::sqrt(0.2)).epsilon(1e-14));
}

TEST_CASE("amplitude identities and scaling") {
  for (auto [m1, m2, b] : {std::array<double, 3>{1, 1, 0.5}, {2, 3, 1}, {1, 2, -1.2}, {1, 2, 3.5}}) {
    const auto a = derive_sync_coefficients(m1, m2, b);
    const double det = m1 * m2 - b * b;
    CHECK(a.alpha * a.alpha * det == doctest::Approx(m2 - b).epsilon(1e-12));
    CHECK(a.gamma * a.gamma * det == doctest::Approx(m1 - b).epsilon(1e-12));
    for (double t : {0.25, 3.0}) {
      const auto s = derive_sync_coefficients(t * m1, t * m2, t * b);
      CHECK(s.alpha == doctest::Approx(a.alpha / std::sqrt(t)).epsilon(1e-13));
      CHECK(s.gamma == doctest::Approx(a.gamma / std::sqrt(t)).epsilon(1e-13));
    }
  }
}

TEST_CASE("inadmissible couplings") {
  for (double b : {-1.0, 1.0, -1.5, 1.0 + 1e-16}) {
    CHECK_FALSE(coupling_admissible(1, 1, b));
    try {
      derive_sync_coefficients(1, 1, b);
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.reason() == Reason::inadmissible_coupling);
    }
  }
  CHECK_FALSE(coupling_admissible(2, 3, 2.5));
  CHECK_FALSE(coupling_admissible(2, 3, 3.0));
  CHECK(coupling_admissible(2, 3, 3.01));
  CHECK_THROWS_AS(SystemParams({1, -1, 1}, 0, 0, 0), Error);
}

TEST_CASE("potential spec") {
  PotentialSpec p{.a = -3.0, .m = 2.0, .r_cut = 2.0};
  p.validate();
  CHECK(p(0.5) == 0.0);
  CHECK(p(4.0) == doctest::Approx(1.0 - 3.0 / 16));
  PotentialSpec q{.a = 2.0, .m = 2.0};
  CHECK(q(0.1) == 3.0);
  CHECK(PotentialSpec{}(7.0) == 1.0);
  CHECK_THROWS_AS((PotentialSpec{.a = 1, .m = 1.0}.validate()), Error);
  CHECK_THROWS_AS((PotentialSpec{.a = -5, .m = 2, .r_cut = 1}.validate()), Error);
}

TEST_CASE("hypothesis classification") {
  const SystemParams p({1, 1, 1}, 0, 0, 0);
  auto pots = [](std::array<double, 3> a, std::array<double, 3> m) {
    Potentials out;
    for (int j = 0; j < 3; ++j) out[static_cast<std::size_t>(j)] = PotentialSpec{.a = a[static_cast<std::size_t>(j)], .m = m[static_cast<std::size_t>(j)]};
    return out;
  };
  CHECK(classify_hypothesis(p, pots({1, 1, 1}, {2, 2, 2})) == Hypothesis::Hm_ii);
  CHECK(classify_hypothesis(p, pots({1, -5, 1}, {2, 3, 2})) == Hypothesis::Hm_i);
  CHECK(classify_hypothesis(p, pots({-1, -1, -1}, {2, 2, 2})) == Hypothesis::Htilde_iv);
  CHECK(classify_hypothesis(p, pots({1, 1, -1}, {2, 2, 2})) == Hypothesis::none);
  CHECK(classify_hypothesis(p, trivial_potentials()) == Hypothesis::none);
  // a -> -a flips (ii) and (iv)
  const SystemParams q({2, 3, 1}, 1, 0, 0);
  CHECK(classify_hypothesis(q, pots({3, -1, 2}, {2.5, 2.5, 2.5})) == Hypothesis::Hm_ii);
  CHECK(classify_hypothesis(q, pots({-3, 1, -2}, {2.5, 2.5, 2.5})) == Hypothesis::Htilde_iv);
  CHECK(std::string(hypothesis_name(Hypothesis::Htilde_iii)) == "Htilde_iii");
}
