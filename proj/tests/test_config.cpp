#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "synseg/config.hpp"

using namespace synseg;

namespace {
std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}
}  // namespace

TEST_CASE("defaults") {
  const RunConfig c = parse_config("");
  CHECK(c.beta12 == 0.5);
  CHECK(c.ring.ell == 3);
  CHECK(c.grid.order == 8);
  const auto poly = c.polygon(4);
  CHECK(poly.r == poly.rho);
  CHECK(ring_gap(poly) == doctest::Approx(16.0).epsilon(1e-12));
}

TEST_CASE("sections and exact decimals") {
  const RunConfig c = parse_config(R"(
# comment
[mu]
mu1 = 2   # trailing
mu2 = 3
[beta]
beta12 = 1
beta13 = 0.1
[potential.3]
a = 0.1
m = 2.5
[ring]
ell = 5
parity = sign-changing
r = 40
[solver]
waive_probe = false
)");
  CHECK(c.mu[0] == 2.0);
  CHECK(c.beta13 == 0.1);
  CHECK(c.potentials[2].a == 0.1);
  CHECK(c.potentials[2].m == 2.5);
  CHECK(c.ring.parity == Parity::sign_changing);
  CHECK(c.polygon().rho == 40.0);
  CHECK_FALSE(c.solver.waive_probe);
  CHECK(c.params().alpha() == doctest::Approx(std::sqrt(0.4)));
}

TEST_CASE("errors carry line numbers") {
  CHECK(error_of("[mu]\nmu1 = x\n").find("line 2") != std::string::npos);
  CHECK(error_of("\n\n[bogus]\na = 1\n").find("line 4") != std::string::npos);
  CHECK(error_of("[mu]\nmu4 = 1\n").find("unknown key") != std::string::npos);
  CHECK(error_of("mu1 = 1\n").find("line 1") != std::string::npos);
  CHECK(error_of("[ring]\nell = 2.5\n").find("line 2") != std::string::npos);
  CHECK(error_of("[ring]\nparity = odd\n").find("line 2") != std::string::npos);
  CHECK_FALSE(error_of("[beta]\nbeta12 = 1\n").empty());  // endpoint of the admissible interval
  CHECK_FALSE(error_of("[potential.1]\nm = 1\n").empty());
}

TEST_CASE("canonical text round trip") {
  RunConfig c;
  c.mu = {1.1, 0.3, 2.0 / 3.0};
  c.beta12 = -0.2;
  c.potentials[1].a = 1e-7;
  c.ring.ell = 6;
  c.grid.spacing = 0.2;
  const std::string t = canonical_text(c);
  const RunConfig d = parse_config(t);
  CHECK(canonical_text(d) == t);
  CHECK(d.mu[2] == c.mu[2]);
  CHECK(t.find("gap = 16") != std::string::npos);
}

TEST_CASE("shipped configs parse") {
  for (const char* name : {"decoupled.conf", "hm_ii.conf", "htilde_iv.conf"}) {
    const RunConfig c = load_config(std::string(SYNSEG_SOURCE_DIR) + "/configs/" + name);
    CHECK(c.mu[0] == 1.0);
  }
  CHECK(classify_hypothesis(load_config(std::string(SYNSEG_SOURCE_DIR) + "/configs/hm_ii.conf").params(),
                            load_config(std::string(SYNSEG_SOURCE_DIR) + "/configs/hm_ii.conf").potentials) ==
        Hypothesis::Hm_ii);
  CHECK_THROWS_AS(load_config("/nonexistent/x.conf"), Error);
}
