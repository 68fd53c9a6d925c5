#pragma once
#include <array>
#include <string>

#include "synseg/ansatz.hpp"
#include "synseg/params.hpp"

namespace synseg {

struct RingSettings {
  int ell = 3;
  Parity parity = Parity::positive;
  double r = 0.0;    // 0: derive from gap
  double rho = 0.0;  // 0: equal to r
  double gap = 16.0;
};

struct SolverSettings {
  int max_iter = 12;
  double tol = 1e-8;
  bool waive_probe = true;
};

struct GroundStateSettings {
  double tol = 1e-10;
  double r_max = 25.0;
};

// Everything a run needs, with defaults for the decoupled three-ring problem.
struct RunConfig {
  std::array<double, 3> mu{1.0, 1.0, 1.0};
  double beta12 = 0.5;
  double beta13 = 0.0;
  double beta23 = 0.0;
  Potentials potentials = trivial_potentials();
  RingSettings ring;
  GridOptions grid;
  SolverSettings solver;
  GroundStateSettings ground_state;

  SystemParams params() const { return SystemParams(mu, beta12, beta13, beta23); }
  // Ring geometry for a given ell, honouring explicit radii when set.
  PolygonConfig polygon(int ell) const;
  PolygonConfig polygon() const { return polygon(ring.ell); }
};

// Sectioned key = value text; '#' starts a comment. Throws Error(config_error) with line numbers.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Canonical text form covering every field, used for hashing and manifests.
std::string canonical_text(const RunConfig& c);

}  // namespace synseg
