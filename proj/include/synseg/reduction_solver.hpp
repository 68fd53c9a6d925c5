#pragma once
#include <optional>
#include <string>
#include <vector>

#include "synseg/config.hpp"
#include "synseg/energy.hpp"
#include "synseg/linearized.hpp"

namespace synseg {

struct RefineOptions {
  int max_iter = 12;
  double tol = 1e-8;  // on the L2 norm of the residual projected onto E
  GridOptions grid;
  bool waive_probe = true;
  int krylov_max_iter = 6000;
  double krylov_rtol = 1e-10;
};

struct SolveReport {
  PolygonConfig config;
  bool converged = false;
  int iterations = 0;
  std::vector<double> residual_history;       // projected residual, L2
  std::vector<double> full_residual_history;  // including the components along the constraints
  std::vector<int> krylov_iterations;
  double pert_norm = 0.0;    // |p|_{H1} + |p|_inf
  double ansatz_norm = 0.0;  // same norm of the ansatz
  double bound_shape = 0.0;  // ell/r^m + ell/rho^m3 + coupling term
  double newton_order = 0.0;
  double residual_drop = 0.0;  // orders of magnitude from first to last residual
  EnergyReport energy;
  EnergyReport ansatz_energy;
  Metrics metrics;
  std::array<double, 3> positivity{};  // grid minimum of each component
  std::optional<double> probe_min_abs;
  double wall_seconds = 0.0;
  Field3 solution;
};

// Projected Newton on the discrete Euler-Lagrange system around the ring ansatz.
SolveReport refine(const PolygonConfig& cfg, const SystemParams& params, const Potentials& pots,
                   const RadialProfile& profile, const RefineOptions& opts = {});

struct SweepEntry {
  int ell = 0;
  std::optional<SolveReport> report;
  std::string error;  // reason name and message when the run failed
  std::string seed;   // "landscape" or "separation"
};

std::vector<SweepEntry> continuation_sweep(const std::vector<int>& ells, const RunConfig& cfg,
                                           const RadialProfile& profile);

// Values of a component on the full circle of angular nodes, unfolded from the wedge.
struct RotationCheck {
  double max_defect = 0.0;  // max |f(R x) - s f(x)| with s = +1 or -1 by parity
  std::array<double, 3> min{}, max{};
};
RotationCheck check_rotation(const Field3& f);

std::string to_json(const SolveReport& r);

}  // namespace synseg
