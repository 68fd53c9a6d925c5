#pragma once
#include <array>
#include <string>
#include <vector>

#include "synseg/energy.hpp"
#include "synseg/peak_box.hpp"

namespace synseg {

// Ring-dilation directions of the ansatz and the weighted constraint functionals defining E:
// p is in E when <c_ring, p> = 0 and <c_seg, p> = 0.
struct ConstraintBasis {
  Field3 ring;      // (X1, Y1, 0): d/dr of the (u, v) ring
  Field3 seg;       // (0, 0, Z1): d/drho of the w ring
  Field3 c_ring;    // W*^2-weighted ring direction
  Field3 c_seg;

  static ConstraintBasis build(const PolygonConfig& cfg, const SystemParams& params,
                               const RadialProfile& profile, GridPtr grid);

  void project(const DiscreteFunctional& fn, Field3& p) const;
  void project(const DiscreteFunctional& fn, std::span<const double> in, std::span<double> out) const;
  // Normalized constraint values <c, p> / (|c| |p|).
  std::array<double, 2> residuals(const DiscreteFunctional& fn, const Field3& p) const;
};

struct ProbeOptions {
  int n_iter = 300;
  double tol = 1e-6;
  int wanted = 6;
  int precond_steps = 12;
  unsigned seed = 7;
};

// Lowest generalized eigenpairs of the second variation against the energy norm -Delta_h + P.
struct ProbeResult {
  std::vector<double> values;
  std::vector<Field3> modes;
  double lambda_min = 0.0;   // smallest Rayleigh quotient L2(p) / |p|^2
  double min_abs = 0.0;      // smallest |lambda|
  int iterations = 0;
  bool converged = false;
  bool projected = false;
  std::array<double, 2> constraint_residuals{};
  std::vector<double> history;
};

// basis == nullptr probes the unconstrained operator. Throws IterationStall if not converged.
ProbeResult rayleigh_min(const DiscreteFunctional& fn, const Field3& base,
                         const ConstraintBasis* basis, const ProbeOptions& opts = {});

struct Alignment {
  double lambda = 0.0;           // eigenvalue of smallest magnitude
  double cosine = 0.0;           // |cos| between its mode and the ring direction
  double subspace_cosine = 0.0;  // ring direction against the span of the near-zero modes
  int near_zero = 0;
};

// Near-zero mode of the unconstrained operator and its alignment with (X1, Y1, 0).
Alignment near_zero_alignment(const DiscreteFunctional& fn, const ProbeResult& unprojected,
                              const ConstraintBasis& basis, double zero_tol);

// Dense generalized eigenvalues on a small grid, optionally restricted to E. Ascending.
std::vector<double> dense_spectrum(const DiscreteFunctional& fn, const Field3& base,
                                   const ConstraintBasis* basis);

struct EigenprobeReport {
  ProbeResult projected;
  ProbeResult unprojected;
  Alignment alignment;
  std::vector<double> dense_projected;
  std::vector<double> dense_unprojected;
};

std::string to_json(const EigenprobeReport& r);

}  // namespace synseg
