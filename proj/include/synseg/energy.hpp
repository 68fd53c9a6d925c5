#pragma once
#include <array>
#include <string>
#include <vector>

#include "synseg/ansatz.hpp"
#include "synseg/kernels.hpp"

namespace synseg {

struct ComponentEnergy {
  double kinetic = 0.0;    // 1/2 <u, -Delta_h u>
  double potential = 0.0;  // 1/2 int P u^2
  double quartic = 0.0;    // mu/4 int u^4
};

struct EnergyReport {
  double total = 0.0;
  double kinetic_potential = 0.0;
  double quartic = 0.0;
  double coupling = 0.0;  // 1/2 sum beta_ij int u_i^2 u_j^2
  std::array<ComponentEnergy, 3> per_component{};
};

std::string to_json(const EnergyReport& r);

struct Decomposition {
  double J0, L1, L2, R;
  double sum() const { return J0 + L1 + 0.5 * L2 + R; }
};

struct Metrics {
  double sync_defect = 0.0;
  double overlap = 0.0;  // int u^2 w^2 + int v^2 w^2
  std::array<double, 3> sup{};
  std::array<double, 3> residual_l2{};
  double quartic_u = 0.0;  // int u^4, the scale for the overlap
};

// Discrete energy of the cubic system on a wedge grid, with its first and second variations.
// All integrals are full-space (wedge sum times multiplicity).
class DiscreteFunctional {
 public:
  DiscreteFunctional(GridPtr grid, Parity parity, const SystemParams& params,
                     const Potentials& pots);

  const WedgeGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  Parity parity() const { return parity_; }
  const SystemParams& params() const { return params_; }
  const kernels::Couplings& couplings() const { return cp_; }
  std::span<const double> potential() const { return pot_; }

  Field3 zeros() const { return Field3(grid_, parity_); }

  EnergyReport energy(const Field3& f) const;
  // Gradient with respect to the full-space L2 pairing: the discrete Euler-Lagrange residual.
  void gradient(const Field3& f, Field3& out) const;
  void hessian_apply(const Field3& base, const Field3& d, Field3& out) const;
  // -Delta_h + P, the operator of the energy norm.
  void norm_apply(const Field3& d, Field3& out) const;
  void neg_laplacian(const Field3& in, Field3& out) const;

  double dot(const Field3& a, const Field3& b) const;
  double dot(std::span<const double> a, std::span<const double> b) const;
  double component_dot(int c, std::span<const double> a, std::span<const double> b) const;
  double l2_norm(const Field3& a) const;
  double h_norm(const Field3& a) const;  // sqrt(<(-Delta_h + P) a, a>)

  Decomposition decompose(const Field3& base, const Field3& pert) const;
  double remainder(const Field3& base, const Field3& pert) const;

  Metrics verification_metrics(const Field3& f) const;

 private:
  GridPtr grid_;
  Parity parity_;
  SystemParams params_;
  kernels::Couplings cp_;
  std::vector<double> pot_;
};

// Pointwise continuum residual of the ansatz, built from exact profile values.
Field3 ansatz_residual(const PolygonConfig& cfg, const SystemParams& params,
                       const Potentials& pots, const RadialProfile& profile, GridPtr grid);

// Dual norm of the continuum first variation, sqrt(<r, (-Delta_h + P)^{-1} r>).
double l1_dual_norm(const DiscreteFunctional& fn, const Field3& residual);

// Monitoring bound ell/r^min(m1,m2) + ell/rho^m3 + (|b13|+|b23|) e^{-gap} ell^{3/2}/r, scaled by
// the potential strengths so that it vanishes when every coupling it tracks vanishes.
double l1_norm_estimate(const PolygonConfig& cfg, const SystemParams& params,
                        const Potentials& pots);

}  // namespace synseg
