#pragma once
#include <array>
#include <span>
#include <vector>

#include "synseg/ground_state.hpp"
#include "synseg/params.hpp"

namespace synseg {

// Octant [0, L]^3 around a single peak with a cosine (even) or sine (odd) basis per axis.
// Even axes carry nodes 0..N, odd axes the interior nodes 1..N-1; h = L / N.
struct PeakBoxSpec {
  double half_width = 14.0;
  double spacing = 0.1;
  std::array<bool, 3> odd{false, false, false};
};

class PeakBox {
 public:
  explicit PeakBox(const PeakBoxSpec& spec);
  ~PeakBox();
  PeakBox(const PeakBox&) = delete;
  PeakBox& operator=(const PeakBox&) = delete;

  std::size_t size() const { return n_[0] * n_[1] * n_[2]; }
  std::array<double, 3> point(std::size_t idx) const;
  std::span<const double> weights() const { return weights_; }  // full-space trapezoid weights
  double dot(std::span<const double> a, std::span<const double> b) const;

  // out = (-Delta + shift) in, spectrally.
  void apply(std::span<const double> in, std::span<double> out, double shift = 0.0) const;
  // out = (-Delta + shift)^{-1} in, shift > 0.
  void solve(std::span<const double> in, std::span<double> out, double shift) const;

 private:
  void transform(std::span<const double> in, std::span<double> out,
                 const std::vector<double>& multiplier) const;

  PeakBoxSpec spec_;
  std::array<std::size_t, 3> n_{};
  std::vector<double> coords_[3];
  std::vector<double> weights_;
  std::vector<double> k2_;  // |k|^2 per mode
  double norm_ = 1.0;
  double* buf_ = nullptr;
  void* fwd_ = nullptr;
};

struct PairResidual {
  double sup_u, sup_v;
  double l2_u, l2_v;
  double sup() const { return sup_u > sup_v ? sup_u : sup_v; }
};

// Residual of (alpha W*, gamma W*) in  -Delta u + u = mu1 u^3 + b12 u v^2  and its partner.
PairResidual sync_pair_residual(const SystemParams& params, const RadialProfile& profile,
                                const PeakBoxSpec& spec);

struct KernelReport {
  int dim = 0;
  std::vector<double> eigenvalues;  // lowest generalized eigenvalues of (L, -Delta + 1)
  double floor = 0.0;               // Rayleigh quotient of the analytic x1-derivative mode
  double threshold = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Near-zero eigenvalues of the two-component linearization at (alpha W*, gamma W*)
// in the sector odd in x1 and even in x2, x3.
KernelReport kernel_check_2system(const SystemParams& params, const RadialProfile& profile,
                                  const PeakBoxSpec& spec = {12.0, 0.2, {true, false, false}},
                                  int wanted = 4);

}  // namespace synseg
