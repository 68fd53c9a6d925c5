#pragma once
#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "synseg/error.hpp"

namespace synseg {

enum class Parity { positive, sign_changing };

const char* parity_name(Parity p);
Parity parse_parity(const std::string& s);

// Reflection type of a field across the two bounding half-planes of the wedge.
struct ThetaSymmetry {
  bool odd_lo = false;
  bool odd_hi = false;
  bool operator==(const ThetaSymmetry&) const = default;
};

// Symmetry of component c (0 = u, 1 = v, 2 = w) for a given parity.
ThetaSymmetry component_symmetry(Parity parity, int c);

// Cylindrical wedge 0 <= theta <= wedge_angle, z >= 0, rho_in <= rho <= rho_out.
// Fields are even in z; values vanish one node beyond rho_in, rho_out and z_top.
struct GridDescriptor {
  double spacing = 0.2;
  int ell = 1;
  Parity parity = Parity::positive;
  double rho_in = 1.0;
  double rho_out = 2.0;
  double z_top = 8.0;
  double arc_radius = 1.0;  // radius at which the angular step matches the spacing
  int order = 4;            // accuracy order of the Laplacian stencil (2, 4, 6 or 8)

  double wedge_angle() const;
  // Copies of the wedge (times the z mirror) needed to tile R^3.
  int multiplicity() const;
};

class WedgeGrid {
 public:
  explicit WedgeGrid(const GridDescriptor& desc);

  const GridDescriptor& desc() const { return desc_; }
  std::size_t n_rho() const { return n_rho_; }
  std::size_t n_theta() const { return n_theta_; }
  std::size_t n_z() const { return n_z_; }
  std::size_t size() const { return n_rho_ * n_theta_ * n_z_; }
  double h() const { return desc_.spacing; }
  double h_theta() const { return h_theta_; }
  double rho(std::size_t i) const { return desc_.rho_in + static_cast<double>(i) * desc_.spacing; }
  double theta(std::size_t j) const { return static_cast<double>(j) * h_theta_; }
  double z(std::size_t k) const { return static_cast<double>(k) * desc_.spacing; }
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
    return (i * n_theta_ + j) * n_z_ + k;
  }
  std::array<double, 3> point(std::size_t idx) const;
  double multiplicity() const { return static_cast<double>(desc_.multiplicity()); }

  // Trapezoid cell volumes (rho drho dtheta dz with half weights on symmetry planes).
  std::span<const double> weights() const { return base_weights_; }
  // Weights with nodes pinned to zero by an odd reflection removed.
  std::span<const double> weights(ThetaSymmetry s) const;
  // Stacked (u, v, w) weights for the grid's parity.
  std::span<const double> stacked_weights() const { return stacked_; }

  // Stencil half-width and coefficients c_0..c_S of the second difference (times h^2).
  int stencil_half() const { return static_cast<int>(stencil_.size()) - 1; }
  std::span<const double> stencil() const { return stencil_; }

  // Signed neighbour lookup in theta: node j + s maps to (index, sign); sign 0 means pinned to zero.
  struct Neighbour {
    std::size_t j;
    double sign;
  };
  Neighbour theta_neighbour(ThetaSymmetry s, long j) const;

  // Full-space integral of a density sampled on the grid.
  double integrate(std::span<const double> density) const;

 private:
  GridDescriptor desc_;
  std::size_t n_rho_, n_theta_, n_z_;
  double h_theta_;
  std::vector<double> base_weights_;
  std::array<std::vector<double>, 4> sym_weights_;
  std::vector<double> stacked_;
  std::vector<double> stencil_;
};

std::vector<double> second_difference_stencil(int order);

using GridPtr = std::shared_ptr<const WedgeGrid>;

}  // namespace synseg
