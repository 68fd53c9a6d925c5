#pragma once
#include <array>
#include <span>
#include <vector>

#include "synseg/ground_state.hpp"
#include "synseg/params.hpp"
#include "synseg/wedge_grid.hpp"

namespace synseg {

using Vec3 = std::array<double, 3>;

struct PolygonConfig {
  int ell = 3;
  double r = 16.0;    // synchronized ring radius
  double rho = 16.0;  // segregated ring radius
  Parity parity = Parity::positive;

  // Peaks per ring: ell, or 2 ell for the alternating configuration.
  int peak_count() const { return parity == Parity::positive ? ell : 2 * ell; }
  void validate() const;
};

struct PeakSet {
  std::vector<Vec3> S;
  std::vector<Vec3> T;
  std::vector<double> sign;  // common sign pattern of S^k and T^k
};

PeakSet peak_positions(const PolygonConfig& cfg);

// Nearest distances: |S^1 - S^2| and |S^1 - T^1|.
double ring_spacing(const PolygonConfig& cfg);
double ring_gap(const PolygonConfig& cfg);

// Radius giving a prescribed S^1 - T^1 distance when r = rho.
double radius_for_gap(int ell, Parity parity, double gap);

// Admissible square [(m/2pi - delta) ell ln ell, M ell ln ell]^2.
struct DomainBox {
  double delta;
  double M_big;
  int ell;
  double m;

  double lower() const;
  double upper() const;
  bool contains(double r, double rho) const;
  void validate() const;
};

// Three fields stacked as (u, v, w) on a shared wedge grid.
class Field3 {
 public:
  Field3() = default;
  Field3(GridPtr grid, Parity parity);

  const WedgeGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  Parity parity() const { return parity_; }
  std::size_t n() const { return grid_->size(); }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  std::span<double> comp(int c) { return std::span<double>(data_).subspan(static_cast<std::size_t>(c) * n(), n()); }
  std::span<const double> comp(int c) const {
    return std::span<const double>(data_).subspan(static_cast<std::size_t>(c) * n(), n());
  }
  std::span<double> u() { return comp(0); }
  std::span<double> v() { return comp(1); }
  std::span<double> w() { return comp(2); }
  std::span<const double> u() const { return comp(0); }
  std::span<const double> v() const { return comp(1); }
  std::span<const double> w() const { return comp(2); }

  Field3& operator+=(const Field3& o);
  Field3& operator*=(double t);
  friend Field3 operator+(Field3 a, const Field3& b) { return a += b; }
  friend Field3 operator*(double t, Field3 a) { return a *= t; }

  // Zero the nodes that the odd reflections pin.
  void enforce_symmetry();

 private:
  GridPtr grid_;
  Parity parity_ = Parity::positive;
  std::vector<double> data_;
};

struct GridOptions {
  double spacing = 0.15;
  double margin = 8.0;
  int order = 8;
};

// Wedge grid enclosing both rings with the given margin.
GridDescriptor grid_for(const PolygonConfig& cfg, const GridOptions& opts);

struct AnsatzOptions {
  double max_spacing = 0.25;
};

Field3 synthesize_ansatz(const PolygonConfig& cfg, const SystemParams& params,
                         const RadialProfile& profile, GridPtr grid, const AnsatzOptions& opts = {});

// Orbit sum  sum_k sign_k * amp * f(|x - c_k|)  sampled on the grid.
std::vector<double> sample_orbit(const WedgeGrid& g, std::span<const Vec3> centres,
                                 std::span<const double> signs, double amp,
                                 const RadialProfile& profile);

}  // namespace synseg
