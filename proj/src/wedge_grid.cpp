#include "synseg/wedge_grid.hpp"

#include <cmath>
#include <numbers>

#include "synseg/kernels.hpp"

namespace synseg {

const char* parity_name(Parity p) {
  return p == Parity::positive ? "positive" : "sign-changing";
}

Parity parse_parity(const std::string& s) {
  if (s == "positive") return Parity::positive;
  if (s == "sign-changing" || s == "sign_changing") return Parity::sign_changing;
  throw Error(Reason::config_error, "unknown parity '" + s + "'");
}

ThetaSymmetry component_symmetry(Parity parity, int c) {
  if (parity == Parity::positive) return {false, false};
  // Alternating rings: u, v flip sign across the far edge, w is odd in x2.
  return c < 2 ? ThetaSymmetry{false, true} : ThetaSymmetry{true, false};
}

double GridDescriptor::wedge_angle() const {
  const double n = parity == Parity::positive ? ell : 2.0 * ell;
  return std::numbers::pi / n;
}

int GridDescriptor::multiplicity() const {
  return parity == Parity::positive ? 4 * ell : 8 * ell;
}

std::vector<double> second_difference_stencil(int order) {
  switch (order) {
    case 2: return {-2.0, 1.0};
    case 4: return {-5.0 / 2, 4.0 / 3, -1.0 / 12};
    case 6: return {-49.0 / 18, 3.0 / 2, -3.0 / 20, 1.0 / 90};
    case 8: return {-205.0 / 72, 8.0 / 5, -1.0 / 5, 8.0 / 315, -1.0 / 560};
    default: throw Error(Reason::config_error, "stencil order must be 2, 4, 6 or 8");
  }
}

WedgeGrid::WedgeGrid(const GridDescriptor& desc) : desc_(desc) {
  if (!(desc.spacing > 0.0)) throw Error(Reason::config_error, "grid spacing must be positive");
  if (desc.ell < 1) throw Error(Reason::config_error, "ell must be at least 1");
  if (!(desc.rho_in > 0.0) || !(desc.rho_out > desc.rho_in))
    throw Error(Reason::config_error, "invalid radial extent");
  stencil_ = second_difference_stencil(desc.order);
  const double h = desc.spacing;
  n_rho_ = static_cast<std::size_t>(std::floor((desc.rho_out - desc.rho_in) / h + 1e-9)) + 1;
  n_z_ = static_cast<std::size_t>(std::floor(desc.z_top / h + 1e-9)) + 1;
  const double theta_w = desc.wedge_angle();
  const auto intervals = static_cast<std::size_t>(std::ceil(theta_w * desc.arc_radius / h - 1e-9));
  n_theta_ = std::max<std::size_t>(intervals, 2 * stencil_.size()) + 1;
  h_theta_ = theta_w / static_cast<double>(n_theta_ - 1);
  if (n_z_ < stencil_.size() + 1 || n_rho_ < stencil_.size() + 1)
    throw Error(Reason::config_error, "grid too small for the stencil");

  base_weights_.resize(size());
  for (std::size_t i = 0; i < n_rho_; ++i)
    for (std::size_t j = 0; j < n_theta_; ++j)
      for (std::size_t k = 0; k < n_z_; ++k) {
        double w = rho(i) * h * h_theta_ * h;
        if (j == 0 || j + 1 == n_theta_) w *= 0.5;
        if (k == 0) w *= 0.5;
        base_weights_[index(i, j, k)] = w;
      }
  for (int code = 0; code < 4; ++code) {
    auto& sw = sym_weights_[static_cast<std::size_t>(code)];
    sw = base_weights_;
    for (std::size_t i = 0; i < n_rho_; ++i)
      for (std::size_t k = 0; k < n_z_; ++k) {
        if (code & 1) sw[index(i, 0, k)] = 0.0;
        if (code & 2) sw[index(i, n_theta_ - 1, k)] = 0.0;
      }
  }
  stacked_.reserve(3 * size());
  for (int c = 0; c < 3; ++c) {
    auto w = weights(component_symmetry(desc_.parity, c));
    stacked_.insert(stacked_.end(), w.begin(), w.end());
  }
}

std::span<const double> WedgeGrid::weights(ThetaSymmetry s) const {
  return sym_weights_[static_cast<std::size_t>((s.odd_lo ? 1 : 0) | (s.odd_hi ? 2 : 0))];
}

std::array<double, 3> WedgeGrid::point(std::size_t idx) const {
  const std::size_t k = idx % n_z_;
  const std::size_t j = (idx / n_z_) % n_theta_;
  const std::size_t i = idx / (n_z_ * n_theta_);
  const double r = rho(i), t = theta(j);
  return {r * std::cos(t), r * std::sin(t), z(k)};
}

WedgeGrid::Neighbour WedgeGrid::theta_neighbour(ThetaSymmetry s, long j) const {
  const long last = static_cast<long>(n_theta_) - 1;
  double sign = 1.0;
  while (j < 0 || j > last) {
    if (j < 0) {
      j = -j;
      if (s.odd_lo) sign = -sign;
    } else {
      j = 2 * last - j;
      if (s.odd_hi) sign = -sign;
    }
  }
  if ((j == 0 && s.odd_lo) || (j == last && s.odd_hi)) sign = 0.0;
  return {static_cast<std::size_t>(j), sign};
}

double WedgeGrid::integrate(std::span<const double> density) const {
  return multiplicity() * kernels::weighted_sum(base_weights_, density);
}

}  // namespace synseg
