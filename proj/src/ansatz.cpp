#include "synseg/ansatz.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "synseg/kernels.hpp"

namespace synseg {

using std::numbers::pi;

void PolygonConfig::validate() const {
  if (ell < 1) throw Error(Reason::config_error, "ell must be at least 1");
  if (!(r > 0.0) || !(rho > 0.0)) throw Error(Reason::config_error, "ring radii must be positive");
}

PeakSet peak_positions(const PolygonConfig& cfg) {
  cfg.validate();
  const int n = cfg.peak_count();
  PeakSet ps;
  for (int k = 1; k <= n; ++k) {
    const double a = 2.0 * (k - 1) * pi / n;
    const double b = (2.0 * k - 1.0) * pi / n;
    ps.S.push_back({cfg.r * std::cos(a), cfg.r * std::sin(a), 0.0});
    ps.T.push_back({cfg.rho * std::cos(b), cfg.rho * std::sin(b), 0.0});
    ps.sign.push_back(cfg.parity == Parity::positive ? 1.0 : (k % 2 == 0 ? 1.0 : -1.0));
  }
  return ps;
}

double ring_spacing(const PolygonConfig& cfg) {
  return 2.0 * cfg.r * std::sin(pi / cfg.peak_count());
}

double ring_gap(const PolygonConfig& cfg) {
  const double t = pi / cfg.peak_count();
  return std::hypot(cfg.rho - cfg.r * std::cos(t), cfg.r * std::sin(t));
}

double radius_for_gap(int ell, Parity parity, double gap) {
  const int n = parity == Parity::positive ? ell : 2 * ell;
  return gap / (2.0 * std::sin(pi / (2.0 * n)));
}

double DomainBox::lower() const { return (m / (2.0 * pi) - delta) * ell * std::log(ell); }
double DomainBox::upper() const { return M_big * ell * std::log(ell); }
bool DomainBox::contains(double r, double rho) const {
  return r >= lower() && r <= upper() && rho >= lower() && rho <= upper();
}
void DomainBox::validate() const {
  if (!(delta > 0.0) || !(delta < m / (2.0 * pi)))
    throw Error(Reason::config_error, "delta must lie in (0, m/2pi)");
  if (!(M_big > m / (2.0 * pi) - delta)) throw Error(Reason::config_error, "M too small");
  if (ell < 2) throw Error(Reason::config_error, "ell must be at least 2");
}

Field3::Field3(GridPtr grid, Parity parity)
    : grid_(std::move(grid)), parity_(parity), data_(3 * grid_->size(), 0.0) {}

Field3& Field3::operator+=(const Field3& o) {
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Field3& Field3::operator*=(double t) {
  for (double& x : data_) x *= t;
  return *this;
}

void Field3::enforce_symmetry() {
  for (int c = 0; c < 3; ++c) {
    const auto w = grid_->weights(component_symmetry(parity_, c));
    auto f = comp(c);
    const auto base = grid_->weights();
    for (std::size_t i = 0; i < f.size(); ++i)
      if (w[i] == 0.0 && base[i] != 0.0) f[i] = 0.0;
  }
}

GridDescriptor grid_for(const PolygonConfig& cfg, const GridOptions& opts) {
  cfg.validate();
  GridDescriptor d;
  d.spacing = opts.spacing;
  d.ell = cfg.ell;
  d.parity = cfg.parity;
  d.order = opts.order;
  d.rho_in = std::min(cfg.r, cfg.rho) - opts.margin;
  d.rho_out = std::max(cfg.r, cfg.rho) + opts.margin;
  d.z_top = opts.margin;
  d.arc_radius = std::max(cfg.r, cfg.rho);
  if (d.rho_in < 0.5) {
    std::ostringstream os;
    os << "ring radius " << std::min(cfg.r, cfg.rho) << " leaves no room for margin " << opts.margin
       << " around the axis";
    throw Error(Reason::out_of_domain, os.str());
  }
  return d;
}

std::vector<double> sample_orbit(const WedgeGrid& g, std::span<const Vec3> centres,
                                 std::span<const double> signs, double amp,
                                 const RadialProfile& profile) {
  std::vector<kernels::Peak> peaks;
  for (std::size_t k = 0; k < centres.size(); ++k) peaks.push_back({centres[k], amp * signs[k]});
  std::vector<double> out(g.size(), 0.0);
  kernels::add_peaks(g, std::span<const kernels::Peak>(peaks),
                     [&](double d) { return eval_profile(profile, d).value; }, std::span<double>(out));
  return out;
}

Field3 synthesize_ansatz(const PolygonConfig& cfg, const SystemParams& params,
                         const RadialProfile& profile, GridPtr grid, const AnsatzOptions& opts) {
  if (grid->h() > opts.max_spacing) {
    std::ostringstream os;
    os << "grid spacing " << grid->h() << " exceeds " << opts.max_spacing;
    throw Error(Reason::grid_too_coarse, os.str());
  }
  if (grid->desc().parity != cfg.parity || grid->desc().ell != cfg.ell)
    throw Error(Reason::config_error, "grid symmetry does not match the configuration");
  const PeakSet ps = peak_positions(cfg);
  Field3 f(grid, cfg.parity);
  const auto s = sample_orbit(*grid, ps.S, ps.sign, 1.0, profile);
  const auto t = sample_orbit(*grid, ps.T, ps.sign, 1.0 / std::sqrt(params.mu(2)), profile);
  auto u = f.u(), v = f.v(), w = f.w();
  for (std::size_t i = 0; i < s.size(); ++i) {
    u[i] = params.alpha() * s[i];
    v[i] = params.gamma() * s[i];
    w[i] = t[i];
  }
  f.enforce_symmetry();
  return f;
}

}  // namespace synseg
