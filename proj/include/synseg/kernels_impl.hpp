#pragma once
#include <cmath>

namespace synseg::kernels {

template <class Profile>
void add_peaks(const WedgeGrid& g, std::span<const Peak> peaks, const Profile& f,
               std::span<double> out) {
  const long nr = static_cast<long>(g.n_rho());
  const std::size_t nt = g.n_theta(), nz = g.n_z();
#pragma omp parallel for schedule(static)
  for (long i = 0; i < nr; ++i) {
    const double rho = g.rho(static_cast<std::size_t>(i));
    for (std::size_t j = 0; j < nt; ++j) {
      const double th = g.theta(j);
      const double x = rho * std::cos(th), y = rho * std::sin(th);
      for (std::size_t k = 0; k < nz; ++k) {
        const double z = g.z(k);
        double acc = 0.0;
        for (const Peak& p : peaks) {
          const double dx = x - p.centre[0], dy = y - p.centre[1], dz = z - p.centre[2];
          acc += p.amplitude * f(std::sqrt(dx * dx + dy * dy + dz * dz));
        }
        out[g.index(static_cast<std::size_t>(i), j, k)] += acc;
      }
    }
  }
}

template <class Profile>
void add_peaks_serial(const WedgeGrid& g, std::span<const Peak> peaks, const Profile& f,
                      std::span<double> out) {
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const auto x = g.point(idx);
    for (const Peak& p : peaks) {
      const double d = std::hypot(x[0] - p.centre[0], x[1] - p.centre[1], x[2] - p.centre[2]);
      out[idx] += p.amplitude * f(d);
    }
  }
}

}  // namespace synseg::kernels
