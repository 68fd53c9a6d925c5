#pragma once
#include <array>
#include <span>

#include "synseg/wedge_grid.hpp"

// Data-parallel kernels. Each has an OpenMP version and a plain serial reference
// with the same contract; tests compare the two and the benchmark times them.
namespace synseg::kernels {

// Cap on OpenMP workers, read from GPE_THREADS when set.
void configure_threads();
int thread_count();

// sum_i w_i a_i b_i, summed in fixed chunks so the result does not depend on thread count.
double weighted_dot(std::span<const double> w, std::span<const double> a, std::span<const double> b);
double weighted_dot_serial(std::span<const double> w, std::span<const double> a,
                           std::span<const double> b);
double weighted_sum(std::span<const double> w, std::span<const double> f);
double weighted_sum_serial(std::span<const double> w, std::span<const double> f);

// out = -Delta_h in for one component with the given theta reflections.
void neg_laplacian(const WedgeGrid& g, ThetaSymmetry s, std::span<const double> in,
                   std::span<double> out);
void neg_laplacian_serial(const WedgeGrid& g, ThetaSymmetry s, std::span<const double> in,
                          std::span<double> out);

struct Couplings {
  std::array<double, 3> mu;
  double b12, b13, b23;
};

// Pointwise part of the Euler-Lagrange residual:
// g_u = P1 u - mu1 u^3 - b12 u v^2 - b13 u w^2, and cyclically.
void local_gradient(const Couplings& c, std::span<const double> pot, std::span<const double> uvw,
                    std::span<double> out);
void local_gradient_serial(const Couplings& c, std::span<const double> pot,
                           std::span<const double> uvw, std::span<double> out);

// Pointwise part of the second variation at base uvw applied to direction d.
void local_hessian(const Couplings& c, std::span<const double> pot, std::span<const double> uvw,
                   std::span<const double> d, std::span<double> out);
void local_hessian_serial(const Couplings& c, std::span<const double> pot,
                          std::span<const double> uvw, std::span<const double> d,
                          std::span<double> out);

// out[idx] += sum_k amp_k * f(|x_idx - c_k|) for radial f given by a callable table.
struct Peak {
  std::array<double, 3> centre;
  double amplitude;
};
template <class Profile>
void add_peaks(const WedgeGrid& g, std::span<const Peak> peaks, const Profile& f,
               std::span<double> out);
template <class Profile>
void add_peaks_serial(const WedgeGrid& g, std::span<const Peak> peaks, const Profile& f,
                      std::span<double> out);

}  // namespace synseg::kernels

#include "synseg/kernels_impl.hpp"
