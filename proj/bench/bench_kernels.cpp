#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <random>
#include <vector>

#include "synseg/ansatz.hpp"
#include "synseg/kernels.hpp"

using namespace synseg;

namespace {

struct Fixture {
  WedgeGrid grid;
  std::vector<double> a, b, uvw, d, pot, out;
  kernels::Couplings c{{1.0, 1.0, 1.0}, 0.5, 0.1, 0.1};
  std::vector<kernels::Peak> peaks;

  Fixture()
      : grid(grid_for({3, 14.0, 14.0, Parity::positive}, {0.15, 8.0, 8})) {
    const std::size_t n = grid.size();
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto fill = [&](std::vector<double>& v, std::size_t len) {
      v.resize(len);
      for (auto& x : v) x = u(rng);
    };
    fill(a, n);
    fill(b, n);
    fill(uvw, 3 * n);
    fill(d, 3 * n);
    fill(pot, 3 * n);
    out.assign(3 * n, 0.0);
    for (int k = 0; k < 3; ++k) {
      const double t = 2.0 * k * std::numbers::pi / 3.0;
      peaks.push_back({{14.0 * std::cos(t), 14.0 * std::sin(t), 0.0}, 1.0});
    }
  }
};

Fixture& fx() {
  static Fixture f;
  return f;
}

double profile(double r) { return 4.3 * std::exp(-r) / (1.0 + r); }

template <bool Parallel>
void BM_weighted_dot(benchmark::State& st) {
  auto& f = fx();
  const auto w = f.grid.weights();
  for (auto _ : st) {
    const double s = Parallel ? kernels::weighted_dot(w, f.a, f.b) : kernels::weighted_dot_serial(w, f.a, f.b);
    benchmark::DoNotOptimize(s);
  }
  st.SetItemsProcessed(static_cast<int64_t>(st.iterations() * f.grid.size()));
}

template <bool Parallel>
void BM_neg_laplacian(benchmark::State& st) {
  auto& f = fx();
  std::span<double> out(f.out.data(), f.grid.size());
  for (auto _ : st) {
    if (Parallel)
      kernels::neg_laplacian(f.grid, ThetaSymmetry{}, f.a, out);
    else
      kernels::neg_laplacian_serial(f.grid, ThetaSymmetry{}, f.a, out);
    benchmark::ClobberMemory();
  }
  st.SetItemsProcessed(static_cast<int64_t>(st.iterations() * f.grid.size()));
}

template <bool Parallel>
void BM_local_gradient(benchmark::State& st) {
  auto& f = fx();
  for (auto _ : st) {
    if (Parallel)
      kernels::local_gradient(f.c, f.pot, f.uvw, f.out);
    else
      kernels::local_gradient_serial(f.c, f.pot, f.uvw, f.out);
    benchmark::ClobberMemory();
  }
  st.SetItemsProcessed(static_cast<int64_t>(st.iterations() * f.uvw.size()));
}

template <bool Parallel>
void BM_local_hessian(benchmark::State& st) {
  auto& f = fx();
  for (auto _ : st) {
    if (Parallel)
      kernels::local_hessian(f.c, f.pot, f.uvw, f.d, f.out);
    else
      kernels::local_hessian_serial(f.c, f.pot, f.uvw, f.d, f.out);
    benchmark::ClobberMemory();
  }
  st.SetItemsProcessed(static_cast<int64_t>(st.iterations() * f.uvw.size()));
}

template <bool Parallel>
void BM_add_peaks(benchmark::State& st) {
  auto& f = fx();
  std::span<double> out(f.out.data(), f.grid.size());
  const std::span<const kernels::Peak> peaks(f.peaks);
  for (auto _ : st) {
    if (Parallel)
      kernels::add_peaks(f.grid, peaks, profile, out);
    else
      kernels::add_peaks_serial(f.grid, peaks, profile, out);
    benchmark::ClobberMemory();
  }
  st.SetItemsProcessed(static_cast<int64_t>(st.iterations() * f.grid.size()));
}

}  // namespace

BENCHMARK(BM_weighted_dot<false>)->Name("weighted_dot/serial");
BENCHMARK(BM_weighted_dot<true>)->Name("weighted_dot/omp");
BENCHMARK(BM_neg_laplacian<false>)->Name("neg_laplacian/serial");
BENCHMARK(BM_neg_laplacian<true>)->Name("neg_laplacian/omp");
BENCHMARK(BM_local_gradient<false>)->Name("local_gradient/serial");
BENCHMARK(BM_local_gradient<true>)->Name("local_gradient/omp");
BENCHMARK(BM_local_hessian<false>)->Name("local_hessian/serial");
BENCHMARK(BM_local_hessian<true>)->Name("local_hessian/omp");
BENCHMARK(BM_add_peaks<false>)->Name("add_peaks/serial");
BENCHMARK(BM_add_peaks<true>)->Name("add_peaks/omp");

int main(int argc, char** argv) {
  kernels::configure_threads();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
