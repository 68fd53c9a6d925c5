#include "synseg/peak_box.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "synseg/krylov.hpp"

namespace synseg {

using std::numbers::pi;

PeakBox::PeakBox(const PeakBoxSpec& spec) : spec_(spec) {
  const auto N = static_cast<std::size_t>(std::lround(spec.half_width / spec.spacing));
  if (N < 4) throw Error(Reason::config_error, "peak box too small");
  const double h = spec.half_width / static_cast<double>(N);
  std::vector<double> k2axis[3];
  int nfft[3];
  fftw_r2r_kind kinds[3];
  norm_ = 1.0;
  for (int a = 0; a < 3; ++a) {
    const bool odd = spec.odd[static_cast<std::size_t>(a)];
    n_[static_cast<std::size_t>(a)] = odd ? N - 1 : N + 1;
    const std::size_t n = n_[static_cast<std::size_t>(a)];
    for (std::size_t i = 0; i < n; ++i) coords_[a].push_back(static_cast<double>(odd ? i + 1 : i) * h);
    for (std::size_t k = 0; k < n; ++k) {
      const double kk = pi * static_cast<double>(odd ? k + 1 : k) / spec.half_width;
      k2axis[a].push_back(kk * kk);
    }
    nfft[a] = static_cast<int>(n);
    kinds[a] = odd ? FFTW_RODFT00 : FFTW_REDFT00;
    norm_ *= 2.0 * static_cast<double>(N);
  }
  weights_.resize(size());
  k2_.resize(size());
  for (std::size_t i = 0; i < n_[0]; ++i)
    for (std::size_t j = 0; j < n_[1]; ++j)
      for (std::size_t k = 0; k < n_[2]; ++k) {
        const std::size_t idx = (i * n_[1] + j) * n_[2] + k;
        double w = 8.0 * h * h * h;
        const std::size_t ijk[3] = {i, j, k};
        for (int a = 0; a < 3; ++a)
          if (!spec.odd[static_cast<std::size_t>(a)] &&
              (ijk[a] == 0 || ijk[a] + 1 == n_[static_cast<std::size_t>(a)]))
            w *= 0.5;
        weights_[idx] = w;
        k2_[idx] = k2axis[0][i] + k2axis[1][j] + k2axis[2][k];
      }
  buf_ = fftw_alloc_real(size());
  fwd_ = fftw_plan_r2r(3, nfft, buf_, buf_, kinds, FFTW_ESTIMATE);
}

PeakBox::~PeakBox() {
  if (fwd_) fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  if (buf_) fftw_free(buf_);
}

std::array<double, 3> PeakBox::point(std::size_t idx) const {
  const std::size_t k = idx % n_[2];
  const std::size_t j = (idx / n_[2]) % n_[1];
  const std::size_t i = idx / (n_[1] * n_[2]);
  return {coords_[0][i], coords_[1][j], coords_[2][k]};
}

double PeakBox::dot(std::span<const double> a, std::span<const double> b) const {
  const std::size_t n = size();
  double s = 0.0;
  for (std::size_t c = 0; c * n < a.size(); ++c)
    for (std::size_t i = 0; i < n; ++i) s += weights_[i] * a[c * n + i] * b[c * n + i];
  return s;
}

void PeakBox::transform(std::span<const double> in, std::span<double> out,
                        const std::vector<double>& mult) const {
  const std::size_t n = size();
  for (std::size_t c = 0; c * n < in.size(); ++c) {
    std::copy_n(in.begin() + static_cast<std::ptrdiff_t>(c * n), n, buf_);
    fftw_execute(static_cast<fftw_plan>(fwd_));
    for (std::size_t i = 0; i < n; ++i) buf_[i] *= mult[i] / norm_;
    fftw_execute(static_cast<fftw_plan>(fwd_));
    std::copy_n(buf_, n, out.begin() + static_cast<std::ptrdiff_t>(c * n));
  }
}

void PeakBox::apply(std::span<const double> in, std::span<double> out, double shift) const {
  std::vector<double> m(k2_);
  for (double& x : m) x += shift;
  transform(in, out, m);
}

void PeakBox::solve(std::span<const double> in, std::span<double> out, double shift) const {
  std::vector<double> m(k2_);
  for (double& x : m) x = 1.0 / (x + shift);
  transform(in, out, m);
}

PairResidual sync_pair_residual(const SystemParams& params, const RadialProfile& profile,
                                const PeakBoxSpec& spec) {
  PeakBox box(spec);
  const std::size_t n = box.size();
  std::vector<double> w(n), lw(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = box.point(i);
    w[i] = eval_profile(profile, std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])).value;
  }
  box.apply(w, lw, 1.0);
  const double a = params.alpha(), g = params.gamma();
  PairResidual r{0, 0, 0, 0};
  std::vector<double> ru(n), rv(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double U = a * w[i], V = g * w[i];
    ru[i] = a * lw[i] - params.mu(0) * U * U * U - params.beta12() * U * V * V;
    rv[i] = g * lw[i] - params.mu(1) * V * V * V - params.beta12() * V * U * U;
    r.sup_u = std::max(r.sup_u, std::abs(ru[i]));
    r.sup_v = std::max(r.sup_v, std::abs(rv[i]));
  }
  r.l2_u = std::sqrt(box.dot(ru, ru));
  r.l2_v = std::sqrt(box.dot(rv, rv));
  return r;
}

KernelReport kernel_check_2system(const SystemParams& params, const RadialProfile& profile,
                                  const PeakBoxSpec& spec, int wanted) {
  PeakBox box(spec);
  const std::size_t n = box.size();
  const double a = params.alpha(), g = params.gamma();
  const double m1 = params.mu(0), m2 = params.mu(1), b = params.beta12();
  std::vector<double> w2(n), dw(n), r2(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = box.point(i);
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    const auto s = eval_profile(profile, r);
    w2[i] = s.value * s.value;
    dw[i] = r > 0.0 ? s.deriv * x[0] / r : 0.0;
    r2[i] = r * r;
  }
  // pointwise blocks of the linearization
  std::vector<double> huu(n), hvv(n), huv(n);
  for (std::size_t i = 0; i < n; ++i) {
    huu[i] = -(3.0 * m1 * a * a + b * g * g) * w2[i];
    hvv[i] = -(3.0 * m2 * g * g + b * a * a) * w2[i];
    huv[i] = -2.0 * b * a * g * w2[i];
  }
  const LinearOp L = [&](std::span<const double> in, std::span<double> out) {
    box.apply(in, out, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      out[i] += huu[i] * in[i] + huv[i] * in[n + i];
      out[n + i] += huv[i] * in[i] + hvv[i] * in[n + i];
    }
  };
  const LinearOp B = [&](std::span<const double> in, std::span<double> out) { box.apply(in, out, 1.0); };
  const LinearOp M = [&](std::span<const double> in, std::span<double> out) { box.solve(in, out, 1.0); };
  const InnerProduct dot = [&](std::span<const double> x, std::span<const double> y) { return box.dot(x, y); };

  // analytic derivative mode along the synchronized direction
  std::vector<double> k(2 * n), lk(2 * n), bk(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    k[i] = a * dw[i];
    k[n + i] = g * dw[i];
  }
  L(k, lk);
  B(k, bk);
  KernelReport rep;
  rep.floor = std::abs(dot(k, lk)) / dot(k, bk);
  rep.threshold = 100.0 * std::max(rep.floor, 1e-12);

  std::mt19937_64 rng(12345);
  std::normal_distribution<double> nd;
  std::vector<std::vector<double>> init;
  const int block = wanted + 2;
  for (int j = 0; j < block; ++j) {
    std::vector<double> v(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = box.point(i);
      const double env = std::exp(-0.5 * std::sqrt(r2[i]));
      const double poly = std::pow(x[0], 1 + 2 * (j / 2)) * (1.0 + 0.1 * nd(rng));
      v[(j % 2) * n + i] = env * poly;
      v[((j + 1) % 2) * n + i] = 0.2 * env * x[0] * nd(rng);
    }
    init.push_back(std::move(v));
  }
  LobpcgOptions opts;
  opts.max_iter = 400;
  opts.tol = 1e-11;
  const auto eig = lobpcg(L, B, M, nullptr, dot, std::move(init), wanted, opts);
  rep.eigenvalues = eig.values;
  rep.iterations = eig.iterations;
  rep.converged = eig.converged;
  for (double l : eig.values)
    if (std::abs(l) < rep.threshold) ++rep.dim;
  return rep;
}

}  // namespace synseg
