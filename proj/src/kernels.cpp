#include "synseg/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <string>
#include <vector>

namespace synseg::kernels {
namespace {

constexpr std::size_t kChunk = 1 << 13;

double pairwise(std::span<const double> x) {
  if (x.size() <= 8) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  const std::size_t m = x.size() / 2;
  return pairwise(x.first(m)) + pairwise(x.subspan(m));
}

template <class Term>
double chunked_sum(std::size_t n, Term term) {
  const std::size_t nchunks = (n + kChunk - 1) / kChunk;
  std::vector<double> partial(nchunks, 0.0);
#pragma omp parallel for schedule(static)
  for (long c = 0; c < static_cast<long>(nchunks); ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
    const std::size_t hi = std::min(n, lo + kChunk);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    partial[static_cast<std::size_t>(c)] = s;
  }
  return pairwise(partial);
}

struct RadialTables {
  std::vector<double> sq, isq, ir2;
};

RadialTables radial_tables(const WedgeGrid& g) {
  RadialTables t;
  for (std::size_t i = 0; i < g.n_rho(); ++i) {
    const double r = g.rho(i);
    t.sq.push_back(std::sqrt(r));
    t.isq.push_back(1.0 / std::sqrt(r));
    t.ir2.push_back(1.0 / (r * r));
  }
  return t;
}

}  // namespace

void configure_threads() {
  if (const char* env = std::getenv("GPE_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) omp_set_num_threads(std::min(cap, omp_get_num_procs()));
  }
}

int thread_count() { return omp_get_max_threads(); }

double weighted_dot(std::span<const double> w, std::span<const double> a,
                    std::span<const double> b) {
  return chunked_sum(w.size(), [&](std::size_t i) { return w[i] * a[i] * b[i]; });
}

double weighted_dot_serial(std::span<const double> w, std::span<const double> a,
                           std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * a[i] * b[i];
  return s;
}

double weighted_sum(std::span<const double> w, std::span<const double> f) {
  return chunked_sum(w.size(), [&](std::size_t i) { return w[i] * f[i]; });
}

double weighted_sum_serial(std::span<const double> w, std::span<const double> f) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * f[i];
  return s;
}

void neg_laplacian(const WedgeGrid& g, ThetaSymmetry s, std::span<const double> in,
                   std::span<double> out) {
  const auto c = g.stencil();
  const int S = g.stencil_half();
  const std::size_t nr = g.n_rho(), nt = g.n_theta(), nz = g.n_z();
  const double ih2 = 1.0 / (g.h() * g.h());
  const double iht2 = 1.0 / (g.h_theta() * g.h_theta());
  const RadialTables rt = radial_tables(g);

  // theta neighbour table, row j holds offsets -S..S
  const std::size_t w = static_cast<std::size_t>(2 * S + 1);
  std::vector<std::size_t> tj(nt * w);
  std::vector<double> ts(nt * w);
  for (std::size_t j = 0; j < nt; ++j)
    for (int o = -S; o <= S; ++o) {
      const auto nb = g.theta_neighbour(s, static_cast<long>(j) + o);
      tj[j * w + static_cast<std::size_t>(o + S)] = nb.j;
      ts[j * w + static_cast<std::size_t>(o + S)] = nb.sign;
    }

#pragma omp parallel for schedule(static)
  for (long li = 0; li < static_cast<long>(nr); ++li) {
    const std::size_t i = static_cast<std::size_t>(li);
    for (std::size_t j = 0; j < nt; ++j) {
      const std::size_t base = g.index(i, j, 0);
      if (ts[j * w + static_cast<std::size_t>(S)] == 0.0) {
        std::fill_n(out.begin() + static_cast<long>(base), nz, 0.0);
        continue;
      }
      const double* tsj = &ts[j * w + static_cast<std::size_t>(S)];
      const std::size_t* tjj = &tj[j * w + static_cast<std::size_t>(S)];
      for (std::size_t k = 0; k < nz; ++k) {
        const double u = in[base + k];
        double ar = c[0] * rt.sq[i] * u;
        double at = c[0] * u;
        double az = c[0] * u;
        for (int q = 1; q <= S; ++q) {
          const std::size_t uq = static_cast<std::size_t>(q);
          if (i + uq < nr) ar += c[uq] * rt.sq[i + uq] * in[g.index(i + uq, j, k)];
          if (i >= uq) ar += c[uq] * rt.sq[i - uq] * in[g.index(i - uq, j, k)];
          at += c[uq] * (tsj[q] * in[g.index(i, tjj[q], k)] + tsj[-q] * in[g.index(i, tjj[-q], k)]);
          if (k + uq < nz) az += c[uq] * in[base + k + uq];
          az += c[uq] * in[base + (k >= uq ? k - uq : uq - k)];
        }
        const double lap = ar * rt.isq[i] * ih2 + 0.25 * rt.ir2[i] * u +
                           at * rt.ir2[i] * iht2 + az * ih2;
        out[base + k] = -lap;
      }
    }
  }
}

void neg_laplacian_serial(const WedgeGrid& g, ThetaSymmetry s, std::span<const double> in,
                          std::span<double> out) {
  const auto c = g.stencil();
  const int S = g.stencil_half();
  const long nr = static_cast<long>(g.n_rho()), nz = static_cast<long>(g.n_z());
  const double h = g.h(), ht = g.h_theta();
  // value with ghost rules: zero past rho ends and z top, even mirror at z = 0
  auto at = [&](long i, long j, long k) -> double {
    if (i < 0 || i >= nr || k >= nz) return 0.0;
    if (k < 0) k = -k;
    const auto nb = g.theta_neighbour(s, j);
    if (nb.sign == 0.0) return 0.0;
    return nb.sign * in[g.index(static_cast<std::size_t>(i), nb.j, static_cast<std::size_t>(k))];
  };
  for (long i = 0; i < nr; ++i)
    for (long j = 0; j < static_cast<long>(g.n_theta()); ++j)
      for (long k = 0; k < nz; ++k) {
        const std::size_t idx =
            g.index(static_cast<std::size_t>(i), static_cast<std::size_t>(j), static_cast<std::size_t>(k));
        if (g.theta_neighbour(s, j).sign == 0.0) {
          out[idx] = 0.0;
          continue;
        }
        const double r = g.rho(static_cast<std::size_t>(i));
        double d_rho = 0.0, d_theta = 0.0, d_z = 0.0;
        for (long q = -S; q <= S; ++q) {
          const double cq = c[static_cast<std::size_t>(std::abs(q))];
          const double rq = r + static_cast<double>(q) * h;
          if (i + q >= 0 && i + q < nr) d_rho += cq * std::sqrt(rq) * at(i + q, j, k);
          d_theta += cq * at(i, j + q, k);
          d_z += cq * at(i, j, k + q);
        }
        const double u = at(i, j, k);
        const double lap = d_rho / (std::sqrt(r) * h * h) + u / (4.0 * r * r) +
                           d_theta / (r * r * ht * ht) + d_z / (h * h);
        out[idx] = -lap;
      }
}

namespace {

template <bool Parallel>
void gradient_impl(const Couplings& cp, std::span<const double> pot, std::span<const double> uvw,
                   std::span<double> out) {
  const std::size_t n = uvw.size() / 3;
  const auto [m1, m2, m3] = cp.mu;
  auto body = [&](std::size_t i) {
    const double u = uvw[i], v = uvw[n + i], w = uvw[2 * n + i];
    const double u2 = u * u, v2 = v * v, w2 = w * w;
    out[i] = pot[i] * u - m1 * u2 * u - cp.b12 * u * v2 - cp.b13 * u * w2;
    out[n + i] = pot[n + i] * v - m2 * v2 * v - cp.b12 * u2 * v - cp.b23 * v * w2;
    out[2 * n + i] = pot[2 * n + i] * w - m3 * w2 * w - cp.b13 * u2 * w - cp.b23 * v2 * w;
  };
  if constexpr (Parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < static_cast<long>(n); ++i) body(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < n; ++i) body(i);
  }
}

template <bool Parallel>
void hessian_impl(const Couplings& cp, std::span<const double> pot, std::span<const double> uvw,
                  std::span<const double> d, std::span<double> out) {
  const std::size_t n = uvw.size() / 3;
  const auto [m1, m2, m3] = cp.mu;
  auto body = [&](std::size_t i) {
    const double u = uvw[i], v = uvw[n + i], w = uvw[2 * n + i];
    const double a = d[i], b = d[n + i], c = d[2 * n + i];
    const double u2 = u * u, v2 = v * v, w2 = w * w;
    const double huu = pot[i] - 3.0 * m1 * u2 - cp.b12 * v2 - cp.b13 * w2;
    const double hvv = pot[n + i] - 3.0 * m2 * v2 - cp.b12 * u2 - cp.b23 * w2;
    const double hww = pot[2 * n + i] - 3.0 * m3 * w2 - cp.b13 * u2 - cp.b23 * v2;
    const double huv = -2.0 * cp.b12 * u * v;
    const double huw = -2.0 * cp.b13 * u * w;
    const double hvw = -2.0 * cp.b23 * v * w;
    out[i] = huu * a + huv * b + huw * c;
    out[n + i] = huv * a + hvv * b + hvw * c;
    out[2 * n + i] = huw * a + hvw * b + hww * c;
  };
  if constexpr (Parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < static_cast<long>(n); ++i) body(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < n; ++i) body(i);
  }
}

}  // namespace

void local_gradient(const Couplings& c, std::span<const double> pot, std::span<const double> uvw,
                    std::span<double> out) {
  gradient_impl<true>(c, pot, uvw, out);
}
void local_gradient_serial(const Couplings& c, std::span<const double> pot,
                           std::span<const double> uvw, std::span<double> out) {
  gradient_impl<false>(c, pot, uvw, out);
}
void local_hessian(const Couplings& c, std::span<const double> pot, std::span<const double> uvw,
                   std::span<const double> d, std::span<double> out) {
  hessian_impl<true>(c, pot, uvw, d, out);
}
void local_hessian_serial(const Couplings& c, std::span<const double> pot,
                          std::span<const double> uvw, std::span<const double> d,
                          std::span<double> out) {
  hessian_impl<false>(c, pot, uvw, d, out);
}

}  // namespace synseg::kernels
