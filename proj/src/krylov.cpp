#include "synseg/krylov.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace synseg {
namespace {

using Vec = std::vector<double>;

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

}  // namespace

KrylovResult conjugate_gradient(const LinearOp& A, const LinearOp& precond, const InnerProduct& dot,
                                std::span<const double> b, std::span<double> x, double rtol,
                                int max_iter) {
  const std::size_t n = b.size();
  KrylovResult res;
  Vec r(n), z(n), p(n), q(n);
  A(x, q);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];
  const double bnorm = std::sqrt(dot(b, b));
  res.initial_residual = std::sqrt(dot(r, r));
  res.residual = res.initial_residual;
  if (bnorm == 0.0 || res.residual <= rtol * bnorm) {
    res.converged = true;
    return res;
  }
  precond(r, z);
  p = z;
  double rz = dot(r, z);
  for (int it = 1; it <= max_iter; ++it) {
    A(p, q);
    const double pq = dot(p, q);
    if (!(pq > 0.0)) break;
    const double a = rz / pq;
    axpy(a, p, x);
    axpy(-a, q, r);
    res.iterations = it;
    res.residual = std::sqrt(dot(r, r));
    if (res.residual <= rtol * bnorm) {
      res.converged = true;
      break;
    }
    precond(r, z);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  return res;
}

// Preconditioned MINRES after Paige and Saunders; residuals are measured in the preconditioner norm.
KrylovResult minres(const LinearOp& A, const LinearOp& precond, const InnerProduct& dot,
                    std::span<const double> b, std::span<double> x, double rtol, int max_iter) {
  const std::size_t n = b.size();
  KrylovResult res;
  Vec r1(n), r2(n), y(n), v(n), w(n, 0.0), w1(n, 0.0), w2(n, 0.0);
  A(x, y);
  for (std::size_t i = 0; i < n; ++i) r1[i] = b[i] - y[i];
  precond(r1, y);
  double beta1 = dot(r1, y);
  if (beta1 < 0.0) {
    res.residual = std::numeric_limits<double>::quiet_NaN();
    return res;
  }
  beta1 = std::sqrt(beta1);
  res.initial_residual = beta1;
  res.residual = beta1;
  res.min_ritz = std::numeric_limits<double>::infinity();
  if (beta1 == 0.0) {
    res.converged = true;
    return res;
  }
  r2 = r1;
  double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0, phibar = beta1;
  double cs = -1.0, sn = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int it = 1; it <= max_iter; ++it) {
    const double s = 1.0 / beta;
    for (std::size_t i = 0; i < n; ++i) v[i] = s * y[i];
    A(v, y);
    if (it >= 2) axpy(-beta / oldb, r1, y);
    const double alfa = dot(v, y);
    axpy(-alfa / beta, r2, y);
    std::swap(r1, r2);
    r2 = y;
    precond(r2, y);
    oldb = beta;
    const double bb = dot(r2, y);
    if (bb < 0.0) break;
    beta = std::sqrt(bb);
    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    double gamma = std::max(std::hypot(gbar, beta), eps);
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;
    std::swap(w1, w2);
    std::swap(w2, w);
    for (std::size_t i = 0; i < n; ++i) w[i] = (v[i] - oldeps * w1[i] - delta * w2[i]) / gamma;
    axpy(phi, w, x);
    res.min_ritz = std::min(res.min_ritz, gamma);
    res.iterations = it;
    res.residual = phibar;
    if (phibar <= rtol * beta1) {
      res.converged = true;
      break;
    }
    if (beta < eps * beta1) break;
  }
  return res;
}

EigenPairs lobpcg(const LinearOp& A, const LinearOp& B, const LinearOp& precond,
                  const LinearOp& project, const InnerProduct& dot,
                  std::vector<std::vector<double>> initial, int wanted, const LobpcgOptions& opts) {
  using Eigen::MatrixXd;
  using Eigen::VectorXd;
  const std::size_t n = initial.front().size();
  const int k = static_cast<int>(initial.size());
  auto proj = [&](Vec& x) {
    if (!project) return;
    Vec t(n);
    project(x, t);
    x = std::move(t);
  };
  auto apply = [&](const LinearOp& op, const Vec& x) {
    Vec y(n);
    op(x, y);
    return y;
  };
  auto gram = [&](const std::vector<Vec>& L, const std::vector<Vec>& R) {
    MatrixXd G(L.size(), R.size());
    for (std::size_t i = 0; i < L.size(); ++i)
      for (std::size_t j = 0; j < R.size(); ++j) G(i, j) = dot(L[i], R[j]);
    return MatrixXd(0.5 * (G + G.transpose()));
  };
  auto combine = [&](const std::vector<Vec>& S, const VectorXd& c) {
    Vec out(n, 0.0);
    for (std::size_t i = 0; i < S.size(); ++i) axpy(c(static_cast<Eigen::Index>(i)), S[i], out);
    return out;
  };

  std::vector<Vec> X = std::move(initial), P;
  for (auto& x : X) proj(x);
  EigenPairs out;
  std::vector<double> lambda(static_cast<std::size_t>(k), std::numeric_limits<double>::infinity());

  for (int it = 0; it < opts.max_iter; ++it) {
    std::vector<Vec> AX, BX;
    for (const auto& x : X) {
      AX.push_back(apply(A, x));
      BX.push_back(apply(B, x));
    }
    // search space [X, W, P]
    std::vector<Vec> S = X;
    std::vector<double> resid;
    if (it > 0) {
      for (int i = 0; i < k; ++i) {
        Vec r = AX[static_cast<std::size_t>(i)];
        axpy(-lambda[static_cast<std::size_t>(i)], BX[static_cast<std::size_t>(i)], r);
        proj(r);
        resid.push_back(std::sqrt(std::max(0.0, dot(r, r))));
        Vec wv = apply(precond, r);
        proj(wv);
        S.push_back(std::move(wv));
      }
      for (const auto& p : P) S.push_back(p);
    }
    std::vector<Vec> AS = AX, BS = BX;
    for (std::size_t i = X.size(); i < S.size(); ++i) {
      AS.push_back(apply(A, S[i]));
      BS.push_back(apply(B, S[i]));
    }
    const MatrixXd GA = gram(S, AS), GB = gram(S, BS);
    Eigen::SelfAdjointEigenSolver<MatrixXd> eb(GB);
    const double dmax = eb.eigenvalues().maxCoeff();
    std::vector<int> keep;
    for (int i = 0; i < eb.eigenvalues().size(); ++i)
      if (eb.eigenvalues()(i) > 1e-12 * dmax) keep.push_back(i);
    MatrixXd T(GB.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j)
      T.col(static_cast<Eigen::Index>(j)) =
          eb.eigenvectors().col(keep[j]) / std::sqrt(eb.eigenvalues()(keep[j]));
    Eigen::SelfAdjointEigenSolver<MatrixXd> ea(T.transpose() * GA * T);
    const MatrixXd C = T * ea.eigenvectors();
    const int kk = std::min<int>(k, static_cast<int>(C.cols()));

    std::vector<Vec> Xn, Pn;
    std::vector<double> lam_new;
    for (int i = 0; i < kk; ++i) {
      const VectorXd c = C.col(i);
      Xn.push_back(combine(S, c));
      lam_new.push_back(ea.eigenvalues()(i));
      VectorXd cp = c;
      cp.head(static_cast<Eigen::Index>(X.size())).setZero();
      if (it > 0) Pn.push_back(combine(S, cp));
    }
    double change = 0.0;
    for (int i = 0; i < std::min(wanted, kk); ++i)
      change = std::max(change, std::abs(lam_new[static_cast<std::size_t>(i)] -
                                         lambda[static_cast<std::size_t>(i)]) /
                                    std::max(1.0, std::abs(lam_new[static_cast<std::size_t>(i)])));
    X = std::move(Xn);
    P = std::move(Pn);
    lambda = lam_new;
    out.history.push_back(lambda.front());
    out.iterations = it + 1;
    bool res_ok = true;
    if (opts.residual_tol > 0.0) {
      if (resid.empty()) res_ok = false;
      for (int i = 0; i < std::min<int>(wanted, static_cast<int>(resid.size())); ++i)
        res_ok = res_ok && resid[static_cast<std::size_t>(i)] <= opts.residual_tol;
    }
    if (it > 1 && change < opts.tol && res_ok) {
      out.converged = true;
      break;
    }
  }
  for (int i = 0; i < std::min<int>(wanted, static_cast<int>(X.size())); ++i) {
    out.values.push_back(lambda[static_cast<std::size_t>(i)]);
    out.vectors.push_back(X[static_cast<std::size_t>(i)]);
  }
  return out;
}

}  // namespace synseg
