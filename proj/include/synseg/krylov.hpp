#pragma once
#include <functional>
#include <span>
#include <vector>

namespace synseg {

using LinearOp = std::function<void(std::span<const double>, std::span<double>)>;
using InnerProduct = std::function<double(std::span<const double>, std::span<const double>)>;

struct KrylovResult {
  bool converged = false;
  int iterations = 0;
  double initial_residual = 0.0;
  double residual = 0.0;
  // Smallest |Ritz value| seen by the Lanczos process (MINRES only).
  double min_ritz = 0.0;
};

// Preconditioned conjugate gradients for A symmetric positive definite in `dot`.
KrylovResult conjugate_gradient(const LinearOp& A, const LinearOp& precond, const InnerProduct& dot,
                                std::span<const double> b, std::span<double> x, double rtol,
                                int max_iter);

// Preconditioned MINRES for A symmetric (possibly indefinite) in `dot`, precond SPD.
KrylovResult minres(const LinearOp& A, const LinearOp& precond, const InnerProduct& dot,
                    std::span<const double> b, std::span<double> x, double rtol, int max_iter);

struct EigenPairs {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;
  int iterations = 0;
  bool converged = false;
  std::vector<double> history;  // lowest Ritz value per iteration
};

struct LobpcgOptions {
  int block = 4;
  int max_iter = 300;
  double tol = 1e-6;  // on successive changes of every wanted Ritz value
  double residual_tol = 0.0;
};

// Lowest eigenpairs of A x = lambda B x with A, B symmetric in `dot`, B positive definite.
// `project` (optional) is applied to every search direction, restricting the problem to its range.
EigenPairs lobpcg(const LinearOp& A, const LinearOp& B, const LinearOp& precond,
                  const LinearOp& project, const InnerProduct& dot,
                  std::vector<std::vector<double>> initial, int wanted, const LobpcgOptions& opts);

}  // namespace synseg
