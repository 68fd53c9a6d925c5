#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <random>

#include "synseg/krylov.hpp"

using namespace synseg;

namespace {

struct Problem {
  Eigen::MatrixXd A, B;
  LinearOp opA, opB, ident;
  InnerProduct dot;
  explicit Problem(int n, double shift, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g;
    Eigen::MatrixXd Q(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) Q(i, j) = g(rng);
    A = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      A(i, i) = 2.0 + shift;
      if (i > 0) A(i, i - 1) = A(i - 1, i) = -1.0;
    }
    A += 0.01 * (Q + Q.transpose());
    B = Eigen::MatrixXd::Identity(n, n);
    for (int i = 0; i < n; ++i) B(i, i) = 1.0 + 0.5 * std::sin(i);
    opA = [this](std::span<const double> x, std::span<double> y) {
      Eigen::Map<Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size())) =
          A * Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
    };
    opB = [this](std::span<const double> x, std::span<double> y) {
      Eigen::Map<Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size())) =
          B * Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
    };
    ident = [](std::span<const double> x, std::span<double> y) { std::copy(x.begin(), x.end(), y.begin()); };
    dot = [](std::span<const double> a, std::span<const double> b) {
      double s = 0;
      for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
      return s;
    };
  }
};

}  // namespace

TEST_CASE("conjugate gradients") {
  Problem p(120, 0.1, 1);
  std::vector<double> b(120, 1.0), x(120, 0.0);
  const auto r = conjugate_gradient(p.opA, p.ident, p.dot, b, x, 1e-12, 500);
  CHECK(r.converged);
  const Eigen::VectorXd ref = p.A.ldlt().solve(Eigen::VectorXd::Ones(120));
  CHECK((Eigen::Map<Eigen::VectorXd>(x.data(), 120) - ref).norm() < 1e-9 * ref.norm());
}

TEST_CASE("MINRES on an indefinite operator") {
  Problem p(150, -1.0, 2);
  std::vector<double> b(150), x(150, 0.0);
  for (int i = 0; i < 150; ++i) b[static_cast<std::size_t>(i)] = std::cos(0.1 * i);
  const auto r = minres(p.opA, p.ident, p.dot, b, x, 1e-12, 2000);
  CHECK(r.converged);
  const Eigen::VectorXd ref = p.A.fullPivLu().solve(Eigen::Map<Eigen::VectorXd>(b.data(), 150));
  CHECK((Eigen::Map<Eigen::VectorXd>(x.data(), 150) - ref).norm() < 1e-8 * ref.norm());
  // diagonal preconditioner changes the path, not the answer
  std::vector<double> y(150, 0.0);
  const LinearOp diag = [&](std::span<const double> a, std::span<double> o) {
    for (std::size_t i = 0; i < a.size(); ++i) o[i] = a[i] / 2.0;
  };
  CHECK(minres(p.opA, diag, p.dot, b, y, 1e-12, 2000).converged);
  CHECK((Eigen::Map<Eigen::VectorXd>(y.data(), 150) - ref).norm() < 1e-8 * ref.norm());
}

TEST_CASE("LOBPCG against a dense generalized solve") {
  const int n = 200;
  Problem p(n, -0.5, 3);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(p.A, p.B);
  std::mt19937 rng(9);
  std::normal_distribution<double> g;
  std::vector<std::vector<double>> init(6, std::vector<double>(n));
  for (auto& v : init)
    for (auto& x : v) x = g(rng);
  LobpcgOptions o;
  o.max_iter = 500;
  o.tol = 1e-12;
  const auto res = lobpcg(p.opA, p.opB, p.ident, nullptr, p.dot, init, 4, o);
  CHECK(res.converged);
  for (int i = 0; i < 4; ++i)
    CHECK(res.values[static_cast<std::size_t>(i)] == doctest::Approx(es.eigenvalues()(i)).epsilon(1e-8));

  // restricted to the complement of e_0
  const LinearOp proj = [](std::span<const double> x, std::span<double> y) {
    std::copy(x.begin(), x.end(), y.begin());
    y[0] = 0.0;
  };
  const auto rr = lobpcg(p.opA, p.opB, p.ident, proj, p.dot, init, 2, o);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> er(p.A.bottomRightCorner(n - 1, n - 1),
                                                              p.B.bottomRightCorner(n - 1, n - 1));
  CHECK(rr.values[0] == doctest::Approx(er.eigenvalues()(0)).epsilon(1e-8));
  CHECK(rr.values[0] >= res.values[0]);
}
