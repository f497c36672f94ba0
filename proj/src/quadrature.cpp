#include "imlab/quadrature.hpp"

#include "imlab/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace imlab {

QuadratureRule QuadratureRule::gauss_hermite(int order) {
  if (order < 1 || order > 1000) throw DomainError("quadrature order must be in 1..1000");
  using real = long double;
  const real pi_quarter = std::pow(std::acos(real(-1)), real(-0.25));
  const int n = order;
  std::vector<real> x(static_cast<std::size_t>(n));
  std::vector<real> w(static_cast<std::size_t>(n));

  // Roots of the orthonormal Hermite polynomial are the eigenvalues of its
  // Jacobi matrix (off-diagonal sqrt(j / 2)); each is then polished by Newton
  // steps in long double, which also give the weights.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd off(std::max(n - 1, 0));
  for (int j = 1; j < n; ++j) off[j - 1] = std::sqrt(0.5 * j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw DomainError("gauss_hermite: eigenvalue iteration failed");

  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Eigenvalues ascend; take the largest first.
    real z = eig.eigenvalues()[n - 1 - i];
    real pp = 0;
    for (int it = 0; it < 20; ++it) {
      real p1 = pi_quarter;
      real p2 = 0;
      for (int j = 1; j <= n; ++j) {
        real p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(real(2) / j) * p2 - std::sqrt(real(j - 1) / j) * p3;
      }
      pp = std::sqrt(real(2 * n)) * p2;
      real step = p1 / pp;
      z -= step;
      if (std::abs(step) <= real(1e-18) * std::max(real(1), std::abs(z))) break;
    }
    x[static_cast<std::size_t>(i)] = z;
    x[static_cast<std::size_t>(n - 1 - i)] = -z;
    w[static_cast<std::size_t>(i)] = real(2) / (pp * pp);
    w[static_cast<std::size_t>(n - 1 - i)] = w[static_cast<std::size_t>(i)];
  }

  QuadratureRule rule;
  rule.order = n;
  const real sqrt2 = std::sqrt(real(2));
  const real sqrt_pi = std::sqrt(std::acos(real(-1)));
  // Ascending node order.
  for (int i = n - 1; i >= 0; --i) {
    real xi = x[static_cast<std::size_t>(i)];
    if (n % 2 == 1 && i == half - 1) xi = 0;
    rule.nodes.push_back(static_cast<double>(sqrt2 * xi));
    rule.weights.push_back(static_cast<double>(w[static_cast<std::size_t>(i)] / sqrt_pi));
  }
  return rule;
}

int default_quadrature_order() {
  if (const char* env = std::getenv("IMLAB_QUAD_ORDER")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= kMinQuadratureOrder && v <= 1000) return static_cast<int>(v);
    throw DomainError(std::string("IMLAB_QUAD_ORDER: expected an integer in 16..1000, got '") + env + "'");
  }
  return kDefaultQuadratureOrder;
}

} // namespace imlab
