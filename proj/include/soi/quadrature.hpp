#pragma once

#include <functional>

#include <Eigen/Core>

namespace soi {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// Cached n-point rule computed by the Golub-Welsch eigenvalue method.
const GaussLegendreRule& gauss_legendre(int n);

struct QuadratureOptions {
  int nodes = 64;          // per panel
  double abs_tol = 1e-12;  // global absolute error target
  int max_depth = 20;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// Adaptive panel-bisection Gauss-Legendre quadrature of f over [a, b].
/// Throws NumericalError when a panel cannot meet its share of abs_tol.
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, const QuadratureOptions& options = {});

}  // namespace soi
