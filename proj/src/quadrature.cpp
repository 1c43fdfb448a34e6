#include "soi/quadrature.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include <Eigen/Eigenvalues>

#include "soi/errors.hpp"

namespace soi {
namespace {

// Legendre P_n and P_n' at x by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  const double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

GaussLegendreRule build_rule(int n) {
  // Jacobi matrix of the Legendre recurrence; eigenvalues are the nodes.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double beta = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = beta;
    jacobi(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi,
                                                        Eigen::EigenvaluesOnly);
  GaussLegendreRule rule;
  rule.nodes = solver.eigenvalues();
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = rule.nodes[i];
    // Newton polish on P_n; the eigenvalues are already within a few ulps.
    for (int it = 0; it < 3; ++it) {
      const auto [p, dp] = legendre(n, x);
      x -= p / dp;
    }
    const auto [p, dp] = legendre(n, x);
    (void)p;
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

double panel(const std::function<double(double)>& f, double a, double b,
             const GaussLegendreRule& rule) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double s = 0.0;
  for (Eigen::Index i = 0; i < rule.nodes.size(); ++i)
    s += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return s * half;
}

struct Adaptive {
  const std::function<double(double)>& f;
  const GaussLegendreRule& rule;
  double tol_density;  // tolerance per unit length
  int max_depth;
  double error = 0.0;
  double worst_unconverged = 0.0;

  double run(double a, double b, double whole, int depth) {
    const double m = 0.5 * (a + b);
    const double left = panel(f, a, m, rule);
    const double right = panel(f, m, b, rule);
    const double diff = std::abs(left + right - whole);
    // Roundoff floor: no rule can resolve below a few ulps of the panel sum.
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() *
                         (std::abs(left) + std::abs(right));
    const double allowed = std::max(tol_density * (b - a), floor);
    if (diff <= allowed || depth >= max_depth) {
      if (diff > allowed)
        worst_unconverged = std::max(worst_unconverged, diff);
      error += diff;
      return left + right;
    }
    return run(a, m, left, depth + 1) + run(m, b, right, depth + 1);
  }
};

}  // namespace

const GaussLegendreRule& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, GaussLegendreRule> cache;
  if (n < 1) throw DomainError("gauss_legendre: need at least one node");
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, const QuadratureOptions& options) {
  if (a == b) return {};
  if (b < a) {
    auto r = integrate(f, b, a, options);
    r.value = -r.value;
    return r;
  }
  const auto& rule = gauss_legendre(options.nodes);
  Adaptive adaptive{f, rule, options.abs_tol / (b - a), options.max_depth};
  const double whole = panel(f, a, b, rule);
  QuadratureResult result;
  result.value = adaptive.run(a, b, whole, 0);
  result.error_estimate = adaptive.error;
  if (adaptive.worst_unconverged > 0.0)
    throw NumericalError("quadrature did not converge on [" +
                             std::to_string(a) + ", " + std::to_string(b) +
                             "]; achieved error " +
                             std::to_string(adaptive.error),
                         adaptive.error);
  return result;
}

}  // namespace soi
