#pragma once

#include <string>
#include <vector>

#include "soi/jet.hpp"
#include "soi/quadrature.hpp"

namespace soi {

/// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool empty() const { return hi < lo; }
};

/// Compactly supported smooth test function on the real line in closed form,
///
///   phi(y) = P((y - c) / rho) * B((y - c) / rho),
///   B(t)   = exp(-1 / (1 - t^2)) for |t| < 1, else 0,
///
/// with P a polynomial given by its monomial coefficients p_0..p_d.
class TestFunction {
 public:
  TestFunction(double center, double radius, std::vector<double> coefficients);

  /// B itself: center 0, radius 1, P = 1.
  static TestFunction base_bump();

  double center() const { return center_; }
  double radius() const { return radius_; }
  const std::vector<double>& coefficients() const { return coeffs_; }
  bool is_zero() const;
  double mass() const { return mass_; }
  Interval support() const { return {center_ - radius_, center_ + radius_}; }

  /// Value at y (order 0).
  double operator()(double y) const;

  /// Taylor jet of phi at y; exactly zero for |(y - c) / rho| >= 1.
  Jet<double> jet(double y, int order) const;

  /// Structural equality of (center, radius, coefficients) up to 1e-12.
  friend bool operator==(const TestFunction& a, const TestFunction& b);

  std::string to_string() const;

 private:
  TestFunction(double center, double radius, std::vector<double> coefficients,
               double mass);
  friend TestFunction scale(double r, const TestFunction& phi);
  friend TestFunction translate(double x, const TestFunction& phi);

  double center_;
  double radius_;
  std::vector<double> coeffs_;
  double mass_;
};

/// r (.) phi : y -> phi(y / r) / r.  Throws DomainError for r <= 0.
TestFunction scale(double r, const TestFunction& phi);

/// x (+) phi : y -> phi(y - x).
TestFunction translate(double x, const TestFunction& phi);

/// 2 rho unless the polynomial factor vanishes identically, then 0.
double diam_supp(const TestFunction& phi);

/// Integral of y^j phi(y) by adaptive Gauss-Legendre quadrature over the
/// support.
double moment(const TestFunction& phi, int j, const QuadratureOptions& options = {});

/// Same moment through the closed form: binomial expansion around the center
/// against the tabulated monomial moments of B.
double moment_closed_form(const TestFunction& phi, int j);

/// Integral of t^i B(t) over [-1, 1]; tabulated once to 1e-15.
double base_bump_moment(int i);

/// Derivative orders accepted by eval().
inline constexpr int kDefaultMaxDerivative = 4;

/// d-th derivative of phi at y through Taylor jets of the closed form.
double eval(const TestFunction& phi, double y, int d,
            int max_derivative = kDefaultMaxDerivative);

/// Cumulative integral of phi from -infinity to y.
double cumulative(const TestFunction& phi, double y);

/// Largest q accepted by make_Aq().
inline constexpr int kDefaultMaxMomentOrder = 6;

/// Unit-mass mollifier centered at 0 with radius rho whose moments of orders
/// 1..q vanish. Solves the (q+1)x(q+1) Hankel system of bump moments for the
/// polynomial factor; throws NumericalError if the system is ill-conditioned.
TestFunction make_Aq(int q, double rho = 1.0,
                     int max_order = kDefaultMaxMomentOrder);

/// Membership in A_q: unit mass and vanishing moments 1..q, tested on the
/// radius-normalized profile so the answer does not depend on scaling.
bool in_Aq(const TestFunction& phi, int q, double tol = 1e-9);

/// The function (1/rho) (.) phi, which has radius 1. Two functions are
/// scalings of each other iff their canonical forms agree.
TestFunction canonical_profile(const TestFunction& phi);

}  // namespace soi
