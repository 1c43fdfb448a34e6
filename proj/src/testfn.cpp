#include "soi/testfn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <sstream>

#include <Eigen/Dense>

#include "soi/errors.hpp"

namespace soi {
namespace {

constexpr double kEqualTol = 1e-12;
constexpr int kBaseMomentTable = 48;
constexpr double kMaxCondition = 1e13;

bool close(double a, double b) {
  return std::abs(a - b) <=
         kEqualTol * std::max({1.0, std::abs(a), std::abs(b)});
}

double bump(double t) {
  if (std::abs(t) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - t * t));
}

const std::vector<double>& base_moments() {
  static const std::vector<double> table = [] {
    std::vector<double> m(kBaseMomentTable, 0.0);
    QuadratureOptions opts;
    opts.abs_tol = 1e-15;
    for (int i = 0; i < kBaseMomentTable; i += 2) {
      // Even integrand: integrate over [0, 1] and double.
      m[i] = 2.0 * integrate([i](double t) { return std::pow(t, i) * bump(t); },
                             0.0, 1.0, opts)
                       .value;
    }
    return m;
  }();
  return table;
}

double closed_form_mass(double radius, const std::vector<double>& coeffs) {
  const auto& m = base_moments();
  double s = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) s += coeffs[i] * m.at(i);
  return radius * s;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TestFunction::TestFunction(double center, double radius,
                           std::vector<double> coefficients)
    : center_(center), radius_(radius), coeffs_(std::move(coefficients)) {
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw DomainError("test function radius must be positive");
  if (!std::isfinite(center)) throw DomainError("test function center must be finite");
  if (coeffs_.empty()) coeffs_.push_back(0.0);
  mass_ = closed_form_mass(radius_, coeffs_);
}

TestFunction::TestFunction(double center, double radius,
                           std::vector<double> coefficients, double mass)
    : center_(center),
      radius_(radius),
      coeffs_(std::move(coefficients)),
      mass_(mass) {}

TestFunction TestFunction::base_bump() { return TestFunction(0.0, 1.0, {1.0}); }

bool TestFunction::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](double c) { return c == 0.0; });
}

double TestFunction::operator()(double y) const {
  const double t = (y - center_) / radius_;
  if (std::abs(t) >= 1.0) return 0.0;
  double p = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) p = p * t + *it;
  return p * bump(t);
}

Jet<double> TestFunction::jet(double y, int order) const {
  const double t0 = (y - center_) / radius_;
  if (std::abs(t0) >= 1.0) return Jet<double>(order);
  const auto t = Jet<double>::variable(t0, 1.0 / radius_, order);
  const auto one = Jet<double>::constant(1.0, order);
  const auto b = exp(-reciprocal(one - t * t));
  auto p = Jet<double>::constant(coeffs_.back(), order);
  for (auto it = std::next(coeffs_.rbegin()); it != coeffs_.rend(); ++it)
    p = p * t + Jet<double>::constant(*it, order);
  return p * b;
}

bool operator==(const TestFunction& a, const TestFunction& b) {
  if (!close(a.center_, b.center_) || !close(a.radius_, b.radius_)) return false;
  const std::size_t n = std::max(a.coeffs_.size(), b.coeffs_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double ca = i < a.coeffs_.size() ? a.coeffs_[i] : 0.0;
    const double cb = i < b.coeffs_.size() ? b.coeffs_[i] : 0.0;
    if (!close(ca, cb)) return false;
  }
  return true;
}

std::string TestFunction::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << "bump(" << center_ << ", " << radius_ << ";";
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    os << (i == 0 ? " " : ", ") << coeffs_[i];
  os << ")";
  return os.str();
}

TestFunction scale(double r, const TestFunction& phi) {
  if (!(r > 0.0) || !std::isfinite(r))
    throw DomainError("scale: factor must be positive, got " + std::to_string(r));
  std::vector<double> coeffs = phi.coeffs_;
  for (double& c : coeffs) c /= r;
  return TestFunction(r * phi.center_, r * phi.radius_, std::move(coeffs),
                      phi.mass_);
}

TestFunction translate(double x, const TestFunction& phi) {
  return TestFunction(phi.center_ + x, phi.radius_, phi.coeffs_, phi.mass_);
}

double diam_supp(const TestFunction& phi) {
  return phi.is_zero() ? 0.0 : 2.0 * phi.radius();
}

double moment(const TestFunction& phi, int j, const QuadratureOptions& options) {
  if (j < 0) throw DomainError("moment: order must be non-negative");
  const Interval s = phi.support();
  return integrate([&](double y) { return std::pow(y, j) * phi(y); }, s.lo, s.hi,
                   options)
      .value;
}

double base_bump_moment(int i) { return base_moments().at(i); }

double moment_closed_form(const TestFunction& phi, int j) {
  if (j < 0) throw DomainError("moment: order must be non-negative");
  const auto& m = base_moments();
  const auto& p = phi.coefficients();
  const double c = phi.center(), rho = phi.radius();
  double total = 0.0;
  for (int i = 0; i <= j; ++i) {
    double inner = 0.0;
    for (std::size_t l = 0; l < p.size(); ++l) inner += p[l] * m.at(i + l);
    total += binomial(j, i) * std::pow(c, j - i) * std::pow(rho, i) * inner;
  }
  return rho * total;
}

double eval(const TestFunction& phi, double y, int d, int max_derivative) {
  if (d < 0 || d > max_derivative || d > Jet<double>::kMaxOrder)
    throw DomainError("eval: derivative order " + std::to_string(d) +
                      " outside [0, " + std::to_string(max_derivative) + "]");
  if (d == 0) return phi(y);
  return phi.jet(y, d).derivative(d);
}

double cumulative(const TestFunction& phi, double y) {
  const Interval s = phi.support();
  if (y <= s.lo) return 0.0;
  if (y >= s.hi) return phi.mass();
  QuadratureOptions opts;
  opts.nodes = 32;
  opts.abs_tol = 1e-13;
  return integrate([&](double t) { return phi(t); }, s.lo, y, opts).value;
}

TestFunction make_Aq(int q, double rho, int max_order) {
  if (q < 0 || q > max_order)
    throw PreconditionError("make_Aq: q = " + std::to_string(q) +
                            " outside [0, " + std::to_string(max_order) + "]");
  if (!(rho > 0.0)) throw DomainError("make_Aq: radius must be positive");
  const auto& m = base_moments();
  const int n = q + 1;
  Eigen::MatrixXd hankel(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) hankel(j, i) = m.at(i + j);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs[0] = 1.0 / rho;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(hankel);
  const auto& sv = svd.singularValues();
  const double condition = sv[0] / sv[n - 1];
  if (!(condition < kMaxCondition))
    throw NumericalError("make_Aq: moment matrix ill-conditioned, condition " +
                             std::to_string(condition),
                         condition);
  const Eigen::VectorXd p = hankel.fullPivLu().solve(rhs);
  return TestFunction(0.0, rho, std::vector<double>(p.data(), p.data() + n));
}

TestFunction canonical_profile(const TestFunction& phi) {
  return scale(1.0 / phi.radius(), phi);
}

bool in_Aq(const TestFunction& phi, int q, double tol) {
  if (std::abs(phi.mass() - 1.0) > tol) return false;
  const TestFunction canon = canonical_profile(phi);
  for (int j = 1; j <= q; ++j)
    if (std::abs(moment_closed_form(canon, j)) > tol) return false;
  return true;
}

}  // namespace soi
