#include "soi/symbolic_net.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "soi/errors.hpp"

namespace soi {
namespace {

constexpr double kCancelTol = 1e-13;

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

// Dominance order used for sorting: a before b if a grows faster.
bool dominates(const Monomial& a, const Monomial& b) {
  if (a.power != b.power) return a.power < b.power;
  return a.log_power > b.log_power;
}

}  // namespace

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

bool order_leq(const Order& a, const Order& b) {
  if (a.power != b.power) return a.power > b.power;
  return a.log_power <= b.log_power;
}

bool operator==(const Order& a, const Order& b) {
  return a.power == b.power && a.log_power == b.log_power;
}

SymbolicNet::SymbolicNet(std::vector<Monomial> terms) : terms_(std::move(terms)) {
  normalize();
}

SymbolicNet SymbolicNet::constant(double c) { return SymbolicNet({{c, 0, 0}}); }

SymbolicNet SymbolicNet::monomial(double c, Rational power, int log_power) {
  return SymbolicNet({{c, power, log_power}});
}

SymbolicNet SymbolicNet::gauge() { return monomial(1.0, 1, 0); }

void SymbolicNet::normalize() {
  std::stable_sort(terms_.begin(), terms_.end(), dominates);
  std::vector<Monomial> merged;
  std::vector<double> magnitude;  // sum of |c| merged into each slot
  for (const auto& t : terms_) {
    if (!merged.empty() && merged.back().power == t.power &&
        merged.back().log_power == t.log_power) {
      merged.back().coeff += t.coeff;
      magnitude.back() += std::abs(t.coeff);
    } else {
      merged.push_back(t);
      magnitude.push_back(std::abs(t.coeff));
    }
  }
  terms_.clear();
  for (std::size_t i = 0; i < merged.size(); ++i)
    if (merged[i].coeff != 0.0 &&
        std::abs(merged[i].coeff) > kCancelTol * magnitude[i])
      terms_.push_back(merged[i]);
}

const Monomial& SymbolicNet::leading() const {
  if (terms_.empty()) throw DomainError("the zero net has no leading term");
  return terms_.front();
}

Order SymbolicNet::order() const {
  const auto& m = leading();
  return {m.power, m.log_power};
}

double SymbolicNet::eval(double u) const {
  const double L = -std::log(u);
  double s = 0.0;
  for (const auto& t : terms_) {
    double v = t.coeff * std::pow(u, to_double(t.power));
    if (t.log_power != 0) v *= std::pow(L, t.log_power);
    s += v;
  }
  return s;
}

std::pair<int, double> SymbolicNet::signed_log_abs(double log_u) const {
  if (terms_.empty()) return {0, -std::numeric_limits<double>::infinity()};
  const double log_L = std::log(-log_u);
  const auto& lead = terms_.front();
  double s = 1.0;
  for (std::size_t i = 1; i < terms_.size(); ++i) {
    const auto& t = terms_[i];
    const double e = to_double(t.power - lead.power) * log_u +
                     (t.log_power - lead.log_power) * log_L;
    s += (t.coeff / lead.coeff) * std::exp(e);
  }
  if (s == 0.0) return {0, -std::numeric_limits<double>::infinity()};
  const double log_abs = std::log(std::abs(lead.coeff)) + to_double(lead.power) * log_u +
                         lead.log_power * log_L + std::log(std::abs(s));
  const int sign = ((lead.coeff > 0) == (s > 0)) ? 1 : -1;
  return {sign, log_abs};
}

std::string SymbolicNet::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const auto& t = terms_[i];
    double c = t.coeff;
    if (i > 0) {
      out += c < 0 ? " - " : " + ";
      c = std::abs(c);
    } else if (c < 0) {
      out += "-";
      c = -c;
    }
    std::vector<std::string> factors;
    const bool bare = t.power == Rational(0) && t.log_power == 0;
    if (c != 1.0 || bare) factors.push_back(format_double(c));
    if (t.power != Rational(0)) {
      std::string p = soi::to_string(t.power);
      if (t.power == Rational(1))
        factors.push_back("u");
      else if (t.power.denominator() != 1)
        factors.push_back("u^(" + p + ")");
      else
        factors.push_back("u^" + p);
    }
    if (t.log_power == 1)
      factors.push_back("L");
    else if (t.log_power != 0)
      factors.push_back("L^" + std::to_string(t.log_power));
    for (std::size_t f = 0; f < factors.size(); ++f) out += (f ? "*" : "") + factors[f];
  }
  return out;
}

SymbolicNet operator+(const SymbolicNet& a, const SymbolicNet& b) {
  std::vector<Monomial> t = a.terms_;
  t.insert(t.end(), b.terms_.begin(), b.terms_.end());
  return SymbolicNet(std::move(t));
}

SymbolicNet operator-(const SymbolicNet& a) { return -1.0 * a; }

SymbolicNet operator-(const SymbolicNet& a, const SymbolicNet& b) { return a + (-b); }

SymbolicNet operator*(const SymbolicNet& a, const SymbolicNet& b) {
  std::vector<Monomial> t;
  t.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& x : a.terms_)
    for (const auto& y : b.terms_)
      t.push_back({x.coeff * y.coeff, x.power + y.power, x.log_power + y.log_power});
  return SymbolicNet(std::move(t));
}

SymbolicNet operator*(double k, const SymbolicNet& a) {
  std::vector<Monomial> t = a.terms_;
  for (auto& m : t) m.coeff *= k;
  return SymbolicNet(std::move(t));
}

bool operator==(const SymbolicNet& a, const SymbolicNet& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    const auto& x = a.terms_[i];
    const auto& y = b.terms_[i];
    if (x.power != y.power || x.log_power != y.log_power) return false;
    if (std::abs(x.coeff - y.coeff) >
        1e-12 * std::max({1.0, std::abs(x.coeff), std::abs(y.coeff)}))
      return false;
  }
  return true;
}

SymbolicNet abs(const SymbolicNet& a) {
  if (a.is_zero() || a.leading().coeff > 0) return a;
  return -a;
}

SymbolicNet max(const SymbolicNet& a, const SymbolicNet& b) {
  const SymbolicNet d = a - b;
  if (d.is_zero() || d.leading().coeff > 0) return a;
  return b;
}

// ---------------------------------------------------------------- NetExpr

NetExpr NetExpr::leaf(SymbolicNet net) {
  NetExpr e;
  e.op_ = Op::leaf;
  e.value_ = std::move(net);
  return e;
}

NetExpr NetExpr::add(NetExpr a, NetExpr b) {
  NetExpr e;
  e.op_ = Op::add;
  e.args_ = {std::make_shared<const NetExpr>(std::move(a)),
             std::make_shared<const NetExpr>(std::move(b))};
  return e;
}

NetExpr NetExpr::mul(NetExpr a, NetExpr b) {
  NetExpr e = add(std::move(a), std::move(b));
  e.op_ = Op::mul;
  return e;
}

NetExpr NetExpr::max(NetExpr a, NetExpr b) {
  NetExpr e = add(std::move(a), std::move(b));
  e.op_ = Op::max;
  return e;
}

NetExpr NetExpr::abs(NetExpr a) {
  NetExpr e;
  e.op_ = Op::abs;
  e.args_ = {std::make_shared<const NetExpr>(std::move(a))};
  return e;
}

NetExpr NetExpr::neg(NetExpr a) {
  NetExpr e = abs(std::move(a));
  e.op_ = Op::neg;
  return e;
}

SymbolicNet NetExpr::normalize() const {
  switch (op_) {
    case Op::leaf: return value_;
    case Op::add: return args_[0]->normalize() + args_[1]->normalize();
    case Op::mul: return args_[0]->normalize() * args_[1]->normalize();
    case Op::abs: return soi::abs(args_[0]->normalize());
    case Op::max: return soi::max(args_[0]->normalize(), args_[1]->normalize());
    case Op::neg: return -args_[0]->normalize();
  }
  return {};
}

double NetExpr::eval(double u) const {
  switch (op_) {
    case Op::leaf: return value_.eval(u);
    case Op::add: return args_[0]->eval(u) + args_[1]->eval(u);
    case Op::mul: return args_[0]->eval(u) * args_[1]->eval(u);
    case Op::abs: return std::abs(args_[0]->eval(u));
    case Op::max: return std::max(args_[0]->eval(u), args_[1]->eval(u));
    case Op::neg: return -args_[0]->eval(u);
  }
  return 0.0;
}

}  // namespace soi
