#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

namespace soi {

using Rational = boost::rational<std::int64_t>;

std::string to_string(const Rational& r);

/// coeff * u^power * L^log_power, where u is the gauge and L = log(1/u).
struct Monomial {
  double coeff = 0.0;
  Rational power{0};
  int log_power = 0;
};

/// Growth order of a monomial: as u -> 0+, a smaller power dominates, and at
/// equal powers a larger log power dominates.
struct Order {
  Rational power{0};
  int log_power = 0;
};

/// True iff u^a.power L^a.log_power = O(u^b.power L^b.log_power) as u -> 0+.
bool order_leq(const Order& a, const Order& b);
bool operator==(const Order& a, const Order& b);

/// Finite sum of monomials in normal form: terms sorted from the dominant one
/// down, equal orders merged, zero coefficients dropped.
class SymbolicNet {
 public:
  SymbolicNet() = default;
  explicit SymbolicNet(std::vector<Monomial> terms);

  static SymbolicNet constant(double c);
  static SymbolicNet monomial(double c, Rational power, int log_power = 0);
  /// The gauge u itself.
  static SymbolicNet gauge();

  const std::vector<Monomial>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Dominant term; throws DomainError for the zero net.
  const Monomial& leading() const;
  Order order() const;

  /// Value at gauge u in (0, 1).
  double eval(double u) const;
  /// Sign and log|value| at the gauge with log(u) = log_u, computed relative
  /// to the leading term so that tiny gauges do not underflow. The zero net
  /// gives sign 0 and -infinity.
  std::pair<int, double> signed_log_abs(double log_u) const;

  std::string to_string() const;

  friend SymbolicNet operator+(const SymbolicNet& a, const SymbolicNet& b);
  friend SymbolicNet operator-(const SymbolicNet& a, const SymbolicNet& b);
  friend SymbolicNet operator-(const SymbolicNet& a);
  friend SymbolicNet operator*(const SymbolicNet& a, const SymbolicNet& b);
  friend SymbolicNet operator*(double k, const SymbolicNet& a);
  friend bool operator==(const SymbolicNet& a, const SymbolicNet& b);

 private:
  void normalize();
  std::vector<Monomial> terms_;
};

/// |a| resolved by the sign of the leading term, which is the sign of a for
/// all small enough gauges.
SymbolicNet abs(const SymbolicNet& a);
/// The argument that is eventually larger, decided by the sign of the leading
/// term of a - b.
SymbolicNet max(const SymbolicNet& a, const SymbolicNet& b);

/// Expression tree over nets with nodes +, *, abs, max and negation. It keeps
/// the unnormalized form so it can be evaluated literally.
class NetExpr {
 public:
  enum class Op { leaf, add, mul, abs, max, neg };

  static NetExpr leaf(SymbolicNet net);
  static NetExpr add(NetExpr a, NetExpr b);
  static NetExpr mul(NetExpr a, NetExpr b);
  static NetExpr abs(NetExpr a);
  static NetExpr max(NetExpr a, NetExpr b);
  static NetExpr neg(NetExpr a);

  Op op() const { return op_; }
  SymbolicNet normalize() const;
  /// Literal evaluation of the tree at gauge u (abs and max taken pointwise).
  double eval(double u) const;

 private:
  Op op_ = Op::leaf;
  SymbolicNet value_;
  std::vector<std::shared_ptr<const NetExpr>> args_;
};

/// Parses the net grammar
///   expr   := term (('+'|'-') term)*
///   term   := factor ('*' factor)*
///   factor := number | 'u' ['^' rational] | 'L' ['^' integer]
///           | 'abs(' expr ')' | 'max(' expr ',' expr ')' | '(' expr ')'
///           | '-' factor
///   rational := integer ['/' integer] | '(' integer ['/' integer] ')'
/// Throws ParseError with the offending position, UnsupportedError for a
/// non-rational exponent.
NetExpr parse_net_expr(const std::string& text);
SymbolicNet parse_net(const std::string& text);

}  // namespace soi
