#pragma once

#include <array>
#include <cassert>
#include <cmath>

namespace soi {

/// Truncated Taylor polynomial (higher-order dual number) around a point.
///
/// coeff(k) is the k-th Taylor coefficient, i.e. f^(k)(x0) / k!. Arithmetic
/// propagates all coefficients up to order(); operands must share the order.
template <class T, int MaxOrder = 8>
class Jet {
 public:
  static constexpr int kMaxOrder = MaxOrder;

  explicit Jet(int order = 0) : order_(order) {
    assert(order >= 0 && order <= MaxOrder);
    c_.fill(T(0));
  }

  static Jet constant(T value, int order) {
    Jet j(order);
    j.c_[0] = value;
    return j;
  }

  /// The independent variable x0 + slope * h.
  static Jet variable(T value, T slope, int order) {
    Jet j(order);
    j.c_[0] = value;
    if (order >= 1) j.c_[1] = slope;
    return j;
  }

  int order() const { return order_; }
  T coeff(int k) const { return c_[k]; }
  T& coeff(int k) { return c_[k]; }
  T value() const { return c_[0]; }

  /// k-th derivative value.
  T derivative(int k) const {
    T f = T(1);
    for (int i = 2; i <= k; ++i) f *= T(i);
    return c_[k] * f;
  }

  Jet& operator+=(const Jet& o) {
    for (int k = 0; k <= order_; ++k) c_[k] += o.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int k = 0; k <= order_; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Jet& operator*=(T s) {
    for (int k = 0; k <= order_; ++k) c_[k] *= s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, T s) { return a *= s; }
  friend Jet operator*(T s, Jet a) { return a *= s; }
  friend Jet operator-(Jet a) { return a *= T(-1); }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r(a.order_);
    for (int k = 0; k <= a.order_; ++k) {
      T s = T(0);
      for (int i = 0; i <= k; ++i) s += a.c_[i] * b.c_[k - i];
      r.c_[k] = s;
    }
    return r;
  }

  friend Jet reciprocal(const Jet& a) {
    Jet r(a.order_);
    r.c_[0] = T(1) / a.c_[0];
    for (int k = 1; k <= a.order_; ++k) {
      T s = T(0);
      for (int i = 1; i <= k; ++i) s += a.c_[i] * r.c_[k - i];
      r.c_[k] = -s * r.c_[0];
    }
    return r;
  }

  friend Jet exp(const Jet& a) {
    using std::exp;
    Jet r(a.order_);
    r.c_[0] = exp(a.c_[0]);
    for (int k = 1; k <= a.order_; ++k) {
      T s = T(0);
      for (int i = 1; i <= k; ++i) s += T(i) * a.c_[i] * r.c_[k - i];
      r.c_[k] = s / T(k);
    }
    return r;
  }

 private:
  std::array<T, MaxOrder + 1> c_;
  int order_;
};

}  // namespace soi
