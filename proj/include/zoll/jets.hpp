#pragma once

// Truncated Taylor arithmetic.
//
// A Taylor object holds normalized coefficients a_j = f^(j)(x0) / j! of a
// function around an implicit expansion point, truncated at a fixed order.
// All arithmetic is exact in the sense of formal power series modulo t^(n+1);
// no finite differences are involved anywhere.

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "zoll/errors.hpp"

namespace zoll {

/// Highest derivative order exposed through the public API.
inline constexpr int kMaxJetOrder = 16;

class Taylor {
 public:
  /// One slot of headroom above kMaxJetOrder for removable-singularity division.
  static constexpr int kCapacity = kMaxJetOrder + 2;

  Taylor() = default;

  explicit Taylor(int order) : order_(order) {
    if (order < 0 || order >= kCapacity) {
      throw DomainError("Taylor order " + std::to_string(order) + " out of range");
    }
  }

  static Taylor constant(double value, int order) {
    Taylor t(order);
    t.c_[0] = value;
    return t;
  }

  /// The independent variable x0 + t.
  static Taylor variable(double x0, int order) {
    Taylor t(order);
    t.c_[0] = x0;
    if (order >= 1) t.c_[1] = 1.0;
    return t;
  }

  int order() const { return order_; }
  double operator[](int j) const { return c_[j]; }
  double& operator[](int j) { return c_[j]; }
  std::span<const double> coefficients() const { return {c_.data(), std::size_t(order_ + 1)}; }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.begin() + order_ + 1, [](double v) { return v == 0.0; });
  }

  bool is_finite() const {
    return std::all_of(c_.begin(), c_.begin() + order_ + 1, [](double v) { return std::isfinite(v); });
  }

  Taylor& operator+=(const Taylor& o) {
    for (int j = 0; j <= order_; ++j) c_[j] += o.c_[j];
    return *this;
  }
  Taylor& operator-=(const Taylor& o) {
    for (int j = 0; j <= order_; ++j) c_[j] -= o.c_[j];
    return *this;
  }
  Taylor& operator*=(double s) {
    for (int j = 0; j <= order_; ++j) c_[j] *= s;
    return *this;
  }

  friend Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
  friend Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }
  friend Taylor operator*(Taylor a, double s) { return a *= s; }
  friend Taylor operator*(double s, Taylor a) { return a *= s; }

  // Cauchy product.
  friend Taylor operator*(const Taylor& a, const Taylor& b) {
    Taylor r(a.order_);
    for (int k = 0; k <= a.order_; ++k) {
      double s = 0.0;
      for (int i = 0; i <= k; ++i) s += a.c_[i] * b.c_[k - i];
      r.c_[k] = s;
    }
    return r;
  }

  friend Taylor operator/(const Taylor& a, const Taylor& b) {
    if (b.c_[0] == 0.0) throw DomainError("Taylor division by a series with zero constant term");
    Taylor q(a.order_);
    for (int k = 0; k <= a.order_; ++k) {
      double s = a.c_[k];
      for (int i = 1; i <= k; ++i) s -= b.c_[i] * q.c_[k - i];
      q.c_[k] = s / b.c_[0];
    }
    return q;
  }

  Taylor reciprocal() const { return constant(1.0, order_) / *this; }

  Taylor exp() const {
    Taylor e(order_);
    e.c_[0] = std::exp(c_[0]);
    if (e.c_[0] == 0.0) return e;
    for (int k = 1; k <= order_; ++k) {
      double s = 0.0;
      for (int j = 1; j <= k; ++j) s += j * c_[j] * e.c_[k - j];
      e.c_[k] = s / k;
    }
    return e;
  }

  /// outer(this): `outer` must be expanded around this->c_[0].
  Taylor compose_into(const Taylor& outer) const {
    Taylor delta = *this;
    delta.c_[0] = 0.0;
    Taylor r = constant(outer.c_[order_], order_);
    for (int k = order_ - 1; k >= 0; --k) {
      r = r * delta;
      r.c_[0] += outer.c_[k];
    }
    return r;
  }

  /// Drops the constant term: (a_1, ..., a_n) as a series of order n-1.
  Taylor shifted() const {
    if (order_ == 0) throw DomainError("cannot shift an order-0 series");
    Taylor s(order_ - 1);
    for (int j = 0; j < order_; ++j) s.c_[j] = c_[j + 1];
    return s;
  }

  Taylor truncated(int order) const {
    Taylor t(order);
    for (int j = 0; j <= std::min(order, order_); ++j) t.c_[j] = c_[j];
    return t;
  }

 private:
  int order_ = 0;
  std::array<double, kCapacity> c_{};
};

/// Quotient num/den where den may vanish at the expansion point. When den has
/// a zero constant term the singularity is treated as removable (num must
/// vanish there too) and the one-coefficient shift rule is used, losing one
/// order. Inputs must carry one order more than the requested result.
inline Taylor divide_removable(const Taylor& num, const Taylor& den, int order, double zero_tol = 1e-12) {
  if (den[0] != 0.0) return (num / den).truncated(order);
  if (std::abs(num[0]) > zero_tol) {
    throw DomainError("pole: numerator does not vanish where the denominator does");
  }
  if (num.order() < order + 1) throw DomainError("removable division needs one extra order");
  return (num.shifted() / den.shifted()).truncated(order);
}

/// Derivative values f(x), f'(x), ..., f^(K)(x).
class Jet {
 public:
  Jet() = default;

  explicit Jet(const Taylor& t) : coeffs_(std::size_t(t.order() + 1)) {
    double factorial = 1.0;
    for (int j = 0; j <= t.order(); ++j) {
      if (j > 0) factorial *= j;
      coeffs_[std::size_t(j)] = t[j] * factorial;
    }
  }

  explicit Jet(std::vector<double> derivatives) : coeffs_(std::move(derivatives)) {}

  int order() const { return int(coeffs_.size()) - 1; }
  double operator[](int j) const { return coeffs_.at(std::size_t(j)); }
  double value() const { return coeffs_.front(); }
  const std::vector<double>& coeffs() const { return coeffs_; }

  bool is_finite() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](double v) { return std::isfinite(v); });
  }

 private:
  std::vector<double> coeffs_;
};

}  // namespace zoll
