#pragma once

// Immutable expression trees over smooth primitives, evaluated by pushing a
// truncated Taylor series through every node.

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "zoll/errors.hpp"
#include "zoll/jets.hpp"
#include "zoll/rational.hpp"

namespace zoll {

/// A real parameter that remembers its exact rational spelling when it had one.
struct Param {
  double value = 0.0;
  std::string exact;  ///< "p/q" or "p" when known exactly, else empty

  Param() = default;
  Param(double v) : value(v) {}  // NOLINT(google-explicit-constructor)
  Param(double v, std::string text) : value(v), exact(std::move(text)) {}

  static Param from_rational(const BigRational& r) { return {to_double(r), to_string(r)}; }

  operator double() const { return value; }  // NOLINT(google-explicit-constructor)
};

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double x, double slack = 0.0) const { return x >= lo - slack && x <= hi + slack; }
  bool is_unbounded() const { return std::isinf(lo) && std::isinf(hi); }
};

/// Tolerance for domain membership tests, absorbing rounding in affine maps.
inline constexpr double kDomainSlack = 1e-13;

class Expr;

namespace node {
struct Constant {
  Param c;
};
struct Identity {};
struct Polynomial {
  std::vector<Param> coeffs;  ///< ascending powers
};
struct Bump {
  Param a, b;
};
struct Sum {
  std::vector<Expr> terms;
};
struct Product {
  std::vector<Expr> factors;
};
struct Scale {
  Param c;
  std::shared_ptr<const Expr> arg;
};
struct Compose {
  std::shared_ptr<const Expr> outer, inner;
};
struct Reciprocal {
  std::shared_ptr<const Expr> arg;
  Interval certified;  ///< interval of the argument variable where arg has no zero
};
struct Exponential {
  std::shared_ptr<const Expr> arg;
};
}  // namespace node

using ExprNode = std::variant<node::Constant, node::Identity, node::Polynomial, node::Bump, node::Sum,
                              node::Product, node::Scale, node::Compose, node::Reciprocal, node::Exponential>;

class Expr {
 public:
  Expr() : Expr(node::Constant{0.0}) {}
  explicit Expr(ExprNode n, Interval domain = {})
      : impl_(std::make_shared<const Impl>(Impl{std::move(n), domain})) {}

  const ExprNode& node() const { return impl_->node; }
  const Interval& domain() const { return impl_->domain; }

  Expr with_domain(Interval d) const { return Expr(impl_->node, d); }

  template <class T>
  const T* as() const {
    return std::get_if<T>(&impl_->node);
  }

 private:
  struct Impl {
    ExprNode node;
    Interval domain;
  };
  std::shared_ptr<const Impl> impl_;
};

// ---- construction -----------------------------------------------------------

inline Expr constant(Param c) { return Expr(node::Constant{std::move(c)}); }
inline Expr identity() { return Expr(node::Identity{}); }
inline Expr polynomial(std::vector<Param> coeffs) { return Expr(node::Polynomial{std::move(coeffs)}); }

inline Expr polynomial(std::initializer_list<double> coeffs) {
  return polynomial(std::vector<Param>(coeffs.begin(), coeffs.end()));
}

/// exp(-1/((x-a)(b-x))) on (a,b), identically zero elsewhere.
inline Expr make_bump(Param a, Param b) {
  if (!(a.value < b.value)) {
    throw InvalidInput("bump needs a < b, got a=" + std::to_string(a.value) + " b=" + std::to_string(b.value));
  }
  return Expr(node::Bump{std::move(a), std::move(b)});
}

inline Expr sum(std::vector<Expr> terms) { return Expr(node::Sum{std::move(terms)}); }
inline Expr product(std::vector<Expr> factors) { return Expr(node::Product{std::move(factors)}); }

inline Expr scale(Param c, Expr arg) {
  return Expr(node::Scale{std::move(c), std::make_shared<const Expr>(std::move(arg))});
}

inline Expr compose(Expr outer, Expr inner) {
  return Expr(node::Compose{std::make_shared<const Expr>(std::move(outer)),
                            std::make_shared<const Expr>(std::move(inner))});
}

inline Expr reciprocal(Expr arg, Interval certified) {
  if (!(certified.lo <= certified.hi)) throw InvalidInput("reciprocal certified interval is empty");
  return Expr(node::Reciprocal{std::make_shared<const Expr>(std::move(arg)), certified});
}

inline Expr exponential(Expr arg) { return Expr(node::Exponential{std::make_shared<const Expr>(std::move(arg))}); }

/// x -> slope*x + offset.
inline Expr affine(Param slope, Param offset) {
  return polynomial(std::vector<Param>{std::move(offset), std::move(slope)});
}

inline Expr operator+(Expr a, Expr b) { return sum({std::move(a), std::move(b)}); }
inline Expr operator-(Expr a, Expr b) { return sum({std::move(a), scale(-1.0, std::move(b))}); }
inline Expr operator*(Expr a, Expr b) { return product({std::move(a), std::move(b)}); }
inline Expr operator*(double c, Expr a) { return scale(c, std::move(a)); }

/// Odd part about `center`: x -> (fn(x) - fn(2 center - x)) / 2.
inline Expr antisymmetrize(const Expr& fn, double center) {
  const Interval& d = fn.domain();
  bool symmetric = d.is_unbounded() ||
                   (std::isfinite(d.lo) && std::isfinite(d.hi) &&
                    std::abs((d.lo + d.hi) - 2.0 * center) <= 1e-12 * std::max(1.0, std::abs(d.hi - d.lo)));
  if (!symmetric) {
    throw InvalidInput("antisymmetrize: domain [" + std::to_string(d.lo) + ", " + std::to_string(d.hi) +
                       "] is not symmetric about " + std::to_string(center));
  }
  Expr mirrored = compose(fn, affine(-1.0, 2.0 * center));
  return scale(0.5, fn - mirrored).with_domain(d);
}

// ---- evaluation -------------------------------------------------------------

namespace detail {

inline Taylor eval_series(const Expr& e, const Taylor& x);

inline Taylor eval_polynomial(const std::vector<Param>& coeffs, const Taylor& x) {
  Taylor r(x.order());
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    r = r * x;
    r[0] += it->value;
  }
  return r;
}

inline Taylor eval_bump(double a, double b, const Taylor& x) {
  double x0 = x[0];
  if (!(x0 > a && x0 < b)) return Taylor(x.order());
  Taylor q = (x - Taylor::constant(a, x.order())) * (Taylor::constant(b, x.order()) - x);
  if (!(q[0] > 0.0)) return Taylor(x.order());
  // exp(-1/q) underflows long before q reaches zero; the whole jet is then 0
  // to double precision.
  if (-1.0 / q[0] < -745.0) return Taylor(x.order());
  Taylor minus_inv = q.reciprocal() * -1.0;
  return minus_inv.exp();
}

struct SeriesVisitor {
  const Taylor& x;

  Taylor operator()(const node::Constant& n) const { return Taylor::constant(n.c, x.order()); }
  Taylor operator()(const node::Identity&) const { return x; }
  Taylor operator()(const node::Polynomial& n) const { return eval_polynomial(n.coeffs, x); }
  Taylor operator()(const node::Bump& n) const { return eval_bump(n.a, n.b, x); }

  Taylor operator()(const node::Sum& n) const {
    Taylor r(x.order());
    for (const auto& t : n.terms) r += eval_series(t, x);
    return r;
  }

  Taylor operator()(const node::Product& n) const {
    if (n.factors.empty()) return Taylor::constant(1.0, x.order());
    Taylor r = eval_series(n.factors.front(), x);
    for (std::size_t i = 1; i < n.factors.size(); ++i) {
      // A vanishing jet annihilates the rest, which may not even be defined here.
      if (r.is_zero()) return r;
      r = r * eval_series(n.factors[i], x);
    }
    return r;
  }

  Taylor operator()(const node::Scale& n) const { return eval_series(*n.arg, x) * n.c.value; }

  Taylor operator()(const node::Compose& n) const {
    Taylor inner = eval_series(*n.inner, x);
    Taylor outer = eval_series(*n.outer, Taylor::variable(inner[0], x.order()));
    return inner.compose_into(outer);
  }

  Taylor operator()(const node::Reciprocal& n) const {
    if (!n.certified.contains(x[0], kDomainSlack)) {
      throw DomainError("reciprocal evaluated at " + std::to_string(x[0]) + " outside its certified interval [" +
                        std::to_string(n.certified.lo) + ", " + std::to_string(n.certified.hi) + "]");
    }
    Taylor v = eval_series(*n.arg, x);
    if (v[0] == 0.0) throw DomainError("reciprocal of a function vanishing at " + std::to_string(x[0]));
    return v.reciprocal();
  }

  Taylor operator()(const node::Exponential& n) const { return eval_series(*n.arg, x).exp(); }
};

inline Taylor eval_series(const Expr& e, const Taylor& x) {
  if (!e.domain().contains(x[0], kDomainSlack)) {
    throw DomainError("point " + std::to_string(x[0]) + " outside domain [" + std::to_string(e.domain().lo) + ", " +
                      std::to_string(e.domain().hi) + "]");
  }
  return std::visit(SeriesVisitor{x}, e.node());
}

}  // namespace detail

/// Normalized Taylor coefficients of fn at x, up to `order`.
inline Taylor eval_taylor(const Expr& fn, double x, int order) {
  if (order < 0 || order > kMaxJetOrder + 1) {
    throw DomainError("jet order " + std::to_string(order) + " exceeds the supported maximum");
  }
  return detail::eval_series(fn, Taylor::variable(x, order));
}

/// Derivative values fn(x), fn'(x), ..., fn^(order)(x).
inline Jet eval_jet(const Expr& fn, double x, int order) {
  if (order < 0 || order > kMaxJetOrder) {
    throw DomainError("jet order " + std::to_string(order) + " outside [0, " + std::to_string(kMaxJetOrder) + "]");
  }
  Jet j(eval_taylor(fn, x, order));
  if (!j.is_finite()) throw NumericalFailure("non-finite jet at x = " + std::to_string(x));
  return j;
}

/// fn composed with an arbitrary input series x(t).
inline Taylor eval_taylor(const Expr& fn, const Taylor& x) { return detail::eval_series(fn, x); }

inline double value(const Expr& fn, double x) { return eval_taylor(fn, x, 0)[0]; }

/// |jet derivative - finite-difference derivative|. The finite difference is a
/// fourth-order central stencil applied to the (order-1)-th jet derivative, so
/// rounding stays at eps/step regardless of the order.
inline double fd_validate(const Expr& fn, double x, int order, double step) {
  if (!(step > 0)) throw InvalidInput("fd_validate needs a positive step");
  Jet j = eval_jet(fn, x, order);
  if (order == 0) return 0.0;
  auto g = [&](double t) { return eval_jet(fn, t, order - 1)[order - 1]; };
  double fd = (-g(x + 2 * step) + 8 * g(x + step) - 8 * g(x - step) + g(x - 2 * step)) / (12 * step);
  return std::abs(j[order] - fd);
}

}  // namespace zoll
