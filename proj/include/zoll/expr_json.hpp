#pragma once

// JSON (de)serialization of expression trees.
//
//   {"op": "const",   "c": <param>}
//   {"op": "id"}
//   {"op": "poly",    "coeffs": [<param>, ...]}          ascending powers
//   {"op": "bump",    "a": <param>, "b": <param>}
//   {"op": "sum",     "args": [<expr>, ...]}
//   {"op": "prod",    "args": [<expr>, ...]}
//   {"op": "scale",   "c": <param>, "args": [<expr>]}
//   {"op": "compose", "args": [<outer>, <inner>]}
//   {"op": "recip",   "args": [<expr>], "certified": [lo, hi]}
//   {"op": "exp",     "args": [<expr>]}
//
// Every node may carry "domain": [lo, hi]. A <param> is a JSON number or a
// string holding an exact rational ("3/4", "-2", "0.125"); string params are
// written back verbatim so rational values round-trip losslessly.

#include <json.hpp>

#include <cmath>
#include <limits>
#include <string>

#include "zoll/errors.hpp"
#include "zoll/expr.hpp"

namespace zoll {

namespace detail {

inline Param param_from_json(const nlohmann::json& j, const char* what) {
  if (j.is_number()) return Param(j.get<double>());
  if (j.is_string()) {
    auto text = j.get<std::string>();
    auto r = parse_rational(text);
    if (!r) throw InvalidInput(std::string("cannot parse '") + text + "' as a rational for " + what);
    return Param(to_double(*r), to_string(*r));
  }
  throw InvalidInput(std::string("expected a number or rational string for ") + what);
}

inline nlohmann::json param_to_json(const Param& p) {
  if (!p.exact.empty()) return p.exact;
  return p.value;
}

inline Interval interval_from_json(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != 2) throw InvalidInput(std::string(what) + " must be a two-element array");
  // null stands for an infinite bound
  constexpr double inf = std::numeric_limits<double>::infinity();
  Interval iv{j[0].is_null() ? -inf : param_from_json(j[0], what).value,
              j[1].is_null() ? inf : param_from_json(j[1], what).value};
  if (!(iv.lo <= iv.hi)) throw InvalidInput(std::string(what) + " is empty");
  return iv;
}

inline nlohmann::json interval_to_json(const Interval& iv) {
  auto bound = [](double v) { return std::isinf(v) ? nlohmann::json(nullptr) : nlohmann::json(v); };
  return nlohmann::json::array({bound(iv.lo), bound(iv.hi)});
}

}  // namespace detail

inline Expr expr_from_json(const nlohmann::json& j) {
  using detail::param_from_json;
  if (!j.is_object() || !j.contains("op") || !j["op"].is_string()) {
    throw InvalidInput("expression node must be an object with a string 'op'");
  }
  const std::string op = j["op"].get<std::string>();
  auto args = [&](std::size_t expected) {
    if (!j.contains("args") || !j["args"].is_array()) throw InvalidInput("'" + op + "' needs an 'args' array");
    const auto& a = j["args"];
    if (expected != 0 && a.size() != expected) {
      throw InvalidInput("'" + op + "' takes " + std::to_string(expected) + " args, got " + std::to_string(a.size()));
    }
    std::vector<Expr> out;
    for (const auto& child : a) out.push_back(expr_from_json(child));
    return out;
  };
  auto field = [&](const char* key) -> const nlohmann::json& {
    if (!j.contains(key)) throw InvalidInput("'" + op + "' needs field '" + key + "'");
    return j[key];
  };

  Expr e;
  if (op == "const") {
    e = constant(param_from_json(field("c"), "const.c"));
  } else if (op == "id") {
    e = identity();
  } else if (op == "poly") {
    const auto& cs = field("coeffs");
    if (!cs.is_array() || cs.empty()) throw InvalidInput("'poly' needs a non-empty 'coeffs' array");
    std::vector<Param> coeffs;
    for (const auto& c : cs) coeffs.push_back(param_from_json(c, "poly.coeffs"));
    e = polynomial(std::move(coeffs));
  } else if (op == "bump") {
    e = make_bump(param_from_json(field("a"), "bump.a"), param_from_json(field("b"), "bump.b"));
  } else if (op == "sum") {
    e = sum(args(0));
  } else if (op == "prod") {
    e = product(args(0));
  } else if (op == "scale") {
    e = scale(param_from_json(field("c"), "scale.c"), args(1).front());
  } else if (op == "compose") {
    auto a = args(2);
    e = compose(a[0], a[1]);
  } else if (op == "recip") {
    e = reciprocal(args(1).front(), detail::interval_from_json(field("certified"), "recip.certified"));
  } else if (op == "exp") {
    e = exponential(args(1).front());
  } else {
    throw InvalidInput("unknown expression op '" + op + "'");
  }
  if (j.contains("domain")) e = e.with_domain(detail::interval_from_json(j["domain"], "domain"));
  return e;
}

inline nlohmann::json expr_to_json(const Expr& e) {
  using detail::param_to_json;
  nlohmann::json j;
  auto ptr_args = [](std::initializer_list<const std::shared_ptr<const Expr>*> ps) {
    auto a = nlohmann::json::array();
    for (const auto* p : ps) a.push_back(expr_to_json(**p));
    return a;
  };
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, node::Constant>) {
          j = {{"op", "const"}, {"c", param_to_json(n.c)}};
        } else if constexpr (std::is_same_v<T, node::Identity>) {
          j = {{"op", "id"}};
        } else if constexpr (std::is_same_v<T, node::Polynomial>) {
          auto cs = nlohmann::json::array();
          for (const auto& c : n.coeffs) cs.push_back(param_to_json(c));
          j = {{"op", "poly"}, {"coeffs", cs}};
        } else if constexpr (std::is_same_v<T, node::Bump>) {
          j = {{"op", "bump"}, {"a", param_to_json(n.a)}, {"b", param_to_json(n.b)}};
        } else if constexpr (std::is_same_v<T, node::Sum> || std::is_same_v<T, node::Product>) {
          auto a = nlohmann::json::array();
          const auto& children = [&]() -> const std::vector<Expr>& {
            if constexpr (std::is_same_v<T, node::Sum>) return n.terms;
            else return n.factors;
          }();
          for (const auto& c : children) a.push_back(expr_to_json(c));
          j = {{"op", std::is_same_v<T, node::Sum> ? "sum" : "prod"}, {"args", a}};
        } else if constexpr (std::is_same_v<T, node::Scale>) {
          j = {{"op", "scale"}, {"c", param_to_json(n.c)}, {"args", ptr_args({&n.arg})}};
        } else if constexpr (std::is_same_v<T, node::Compose>) {
          j = {{"op", "compose"}, {"args", ptr_args({&n.outer, &n.inner})}};
        } else if constexpr (std::is_same_v<T, node::Reciprocal>) {
          j = {{"op", "recip"}, {"args", ptr_args({&n.arg})}, {"certified", detail::interval_to_json(n.certified)}};
        } else if constexpr (std::is_same_v<T, node::Exponential>) {
          j = {{"op", "exp"}, {"args", ptr_args({&n.arg})}};
        }
      },
      e.node());
  if (!e.domain().is_unbounded()) j["domain"] = detail::interval_to_json(e.domain());
  return j;
}

}  // namespace zoll
