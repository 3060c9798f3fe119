#pragma once

// Exact rational helpers: parsing, gcd over Q, continued fractions and
// rational reconstruction of floating-point ratios.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zoll/errors.hpp"

namespace zoll {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

inline BigInt pow10(unsigned e) {
  BigInt r = 1;
  for (unsigned i = 0; i < e; ++i) r *= 10;
  return r;
}

/// Parses "p", "p/q", or a plain decimal "d.ddd" (optionally signed) exactly.
inline std::optional<BigRational> parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  auto parse_int = [](std::string_view s) -> std::optional<BigInt> {
    bool neg = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
      neg = s[0] == '-';
      s.remove_prefix(1);
    }
    if (s.empty()) return std::nullopt;
    BigInt v = 0;
    for (char ch : s) {
      if (ch < '0' || ch > '9') return std::nullopt;
      v = v * 10 + (ch - '0');
    }
    return neg ? BigInt(-v) : v;
  };

  text = trim(text);
  if (text.empty()) return std::nullopt;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = parse_int(trim(text.substr(0, slash)));
    auto den = parse_int(trim(text.substr(slash + 1)));
    if (!num || !den || *den == 0) return std::nullopt;
    return BigRational(*num, *den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool neg = !whole.empty() && whole[0] == '-';
    if (!whole.empty() && (whole[0] == '-' || whole[0] == '+')) whole.remove_prefix(1);
    if (whole.empty() && frac.empty()) return std::nullopt;
    std::string digits = std::string(whole) + std::string(frac);
    auto mag = parse_int(digits);
    if (!mag || digits.find_first_of("+-") != std::string::npos) return std::nullopt;
    BigRational r(*mag, pow10(unsigned(frac.size())));
    return neg ? BigRational(-r) : r;
  }
  auto v = parse_int(text);
  if (!v) return std::nullopt;
  return BigRational(*v);
}

inline std::string to_string(const BigRational& r) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline double to_double(const BigRational& r) { return r.convert_to<double>(); }

/// The exact binary value of a finite double.
inline BigRational exact_from_double(double x) {
  if (!std::isfinite(x)) throw InvalidInput("non-finite value has no rational representation");
  int exp = 0;
  double mant = std::frexp(x, &exp);
  // mant * 2^53 is an integer for every finite double.
  auto m = static_cast<std::int64_t>(std::ldexp(mant, 53));
  exp -= 53;
  BigRational r(m);
  if (exp > 0) r *= BigRational(BigInt(1) << exp);
  if (exp < 0) r /= BigRational(BigInt(1) << -exp);
  return r;
}

/// Generator of the additive group sum(Z * v_i) for positive rationals:
/// gcd of reduced numerators over lcm of reduced denominators.
inline BigRational rational_gcd(const std::vector<BigRational>& values) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::gcd;
  using boost::multiprecision::lcm;
  using boost::multiprecision::numerator;
  if (values.empty()) throw InvalidInput("rational gcd of an empty list");
  BigInt g = 0;
  BigInt l = 1;
  for (const auto& v : values) {
    if (v <= 0) throw InvalidInput("rational gcd needs strictly positive values, got " + to_string(v));
    g = gcd(g, numerator(v));
    l = lcm(l, denominator(v));
  }
  return BigRational(g, l);
}

struct Convergent {
  std::int64_t p;
  std::int64_t q;
  double residual;         ///< |x - p/q|
  std::int64_t next_term;  ///< next partial quotient (0 if the expansion ended)
};

/// Continued-fraction convergents of x with denominators up to max_den.
inline std::vector<Convergent> convergents(double x, std::int64_t max_den) {
  std::vector<Convergent> out;
  long double y = x;
  std::int64_t p0 = 1, q0 = 0;
  std::int64_t p1 = static_cast<std::int64_t>(std::floor(y)), q1 = 1;
  long double frac = y - std::floor(y);
  for (int iter = 0; iter < 64; ++iter) {
    Convergent cv{p1, q1, std::abs(double(x - double(p1) / double(q1))), 0};
    if (frac <= 0) {
      out.push_back(cv);
      break;
    }
    y = 1.0L / frac;
    long double term = std::floor(y);
    frac = y - term;
    if (term > 1e15L) {
      cv.next_term = std::int64_t(1e15);
      out.push_back(cv);
      break;
    }
    cv.next_term = static_cast<std::int64_t>(term);
    out.push_back(cv);
    std::int64_t p2 = cv.next_term * p1 + p0;
    std::int64_t q2 = cv.next_term * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
  }
  return out;
}

enum class Rationality { rational, irrational, ambiguous };

struct RationalityVerdict {
  Rationality kind = Rationality::ambiguous;
  std::int64_t p = 0;
  std::int64_t q = 1;
};

/// Decides whether a floating-point ratio is a rational with denominator at
/// most max_den. A convergent p/q counts as a reconstruction when it is within
/// residual_bound of x and is anomalously good (q^2 |x - p/q| <= 1e-4); generic
/// irrationals have q^2 |x - p/q| of order one. If every convergent up to
/// max_den has q^2 |x - p/q| >= 1e-2 the value is declared irrational; anything
/// in between is ambiguous.
inline RationalityVerdict classify_rationality(double x, std::int64_t max_den = 1'000'000,
                                               double residual_bound = 1e-9) {
  RationalityVerdict v;
  bool borderline = false;
  for (const auto& cv : convergents(x, max_den)) {
    double q = double(cv.q);
    double quality = q * q * cv.residual;
    if (cv.residual <= residual_bound * std::max(1.0, std::abs(x)) && quality <= 1e-4) {
      v.kind = Rationality::rational;
      v.p = cv.p;
      v.q = cv.q;
      return v;
    }
    if (quality < 1e-2) borderline = true;
  }
  v.kind = borderline ? Rationality::ambiguous : Rationality::irrational;
  return v;
}

/// The rational with the smallest denominator in the closed interval [lo, hi].
inline BigRational simplest_rational_between(BigRational lo, BigRational hi) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (lo > hi) std::swap(lo, hi);
  if (lo <= 0 && hi >= 0) return BigRational(0);
  bool neg = hi < 0;
  if (neg) {
    BigRational t = -lo;
    lo = -hi;
    hi = t;
  }
  // Stern-Brocot descent via continued fractions.
  auto floor_of = [](const BigRational& r) {
    BigInt n = numerator(r), d = denominator(r);
    BigInt f = n / d;
    if (n < 0 && f * d != n) f -= 1;
    return f;
  };
  std::vector<BigInt> terms;
  BigRational a = lo, b = hi;
  for (int iter = 0; iter < 400; ++iter) {
    BigInt fa = floor_of(a);
    if (BigRational(fa) == a) {
      terms.push_back(fa);
      break;
    }
    BigInt fb = floor_of(b);
    if (fa < fb) {
      terms.push_back(fa + 1);
      break;
    }
    terms.push_back(fa);
    BigRational na = 1 / (b - BigRational(fa));
    BigRational nb = 1 / (a - BigRational(fa));
    a = na;
    b = nb;
  }
  BigRational r(terms.back());
  for (auto it = terms.rbegin() + 1; it != terms.rend(); ++it) r = BigRational(*it) + 1 / r;
  return neg ? BigRational(-r) : r;
}

/// Simplest rational within eps of x.
inline BigRational snap_rational(double x, double eps) {
  if (!(eps > 0)) throw InvalidInput("snap tolerance must be positive");
  return simplest_rational_between(exact_from_double(x - eps), exact_from_double(x + eps));
}

}  // namespace zoll
