#pragma once

// Profiles that stay Zoll at several energies at once. With h_1 > ... > h_n
// and xi_i = h_1/h_i - 1, the level-i profile is
//
//   F_i(y) = (1 + xi_i)(1 - y^2) G((1 + xi_i) y - xi_i),   G = f~/(1 - x^2),
//
// which is odd in y exactly when G is odd about -xi_i on [-1 - 2 xi_i, 1].
// Constructions therefore build G and set f~ = G (1 - x^2).

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "zoll/errors.hpp"
#include "zoll/expr.hpp"
#include "zoll/expr_json.hpp"
#include "zoll/profiles.hpp"
#include "zoll/rational.hpp"

namespace zoll {

// ---- energy ladders ---------------------------------------------------------

struct EnergyLadder {
  std::vector<double> h;
  std::vector<std::optional<BigRational>> exact;  ///< per level, when given exactly

  std::size_t size() const { return h.size(); }
  bool all_exact() const {
    return !exact.empty() && std::all_of(exact.begin(), exact.end(), [](const auto& e) { return e.has_value(); });
  }
};

/// Integers and "p/q" are exact; anything with a decimal point or exponent is
/// read as a floating-point measurement.
inline std::pair<double, std::optional<BigRational>> parse_energy(const std::string& text) {
  if (text.find_first_of(".eE") == std::string::npos) {
    auto r = parse_rational(text);
    if (!r) throw InvalidInput("cannot parse energy '" + text + "'");
    return {to_double(*r), *r};
  }
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InvalidInput("cannot parse energy '" + text + "'");
  }
  if (used != text.size()) throw InvalidInput("trailing characters in energy '" + text + "'");
  return {v, std::nullopt};
}

inline void validate_ladder(const EnergyLadder& L) {
  if (L.h.size() < 2) throw InvalidInput("an energy ladder needs at least two levels");
  if (L.exact.size() != L.h.size()) throw InvalidInput("ladder exactness table has the wrong size");
  for (std::size_t i = 0; i < L.h.size(); ++i) {
    if (!(L.h[i] > 0) || !std::isfinite(L.h[i])) throw InvalidInput("energies h_i must be positive and finite");
    if (i > 0) {
      bool decreasing = (L.exact[i] && L.exact[i - 1]) ? *L.exact[i] < *L.exact[i - 1] : L.h[i] < L.h[i - 1];
      if (!decreasing) {
        throw InvalidInput("energies must be strictly decreasing; h_" + std::to_string(i) + " = " +
                           std::to_string(L.h[i - 1]) + " <= h_" + std::to_string(i + 1) + " = " +
                           std::to_string(L.h[i]));
      }
    }
  }
}

inline EnergyLadder ladder_from_strings(const std::vector<std::string>& texts) {
  EnergyLadder L;
  for (const auto& t : texts) {
    auto [v, e] = parse_energy(t);
    L.h.push_back(v);
    L.exact.push_back(e);
  }
  validate_ladder(L);
  return L;
}

inline EnergyLadder ladder_from_doubles(const std::vector<double>& hs) {
  EnergyLadder L;
  L.h = hs;
  L.exact.assign(hs.size(), std::nullopt);
  validate_ladder(L);
  return L;
}

inline EnergyLadder ladder_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw InvalidInput("a ladder file must hold a JSON array");
  EnergyLadder L;
  for (const auto& v : j) {
    if (v.is_string()) {
      auto [d, e] = parse_energy(v.get<std::string>());
      L.h.push_back(d);
      L.exact.push_back(e);
    } else if (v.is_number_integer()) {
      L.h.push_back(v.get<double>());
      L.exact.emplace_back(BigRational(v.get<long long>()));
    } else if (v.is_number()) {
      L.h.push_back(v.get<double>());
      L.exact.emplace_back(std::nullopt);
    } else {
      throw InvalidInput("ladder entries must be numbers or rational strings");
    }
  }
  validate_ladder(L);
  return L;
}

/// Replaces every h_i by the simplest rational within eps.
inline EnergyLadder snap_ladder(const EnergyLadder& L, double eps) {
  EnergyLadder out;
  for (double v : L.h) {
    BigRational r = snap_rational(v, eps);
    if (r <= 0) throw InvalidInput("snap tolerance too large: an energy snapped to a non-positive value");
    out.h.push_back(to_double(r));
    out.exact.emplace_back(r);
  }
  validate_ladder(out);
  return out;
}

/// xi_i = h_1/h_i - 1 as doubles.
inline std::vector<double> xi_values(const EnergyLadder& L) {
  validate_ladder(L);
  std::vector<double> xi;
  for (std::size_t i = 0; i < L.size(); ++i) {
    if (L.exact[0] && L.exact[i]) {
      xi.push_back(to_double(*L.exact[0] / *L.exact[i] - 1));
    } else {
      xi.push_back(i == 0 ? 0.0 : L.h[0] / L.h[i] - 1.0);
    }
  }
  return xi;
}

inline std::optional<std::vector<BigRational>> exact_xi_values(const EnergyLadder& L) {
  if (!L.all_exact()) return std::nullopt;
  std::vector<BigRational> xi;
  for (std::size_t i = 0; i < L.size(); ++i) xi.push_back(*L.exact[0] / *L.exact[i] - 1);
  return xi;
}

inline Param xi_param(const EnergyLadder& L, std::size_t i) {
  if (auto ex = exact_xi_values(L)) return Param::from_rational((*ex)[i]);
  return Param(xi_values(L)[i]);
}

enum class PairCase { case1, case2, case3 };

inline std::string to_string(PairCase c) {
  switch (c) {
    case PairCase::case1: return "Case1";
    case PairCase::case2: return "Case2";
    case PairCase::case3: return "Case3";
  }
  return "?";
}

inline PairCase classify_xi(double xi) {
  if (std::abs(xi - 1.0) <= 1e-12) return PairCase::case2;
  return xi > 1.0 ? PairCase::case1 : PairCase::case3;
}

inline PairCase classify_pair(double h, double kappa) {
  if (!(kappa > 0) || !(h > kappa)) {
    throw InvalidInput("classify_pair needs h > kappa > 0, got h=" + std::to_string(h) +
                       " kappa=" + std::to_string(kappa));
  }
  return classify_xi(h / kappa - 1.0);
}

// ---- rational structure ------------------------------------------------------

/// gcd of positive rationals: generator of their integer span.
inline BigRational rational_gamma(const std::vector<BigRational>& xi) { return rational_gcd(xi); }

struct LadderStructure {
  enum class Kind { rational, irrational, ambiguous } kind = Kind::rational;
  std::optional<BigRational> gamma_exact;
  double gamma = 0;
  /// First rationally independent pair (indices into the ladder, 0-based).
  std::optional<std::pair<std::size_t, std::size_t>> independent_pair;
  bool smallness = false;  ///< xi_k + xi_l < 1 for that pair
};

inline LadderStructure analyze_ladder(const EnergyLadder& L) {
  LadderStructure s;
  if (auto ex = exact_xi_values(L)) {
    s.gamma_exact = rational_gamma(std::vector<BigRational>(ex->begin() + 1, ex->end()));
    s.gamma = to_double(*s.gamma_exact);
    return s;
  }
  auto xi = xi_values(L);
  std::vector<BigRational> ratios{BigRational(1)};
  bool ambiguous = false;
  for (std::size_t i = 1; i < xi.size(); ++i) {
    for (std::size_t j = i + 1; j < xi.size(); ++j) {
      auto v = classify_rationality(xi[j] / xi[i]);
      if (v.kind == Rationality::irrational) {
        bool small = xi[i] + xi[j] < 1.0;
        if (!s.independent_pair || (small && !s.smallness)) {
          s.independent_pair = {j, i};
          s.smallness = small;
        }
      } else if (v.kind == Rationality::ambiguous) {
        ambiguous = true;
      } else if (i == 1) {
        ratios.emplace_back(BigRational(v.p, v.q));
      }
    }
  }
  if (s.independent_pair) {
    s.kind = LadderStructure::Kind::irrational;
  } else if (ambiguous) {
    s.kind = LadderStructure::Kind::ambiguous;
  } else {
    s.gamma = xi[1] * to_double(rational_gcd(ratios));
  }
  return s;
}

// ---- extended profiles -------------------------------------------------------

struct ExtendedProfile {
  EnergyLadder ladder;
  std::vector<double> xi;
  Expr G = constant(0.0);
  Expr f_tilde = constant(0.0);
  Interval domain{-1.0, 1.0};
  std::string construction;
  std::optional<BigRational> gamma_exact;
  std::optional<double> gamma;
  std::vector<std::string> log;
  std::vector<Interval> segments;  ///< [-1,1] then each newly reached stretch
  Expr seed = constant(0.0);       ///< core profile or periodic seed

  /// Odd profile seen by the level-i system (0-based).
  DeformationProfile level_profile(std::size_t i) const {
    double x = xi.at(i);
    Param slope = 1.0 + x, offset = -x;
    if (auto exact = exact_xi_values(ladder)) {
      BigRational xr = (*exact)[i];
      slope = Param::from_rational(1 + xr);
      offset = Param::from_rational(-xr);
    }
    Expr g = compose(G, affine(slope, offset));
    return {scale(slope, product({g, polynomial({1.0, 0.0, -1.0})})), Interval{-1.0, 1.0}};
  }
};

inline Expr one_minus_x2() { return polynomial({1.0, 0.0, -1.0}); }

/// f~ restricted to grid points inside the domain.
inline Expr f_tilde_from_G(const Expr& G, Interval domain) { return product({G, one_minus_x2()}).with_domain(domain); }

namespace detail {

inline void require_vanishing_outside(const Expr& fn, Interval support, Interval window, const std::string& what,
                                      double tol = 1e-12) {
  constexpr int n = 2001;
  for (int k = 0; k < n; ++k) {
    double x = window.lo + (window.hi - window.lo) * k / (n - 1);
    if (support.contains(x)) continue;
    double v = value(fn, x);
    if (std::abs(v) > tol) {
      throw InvalidInput(what + " is not supported in [" + std::to_string(support.lo) + ", " +
                         std::to_string(support.hi) + "]: value " + std::to_string(v) + " at " +
                         std::to_string(x));
    }
  }
}

inline std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline Param twice(const Param& p) {
  if (!p.exact.empty()) return Param::from_rational(2 * *parse_rational(p.exact));
  return Param(2 * p.value);
}

inline Param negated(const Param& p) {
  if (!p.exact.empty()) return Param::from_rational(-*parse_rational(p.exact));
  return Param(-p.value);
}

}  // namespace detail

/// G for an odd core compactly supported in (-1, 1): core/(1 - x^2), with the
/// reciprocal certified only on the core's support.
inline Expr core_to_G(const DeformationProfile& core) {
  const Interval& s = core.support;
  if (!(s.lo > -1.0 && s.hi < 1.0)) {
    throw InvalidInput("core profile must be compactly supported in (-1, 1); declared support [" +
                       detail::fmt(s.lo) + ", " + detail::fmt(s.hi) + "]");
  }
  detail::require_vanishing_outside(core.fn, s, {-1.0, 1.0}, "core profile");
  ValidityReport v = validate_profile(core);
  if (!v.odd) throw InvalidInput("core profile is not odd (violation " + detail::fmt(v.max_oddness_violation) + ")");
  return product({core.fn, reciprocal(one_minus_x2(), s)});
}

/// Successive Case 1/2 reflections G <- G - G o R_i, R_i(x) = -2 xi_i - x.
/// Needs h_i >= 2 h_{i+1} for every adjacent pair so each reflected copy lands
/// outside all earlier level windows.
inline ExtendedProfile extend_chain(const DeformationProfile& core, const EnergyLadder& ladder,
                                    const std::optional<DeformationProfile>& first_extension = std::nullopt) {
  validate_ladder(ladder);
  for (std::size_t i = 0; i + 1 < ladder.size(); ++i) {
    bool ok = (ladder.exact[i] && ladder.exact[i + 1])
                  ? *ladder.exact[i] >= 2 * *ladder.exact[i + 1]
                  : ladder.h[i] >= 2 * ladder.h[i + 1] * (1 - 1e-12);
    if (!ok) {
      throw InvalidInput("chained extension needs h_i >= 2 h_(i+1) for every adjacent pair; fails for (h_" +
                         std::to_string(i + 1) + ", h_" + std::to_string(i + 2) + ") = (" +
                         detail::fmt(ladder.h[i]) + ", " + detail::fmt(ladder.h[i + 1]) + "), ratio " +
                         detail::fmt(ladder.h[i] / ladder.h[i + 1]));
    }
  }
  ExtendedProfile ext;
  ext.ladder = ladder;
  ext.xi = xi_values(ladder);
  ext.construction = "chain";
  ext.seed = core.fn;
  Expr G = core_to_G(core);
  ext.log.push_back("core: odd profile supported in [" + detail::fmt(core.support.lo) + ", " +
                    detail::fmt(core.support.hi) + "], G = f/(1 - x^2) on [-1, 1]");
  ext.segments.push_back({-1.0, 1.0});

  if (first_extension) {
    double xi2 = ext.xi[1];
    const Interval& s = first_extension->support;
    if (!(s.lo > -xi2 && s.hi < -1.0)) {
      throw InvalidInput("the free extension must be compactly supported in (-xi, -1) = (" + detail::fmt(-xi2) +
                         ", -1)");
    }
    detail::require_vanishing_outside(first_extension->fn, s, {-xi2, -1.0}, "free extension");
    G = G + product({first_extension->fn, reciprocal(one_minus_x2(), s)});
    ext.log.push_back("free extension on (" + detail::fmt(s.lo) + ", " + detail::fmt(s.hi) + ") added to G");
  }

  for (std::size_t i = 1; i < ladder.size(); ++i) {
    Param xi = xi_param(ladder, i);
    Expr R = affine(-1.0, detail::negated(detail::twice(xi)));
    G = G - compose(G, R);
    Interval seg{-1.0 - 2 * ext.xi[i], -1.0 - 2 * ext.xi[i - 1]};
    ext.segments.push_back(seg);
    ext.log.push_back("reflect about -xi_" + std::to_string(i + 1) + " = " + detail::fmt(-ext.xi[i]) + " (" +
                      to_string(classify_pair(ladder.h[i - 1], ladder.h[i])) +
                      "): G <- G - G(-2 xi - x), new segment [" + detail::fmt(seg.lo) + ", " + detail::fmt(seg.hi) +
                      "]");
  }
  ext.domain = {-1.0 - 2 * ext.xi.back(), 1.0};
  ext.G = G.with_domain(ext.domain);
  ext.f_tilde = f_tilde_from_G(ext.G, ext.domain);
  return ext;
}

/// G(x) = sum_n [s(x - 2n gamma) - s(-x - 2n gamma)]: odd about 0 and
/// 2 gamma-periodic, hence odd about every multiple of gamma.
inline Expr periodic_G(const DeformationProfile& seed, const Param& gamma, Interval domain) {
  double g = gamma.value;
  const Interval& s = seed.support;
  bool left = s.lo >= -g - 1e-15 && s.hi <= 1e-15;
  bool right = s.lo >= -1e-15 && s.hi <= g + 1e-15;
  if (!(left || right) || !(s.lo < s.hi)) {
    throw InvalidInput("seed support [" + detail::fmt(s.lo) + ", " + detail::fmt(s.hi) +
                       "] must lie in (-gamma, 0) or (0, gamma) with gamma = " + detail::fmt(g));
  }
  Interval half = left ? Interval{-g, 0.0} : Interval{0.0, g};
  detail::require_vanishing_outside(seed.fn, s, half, "seed");
  // Also reject seeds that do not vanish at the ends of their half-period.
  if (std::abs(value(seed.fn, half.lo)) > 1e-12 || std::abs(value(seed.fn, half.hi)) > 1e-12) {
    throw InvalidInput("seed must vanish at the ends of its half-period");
  }
  long n_lo = long(std::floor((domain.lo - 1.0) / (2 * g))) - 1;
  long n_hi = long(std::ceil((domain.hi - domain.lo + 1.0) / (2 * g))) + 1;
  std::optional<BigRational> gx;
  if (!gamma.exact.empty()) gx = parse_rational(gamma.exact);
  auto shift = [&](long n) {
    if (gx) return Param::from_rational(-2 * BigRational(n) * *gx);
    return Param(-2.0 * double(n) * g);
  };
  std::vector<Expr> terms;
  for (long n = n_lo; n <= n_hi; ++n) {
    // s(x - 2n gamma) lives on (s.lo + 2n gamma, s.hi + 2n gamma).
    double lo1 = s.lo + 2 * n * g, hi1 = s.hi + 2 * n * g;
    if (hi1 > domain.lo && lo1 < domain.hi) terms.push_back(compose(seed.fn, affine(1.0, shift(n))));
    // -s(-x - 2n gamma) lives on (-s.hi - 2n gamma, -s.lo - 2n gamma).
    double lo2 = -s.hi - 2 * n * g, hi2 = -s.lo - 2 * n * g;
    if (hi2 > domain.lo && lo2 < domain.hi) terms.push_back(scale(-1.0, compose(seed.fn, affine(-1.0, shift(n)))));
  }
  return sum(std::move(terms)).with_domain(domain);
}

/// Case 3 pair (xi < 1): seed on (-xi, 0) read as G there.
inline ExtendedProfile extend_pair_case3(const DeformationProfile& seed, const EnergyLadder& ladder) {
  if (ladder.size() != 2) throw InvalidInput("a pair extension takes exactly two energies");
  auto xi = xi_values(ladder);
  if (classify_xi(xi[1]) != PairCase::case3) {
    throw InvalidInput("energies (" + detail::fmt(ladder.h[0]) + ", " + detail::fmt(ladder.h[1]) + ") are " +
                       to_string(classify_xi(xi[1])) + ", not Case3");
  }
  if (!(seed.support.lo >= -xi[1] && seed.support.hi <= 0.0)) {
    throw InvalidInput("Case3 seed must be supported in (-xi, 0) = (" + detail::fmt(-xi[1]) + ", 0)");
  }
  ExtendedProfile ext;
  ext.ladder = ladder;
  ext.xi = xi;
  ext.construction = "pair-case3";
  ext.seed = seed.fn;
  ext.domain = {-1.0 - 2 * xi[1], 1.0};
  Param gamma = xi_param(ladder, 1);
  if (!gamma.exact.empty()) ext.gamma_exact = parse_rational(gamma.exact);
  ext.gamma = xi[1];
  ext.G = periodic_G(seed, gamma, ext.domain);
  ext.f_tilde = f_tilde_from_G(ext.G, ext.domain);
  ext.segments = {{-1.0, 1.0}, {ext.domain.lo, -1.0}};
  ext.log.push_back("seed on (" + detail::fmt(seed.support.lo) + ", " + detail::fmt(seed.support.hi) +
                    ") taken as G on [-xi, 0], xi = " + detail::fmt(xi[1]));
  ext.log.push_back("G extended oddly about 0 and 2 xi-periodically to [" + detail::fmt(ext.domain.lo) + ", 1]");
  return ext;
}

/// Pair extension dispatched on the case of (h, kappa). Case1/Case2 take an
/// odd core supported in (-1, 1); Case3 takes a seed supported in (-xi, 0).
inline ExtendedProfile extend_pair(const DeformationProfile& input, const EnergyLadder& ladder,
                                   std::optional<PairCase> expected = std::nullopt,
                                   const std::optional<DeformationProfile>& case1_extension = std::nullopt) {
  if (ladder.size() != 2) throw InvalidInput("a pair extension takes exactly two energies");
  PairCase c = classify_xi(xi_values(ladder)[1]);
  if (expected && *expected != c) {
    throw InvalidInput("case mismatch: energies give " + to_string(c) + ", requested " + to_string(*expected));
  }
  if (c == PairCase::case3) return extend_pair_case3(input, ladder);
  if (case1_extension && c != PairCase::case1) throw InvalidInput("a free extension only exists in Case1");
  ExtendedProfile ext = extend_chain(input, ladder, case1_extension);
  ext.construction = c == PairCase::case1 ? "pair-case1" : "pair-case2";
  return ext;
}

/// Multi-level construction for rationally dependent xi: seed on (0, gamma)
/// or (-gamma, 0), G odd and 2 gamma-periodic.
inline ExtendedProfile build_multi_profile(const DeformationProfile& seed, const EnergyLadder& ladder) {
  validate_ladder(ladder);
  LadderStructure st = analyze_ladder(ladder);
  if (st.kind == LadderStructure::Kind::irrational) {
    throw InvalidInput("xi values are rationally independent; no periodic construction exists");
  }
  if (st.kind == LadderStructure::Kind::ambiguous) {
    throw InvalidInput("cannot decide whether the xi values are rationally dependent; give exact energies");
  }
  ExtendedProfile ext;
  ext.ladder = ladder;
  ext.xi = xi_values(ladder);
  ext.construction = "rational";
  ext.seed = seed.fn;
  ext.gamma = st.gamma;
  ext.gamma_exact = st.gamma_exact;
  ext.domain = {-1.0 - 2 * ext.xi.back(), 1.0};
  Param gamma = st.gamma_exact ? Param::from_rational(*st.gamma_exact) : Param(st.gamma);
  ext.G = periodic_G(seed, gamma, ext.domain);
  ext.f_tilde = f_tilde_from_G(ext.G, ext.domain);
  ext.segments.push_back({-1.0, 1.0});
  for (std::size_t i = 1; i < ext.xi.size(); ++i) {
    ext.segments.push_back({-1.0 - 2 * ext.xi[i], -1.0 - 2 * ext.xi[i - 1]});
  }
  ext.log.push_back("seed on (" + detail::fmt(seed.support.lo) + ", " + detail::fmt(seed.support.hi) +
                    ") extended oddly about 0 and 2 gamma-periodically to [" + detail::fmt(ext.domain.lo) + ", 1]");
  return ext;
}

// ---- verification ------------------------------------------------------------

inline std::vector<double> verify_F_oddness(const ExtendedProfile& ext, int grid_size = 257) {
  auto grid = chebyshev_lobatto(grid_size);
  std::vector<double> res;
  for (std::size_t i = 0; i < ext.xi.size(); ++i) {
    if (-1.0 - 2 * ext.xi[i] < ext.domain.lo - 1e-12) {
      throw DomainError("extended profile does not reach the level-" + std::to_string(i + 1) + " window");
    }
    DeformationProfile F = ext.level_profile(i);
    double worst = 0;
    for (double y : grid) worst = std::max(worst, std::abs(value(F.fn, y) + value(F.fn, -y)));
    res.push_back(worst);
  }
  return res;
}

/// max |f~(R x)(x^2 - 1) + f~(x)(R(x)^2 - 1)| over the level-i window, for each level.
inline std::vector<double> reflection_residuals(const ExtendedProfile& ext, int grid_size = 2001) {
  std::vector<double> out;
  for (std::size_t i = 0; i < ext.xi.size(); ++i) {
    double lo = -1.0 - 2 * ext.xi[i];
    double worst = 0;
    for (int k = 0; k < grid_size; ++k) {
      double x = lo + (1.0 - lo) * k / (grid_size - 1);
      double rx = std::clamp(-2 * ext.xi[i] - x, lo, 1.0);
      double v = value(ext.f_tilde, rx) * (x * x - 1) + value(ext.f_tilde, x) * (rx * rx - 1);
      worst = std::max(worst, std::abs(v));
    }
    out.push_back(worst);
  }
  return out;
}

/// sup |f~| over each construction segment, in construction order.
inline std::vector<double> extension_sup_norms(const ExtendedProfile& ext, int samples_per_segment = 4001) {
  std::vector<double> out;
  for (const auto& seg : ext.segments) {
    double worst = 0;
    for (int k = 0; k < samples_per_segment; ++k) {
      double x = seg.lo + (seg.hi - seg.lo) * k / (samples_per_segment - 1);
      worst = std::max(worst, std::abs(value(ext.f_tilde, x)));
    }
    out.push_back(worst);
  }
  return out;
}

// ---- the dense-orbit procedure ------------------------------------------------

struct ReflectionOrbit {
  double xi_k = 0, xi_l = 0;
  std::vector<double> points;  ///< sorted visited points in [-1, 1]
  std::vector<std::pair<long, long>> lattice;  ///< (a, b) with point = 2(a xi_k + b xi_l), in visit order
  std::vector<double> gammas;  ///< half of each new record minimum spacing
  double gap = 2.0;            ///< largest gap in [-1, 1] not covered by points
  long steps = 0;
  bool exhausted = false;      ///< finite orbit: nothing new reachable
  bool reached_target = false;
};

inline double largest_gap(const std::vector<double>& sorted) {
  if (sorted.empty()) return 2.0;
  double g = std::max(sorted.front() + 1.0, 1.0 - sorted.back());
  for (std::size_t i = 1; i < sorted.size(); ++i) g = std::max(g, sorted[i] - sorted[i - 1]);
  return g;
}

/// Explores the orbit of 0 under the translations +-2 xi_k, +-2 xi_l, keeping
/// only points of [-1, 1]. Points are expanded first-in first-out; the
/// admissible translates of a point are visited in order of increasing |value|,
/// ties going to the positive one.
inline ReflectionOrbit reflection_orbit(double xi_k, double xi_l, double target_gap, long max_steps) {
  if (!(xi_l > 0 && xi_l < xi_k)) throw InvalidInput("reflection orbit needs 0 < xi_l < xi_k");
  if (!(xi_k + xi_l < 1)) throw InvalidInput("smallness condition xi_k + xi_l < 1 violated");
  if (!(target_gap > 0)) throw InvalidInput("target gap must be positive");
  ReflectionOrbit orb;
  orb.xi_k = xi_k;
  orb.xi_l = xi_l;
  constexpr double dedupe = 1e-13;
  auto val = [&](long a, long b) { return 2.0 * (double(a) * xi_k + double(b) * xi_l); };

  std::set<double> seen{0.0};
  std::vector<std::pair<long, long>> queue{{0, 0}};
  orb.lattice.push_back({0, 0});
  std::size_t head = 0;
  double min_spacing = std::numeric_limits<double>::infinity();

  auto insert = [&](double v) {
    auto it = seen.lower_bound(v - dedupe);
    if (it != seen.end() && std::abs(*it - v) <= dedupe) return false;
    auto pos = seen.insert(v).first;
    if (pos != seen.begin()) min_spacing = std::min(min_spacing, v - *std::prev(pos));
    if (std::next(pos) != seen.end()) min_spacing = std::min(min_spacing, *std::next(pos) - v);
    return true;
  };

  while (head < queue.size() && orb.steps < max_steps) {
    auto [a, b] = queue[head++];
    ++orb.steps;
    std::array<std::pair<long, long>, 4> cand{{{a + 1, b}, {a - 1, b}, {a, b + 1}, {a, b - 1}}};
    std::sort(cand.begin(), cand.end(), [&](const auto& p, const auto& q) {
      double vp = val(p.first, p.second), vq = val(q.first, q.second);
      if (std::abs(vp) != std::abs(vq)) return std::abs(vp) < std::abs(vq);
      return vp > vq;
    });
    for (const auto& c : cand) {
      double v = val(c.first, c.second);
      if (v < -1.0 - 1e-15 || v > 1.0 + 1e-15) continue;
      double before = min_spacing;
      if (!insert(v)) continue;
      queue.push_back(c);
      orb.lattice.push_back(c);
      if (min_spacing < before) orb.gammas.push_back(min_spacing / 2);
    }
    // The largest gap only needs checking occasionally.
    if ((orb.steps & 63) == 0 || head == queue.size()) {
      orb.gap = largest_gap(std::vector<double>(seen.begin(), seen.end()));
      if (orb.gap < target_gap) {
        orb.reached_target = true;
        break;
      }
    }
  }
  orb.points.assign(seen.begin(), seen.end());
  orb.gap = largest_gap(orb.points);
  orb.reached_target = orb.gap < target_gap;
  orb.exhausted = head == queue.size();
  return orb;
}

/// max |f~| over the orbit points: a nonzero profile compatible with the
/// reflection laws for a dense orbit would have to vanish there.
inline double max_abs_on_orbit(const Expr& f_tilde, const ReflectionOrbit& orb) {
  double worst = 0;
  for (double x : orb.points) worst = std::max(worst, std::abs(value(f_tilde, x)));
  return worst;
}

// ---- serialization -------------------------------------------------------------

inline nlohmann::json extended_to_json(const ExtendedProfile& ext) {
  nlohmann::json j;
  j["kind"] = "extended";
  j["construction"] = ext.construction;
  auto energies = nlohmann::json::array();
  for (std::size_t i = 0; i < ext.ladder.size(); ++i) {
    if (ext.ladder.exact[i]) {
      energies.push_back(to_string(*ext.ladder.exact[i]));
    } else {
      energies.push_back(ext.ladder.h[i]);
    }
  }
  j["energies"] = energies;
  j["xi"] = ext.xi;
  if (ext.gamma_exact) {
    j["gamma"] = to_string(*ext.gamma_exact);
  } else if (ext.gamma) {
    j["gamma"] = *ext.gamma;
  }
  j["domain"] = detail::interval_to_json(ext.domain);
  auto segs = nlohmann::json::array();
  for (const auto& s : ext.segments) segs.push_back(detail::interval_to_json(s));
  j["segments"] = segs;
  j["log"] = ext.log;
  j["G"] = expr_to_json(ext.G);
  j["expr"] = expr_to_json(ext.f_tilde);
  j["seed"] = expr_to_json(ext.seed);
  return j;
}

inline ExtendedProfile extended_from_json(const nlohmann::json& j) {
  try {
    if (j.value("kind", "") != "extended") throw InvalidInput("not an extended profile");
    ExtendedProfile ext;
    ext.ladder = ladder_from_json(j.at("energies"));
    ext.xi = xi_values(ext.ladder);
    ext.construction = j.value("construction", "");
    if (j.contains("gamma")) {
      if (j["gamma"].is_string()) {
        ext.gamma_exact = parse_rational(j["gamma"].get<std::string>());
        if (ext.gamma_exact) ext.gamma = to_double(*ext.gamma_exact);
      } else {
        ext.gamma = j["gamma"].get<double>();
      }
    }
    ext.domain = detail::interval_from_json(j.at("domain"), "domain");
    for (const auto& s : j.value("segments", nlohmann::json::array())) {
      ext.segments.push_back(detail::interval_from_json(s, "segment"));
    }
    ext.log = j.value("log", std::vector<std::string>{});
    ext.G = expr_from_json(j.at("G"));
    ext.f_tilde = expr_from_json(j.at("expr"));
    if (j.contains("seed")) ext.seed = expr_from_json(j["seed"]);
    return ext;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("bad extended profile: ") + e.what());
  }
}

}  // namespace zoll
