#pragma once

// Deformation profiles f on [-1,1], projective profiles phi, and the endpoint
// derivative conditions that decide smoothness at the planar origin.

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "zoll/errors.hpp"
#include "zoll/expr.hpp"
#include "zoll/expr_json.hpp"

namespace zoll {

struct DeformationProfile {
  Expr fn = constant(0.0);
  Interval support{-1.0, 1.0};
};

struct ProjectiveProfile {
  Expr fn = constant(0.0);
  double h = 1.0;
};

inline constexpr double kSymbolicTol = 1e-10;
inline constexpr double kSampledTol = 1e-6;

/// Chebyshev-Lobatto points cos(pi j/(n-1)), j = 0..n-1, in decreasing order.
inline std::vector<double> chebyshev_lobatto(int n) {
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) x[std::size_t(j)] = std::cos(M_PI * j / (n - 1));
  x.front() = 1.0;
  x.back() = -1.0;
  if (n % 2 == 1) x[std::size_t(n / 2)] = 0.0;
  return x;
}

struct ValidityReport {
  double max_oddness_violation = 0;
  double value_at_plus_one = 0;
  double value_at_minus_one = 0;
  double min_besse_coefficient = 0;  ///< min of 1 + s + f(s) over interior grid points
  int grid_size = 0;
  double tol = 0;
  bool odd = false, endpoints_zero = false, admissible = false;

  bool pass() const { return odd && endpoints_zero && admissible; }
};

inline ValidityReport validate_profile(const DeformationProfile& f, double tol = kSymbolicTol, int grid_size = 257) {
  if (grid_size < 16) throw InvalidInput("validation grid needs at least 16 points");
  ValidityReport r;
  r.grid_size = grid_size;
  r.tol = tol;
  r.min_besse_coefficient = std::numeric_limits<double>::infinity();
  auto grid = chebyshev_lobatto(grid_size);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    double s = grid[j];
    double v = value(f.fn, s);
    if (!std::isfinite(v)) throw NumericalFailure("profile is not finite at " + std::to_string(s));
    r.max_oddness_violation = std::max(r.max_oddness_violation, std::abs(v + value(f.fn, -s)));
    if (j != 0 && j + 1 != grid.size()) r.min_besse_coefficient = std::min(r.min_besse_coefficient, 1.0 + s + v);
  }
  r.value_at_plus_one = value(f.fn, 1.0);
  r.value_at_minus_one = value(f.fn, -1.0);
  r.odd = r.max_oddness_violation <= tol;
  r.endpoints_zero = std::abs(r.value_at_plus_one) <= tol && std::abs(r.value_at_minus_one) <= tol;
  r.admissible = r.min_besse_coefficient > 0.0;
  return r;
}

struct BoundaryReport {
  struct Entry {
    int k = 0;
    double raw = 0;
    double normalized = 0;
    bool pass = false;
  };
  std::vector<Entry> entries;
  double tol = 0;

  bool pass() const {
    return std::all_of(entries.begin(), entries.end(), [](const Entry& e) { return e.pass; });
  }
  /// True iff every order up to and including k passes.
  bool pass_through(int k) const {
    for (const auto& e : entries) {
      if (e.k <= k && !e.pass) return false;
    }
    return true;
  }
};

inline void check_condition_order(int K) {
  if (K < 0 || 2 * K + 1 > kMaxJetOrder) {
    throw DomainError("boundary condition order K=" + std::to_string(K) + " needs a jet of order " +
                      std::to_string(2 * K + 1) + " > " + std::to_string(kMaxJetOrder));
  }
}

/// residual_k = f^(2k+1)(1) - (2k+1)/2 f^(2k)(1), k = 0..K.
inline BoundaryReport check_boundary_conditions_f(const DeformationProfile& f, int K, double tol = kSymbolicTol) {
  check_condition_order(K);
  Jet j = eval_jet(f.fn, 1.0, 2 * K + 1);
  BoundaryReport rep;
  rep.tol = tol;
  for (int k = 0; k <= K; ++k) {
    double even = j[2 * k];
    double raw = j[2 * k + 1] - (2 * k + 1) / 2.0 * even;
    double norm = raw / std::max(1.0, std::abs(even));
    rep.entries.push_back({k, raw, norm, std::abs(norm) < tol});
  }
  return rep;
}

/// residual_k = phi^(2k+1)(0).
inline BoundaryReport check_boundary_conditions_phi(const ProjectiveProfile& phi, int K, double tol = kSymbolicTol) {
  check_condition_order(K);
  Jet j = eval_jet(phi.fn, 0.0, 2 * K + 1);
  BoundaryReport rep;
  rep.tol = tol;
  for (int k = 0; k <= K; ++k) {
    double raw = j[2 * k + 1];
    rep.entries.push_back({k, raw, raw, std::abs(raw) < tol});
  }
  return rep;
}

/// Taylor series of B(rho) = 1 + f(1 - h rho)/(2 - h rho) about rho. At the
/// Hill boundary rho = 2/h the quotient is resolved as a removable singularity.
inline Taylor besse_B_taylor(double h, const Expr& f, double rho, int order) {
  if (!(h > 0)) throw InvalidInput("energy parameter h must be positive");
  Taylor r = Taylor::variable(rho, order + 1);
  Taylor x = Taylor::constant(1.0, order + 1) - r * h;
  Taylor den = Taylor::constant(2.0, order + 1) - r * h;
  if (std::abs(den[0]) <= 1e-13) {
    den[0] = 0.0;
    x[0] = -1.0;
  }
  Taylor num = eval_taylor(f, x);
  Taylor q = divide_removable(num, den, order, 1e-10);
  q[0] += 1.0;
  return q;
}

/// residual_k = (2k+1)-th derivative at rho = 0 of B(rho)^2. Normalized by
/// h^(2k+1) max(1, |f^(2k)(1)|) so it compares with the f-residuals.
inline BoundaryReport check_origin_regularity(double h, const DeformationProfile& f, int K,
                                              double tol = kSymbolicTol) {
  check_condition_order(K);
  if (!(h > 0)) throw InvalidInput("energy parameter h must be positive");
  Taylor B = besse_B_taylor(h, f.fn, 0.0, 2 * K + 1);
  Jet b2(B * B);
  Jet fj = eval_jet(f.fn, 1.0, 2 * K);
  BoundaryReport rep;
  rep.tol = tol;
  for (int k = 0; k <= K; ++k) {
    double raw = b2[2 * k + 1];
    double norm = raw / (std::pow(h, 2 * k + 1) * std::max(1.0, std::abs(fj[2 * k])));
    if (!std::isfinite(raw)) throw NumericalFailure("origin regularity residual is not finite");
    rep.entries.push_back({k, raw, norm, std::abs(norm) < tol});
  }
  return rep;
}

// ---- construction helpers ---------------------------------------------------

/// Bump with peak value 1 at the midpoint: the unit-interval bump, scaled by
/// e^4, pulled back along x -> (x - a)/(b - a). Narrow supports stay finite.
inline Expr unit_bump(double a, double b) {
  if (!(a < b)) throw InvalidInput("bump needs a < b");
  double w = b - a;
  return scale(std::exp(4.0), compose(make_bump(0.0, 1.0), affine(1.0 / w, -a / w)));
}

/// Odd pair of unit bumps, +amplitude peak on (a, b) and -amplitude on (-b, -a).
inline Expr odd_bump(double a, double b, double amplitude) {
  Expr g = unit_bump(a, b);
  return scale(amplitude, g - compose(g, affine(-1.0, 0.0)));
}

struct RandomProfileOptions {
  int min_bumps = 1;
  int max_bumps = 3;
  double max_total_amplitude = 0.2;
  double support_limit = 0.8;  ///< bump supports stay inside (-limit, limit)
  double min_width = 0.2;
};

/// Random admissible odd profile: a small mixture of odd bump pairs. Keeping
/// supports inside (-0.8, 0.8) and the total amplitude below 0.2 keeps
/// 1 + s + f(s) positive.
inline DeformationProfile random_odd_profile(std::mt19937_64& rng, const RandomProfileOptions& opt = {}) {
  std::uniform_int_distribution<int> count(opt.min_bumps, opt.max_bumps);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int n = count(rng);
  std::vector<Expr> terms;
  double lo = 0, hi = 0;
  for (int i = 0; i < n; ++i) {
    double L = opt.support_limit;
    double width = opt.min_width + (2 * L - opt.min_width) * 0.5 * unit(rng);
    double a = -L + (2 * L - width) * unit(rng);
    double amp = (2 * unit(rng) - 1) * opt.max_total_amplitude / n;
    terms.push_back(odd_bump(a, a + width, amp));
    hi = std::max({hi, std::abs(a), std::abs(a + width)});
  }
  lo = -hi;
  return {sum(std::move(terms)), Interval{lo, hi}};
}

/// Random odd profile mixing bump pairs with polynomials x(1-x^2)^m that
/// vanish at +-1 to varying order, so the endpoint conditions pass up to a
/// random order and then generically fail.
inline DeformationProfile random_mixed_profile(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Expr> terms{random_odd_profile(rng).fn};
  std::uniform_int_distribution<int> order(1, 9);
  int m = order(rng);
  if (m <= 8) {
    // x (1 - x^2)^m, expanded.
    std::vector<Param> coeffs(std::size_t(2 * m + 2), 0.0);
    double binom = 1;
    for (int i = 0; i <= m; ++i) {
      coeffs[std::size_t(2 * i + 1)] = ((i % 2) ? -binom : binom);
      binom = binom * (m - i) / (i + 1);
    }
    double c = (2 * unit(rng) - 1) * 0.2;
    terms.push_back(scale(c, polynomial(std::move(coeffs))));
  }
  return {sum(std::move(terms)), Interval{-1.0, 1.0}};
}

// ---- file format ------------------------------------------------------------

struct ProfileFile {
  std::string kind = "deformation";
  std::optional<double> h;
  Interval support{-1.0, 1.0};
  Expr expr = constant(0.0);
};

inline ProfileFile profile_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidInput("profile file must hold a JSON object");
  ProfileFile p;
  if (j.contains("kind")) {
    p.kind = j["kind"].get<std::string>();
    if (p.kind != "deformation" && p.kind != "projective") {
      throw InvalidInput("profile kind must be 'deformation' or 'projective', got '" + p.kind + "'");
    }
  }
  if (j.contains("h") && !j["h"].is_null()) p.h = detail::param_from_json(j["h"], "h").value;
  if (j.contains("support")) p.support = detail::interval_from_json(j["support"], "support");
  if (!j.contains("expr")) throw InvalidInput("profile file needs an 'expr' field");
  p.expr = expr_from_json(j["expr"]);
  return p;
}

inline nlohmann::json profile_to_json(const ProfileFile& p) {
  nlohmann::json j;
  j["kind"] = p.kind;
  if (p.h) j["h"] = *p.h;
  j["support"] = detail::interval_to_json(p.support);
  j["expr"] = expr_to_json(p.expr);
  return j;
}

inline ProfileFile load_profile_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open profile file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("malformed JSON in '" + path + "': " + e.what());
  }
  try {
    return profile_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("bad profile in '" + path + "': " + e.what());
  }
}

inline DeformationProfile as_deformation(const ProfileFile& p) {
  if (p.kind != "deformation") throw InvalidInput("expected a deformation profile, got '" + p.kind + "'");
  return {p.expr, p.support};
}

}  // namespace zoll
