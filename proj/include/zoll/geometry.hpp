#pragma once

// Deformed Kepler systems, their Jacobi-Maupertuis metrics and the normal
// form (1/h)((1 + b(cos r))^2 dr^2 + sin^2 r dtheta^2) with cos r = 1 - h rho.

#include <cmath>
#include <string>

#include "zoll/errors.hpp"
#include "zoll/expr.hpp"
#include "zoll/profiles.hpp"

namespace zoll {

inline void require_positive_h(double h) {
  if (!(h > 0) || !std::isfinite(h)) throw InvalidInput("energy parameter h must be positive and finite");
}

inline double rho_to_r(double h, double rho) {
  require_positive_h(h);
  if (!(rho >= 0 && rho <= 2 / h)) {
    throw DomainError("rho = " + std::to_string(rho) + " outside the Hill interval [0, " + std::to_string(2 / h) + "]");
  }
  return std::acos(std::clamp(1.0 - h * rho, -1.0, 1.0));
}

inline double r_to_rho(double h, double r) {
  require_positive_h(h);
  if (!(r >= 0 && r <= M_PI)) throw DomainError("r = " + std::to_string(r) + " outside [0, pi]");
  return (1.0 - std::cos(r)) / h;
}

/// Jet of B(rho) = 1 + f(1 - h rho)/(2 - h rho).
inline Jet metric_coeff_B(double h, const DeformationProfile& f, double rho, int order) {
  require_positive_h(h);
  if (!(rho >= 0 && rho <= 2 / h * (1 + 1e-15))) {
    throw DomainError("rho = " + std::to_string(rho) + " outside the Hill interval");
  }
  if (order < 0 || order > kMaxJetOrder) throw DomainError("jet order out of range");
  Jet B(besse_B_taylor(h, f.fn, rho, order));
  if (!(B.value() > 0)) {
    throw DomainError("inadmissible profile: B(" + std::to_string(rho) + ") = " + std::to_string(B.value()) + " <= 0");
  }
  return B;
}

enum class Chart { polar_rho, normal_form_r };

struct MetricSample {
  double g_rr = 0;
  double g_thth = 0;
  double point = 0;
  Chart chart = Chart::polar_rho;
};

/// ((2 - h rho)/rho)(B^2 drho^2 + rho^2 dtheta^2).
inline MetricSample jm_metric(double h, const DeformationProfile& f, double rho) {
  require_positive_h(h);
  if (!(rho > 0 && rho < 2 / h)) {
    throw DomainError("JM metric degenerates outside the open Hill interval; rho = " + std::to_string(rho));
  }
  double B = metric_coeff_B(h, f, rho, 0).value();
  double w = 2.0 - h * rho;
  return {w * B * B / rho, w * rho, rho, Chart::polar_rho};
}

struct BesseProfile {
  Expr b = identity();
  double scale = 1.0;  ///< global factor 1/h of the normal form
  bool endpoints_zero = true;
  bool odd = true;
};

/// b(s) = s + f(s). Throws when 1 + b vanishes somewhere in (-1, 1); profiles
/// violating the endpoint condition are flagged, not rejected.
inline BesseProfile to_besse(const DeformationProfile& f, double h = 1.0, double tol = kSymbolicTol) {
  require_positive_h(h);
  ValidityReport v = validate_profile(f, tol);
  if (!v.admissible) {
    throw DomainError("inadmissible profile: 1 + s + f(s) reaches " + std::to_string(v.min_besse_coefficient));
  }
  BesseProfile b;
  b.b = identity() + f.fn;
  b.scale = 1.0 / h;
  b.endpoints_zero = v.endpoints_zero;
  b.odd = v.odd;
  return b;
}

/// Normal-form metric at r, including the factor 1/h.
inline MetricSample normal_form_metric(const BesseProfile& b, double r) {
  double s = std::cos(r);
  double w = 1.0 + value(b.b, s);
  double sn = std::sin(r);
  return {b.scale * w * w, b.scale * sn * sn, r, Chart::normal_form_r};
}

/// Normal-form metric pulled back to the rho chart through h drho = sin r dr.
inline MetricSample pullback_to_rho(const BesseProfile& b, double h, double rho) {
  double r = rho_to_r(h, rho);
  MetricSample m = normal_form_metric(b, r);
  double drdrho = h / std::sin(r);
  return {m.g_rr * drdrho * drdrho, m.g_thth, rho, Chart::polar_rho};
}

struct RotSystem {
  double h = 2.0;
  DeformationProfile f{};
  ProjectiveProfile phi{};

  double hill_radius() const { return 2.0 / h; }
};

struct LagrangianTerms {
  double kinetic_rr = 0;      ///< e^{-phi} B^2
  double kinetic_thth = 0;    ///< e^{-phi} rho^2
  double potential = 0;       ///< e^{phi} (1/rho - h/2)
};

inline LagrangianTerms lagrangian_terms(const RotSystem& sys, double rho) {
  require_positive_h(sys.h);
  if (!(rho > 0)) throw DomainError("rho must be positive, got " + std::to_string(rho));
  if (rho > sys.hill_radius() * (1 + 1e-15)) throw DomainError("rho beyond the Hill radius");
  double B = metric_coeff_B(sys.h, sys.f, rho, 0).value();
  double phi = value(sys.phi.fn, rho);
  double e = std::exp(phi);
  double pot = rho == sys.hill_radius() ? 0.0 : e * (1.0 / rho - sys.h / 2);
  return {B * B / e, rho * rho / e, pot};
}

}  // namespace zoll
