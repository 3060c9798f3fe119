#pragma once

// Zoll central forces on the flat plane. With rho = A(sigma) solving
//
//   A' = A (2 - h A) / (sigma (2 - h A + f(1 - h A))),
//
// the JM metric of the deformed Kepler system becomes 2 P(sigma)(dsigma^2 +
// sigma^2 dtheta^2) with P = A (2 - h A)/(2 sigma^2), so the flat system
// H = p^2/2 + p_theta^2/(2 sigma^2) - P(sigma) is Zoll at H = 0.

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "zoll/dop853.hpp"
#include "zoll/dynamics.hpp"
#include "zoll/errors.hpp"
#include "zoll/expr.hpp"
#include "zoll/geometry.hpp"
#include "zoll/profiles.hpp"

namespace zoll {

/// Half-width s of the smallest [-s, s] outside which f vanishes, bounded by
/// the declared support and refined by sampling.
inline double profile_support_radius(const DeformationProfile& f, int samples = 8001) {
  double declared = std::max(std::abs(f.support.lo), std::abs(f.support.hi));
  double dx = 2.0 / (samples - 1);
  double last = -1;
  for (int i = 0; i < samples; ++i) {
    double x = -1.0 + dx * i;
    if (value(f.fn, x) != 0.0) last = std::max(last, std::abs(x));
  }
  if (last < 0) return 0.0;
  return std::min(declared, std::min(1.0, last + dx));
}

class ConformalMap {
 public:
  using Solver = Dop853<1>;

  ConformalMap(double h, DeformationProfile f, double rtol = 1e-14) : h_(h), f_(std::move(f)) {
    require_positive_h(h);
    s_ = profile_support_radius(f_);
    if (s_ >= 1.0 - 1e-9) {
      throw InvalidInput("flat potential needs f to vanish on a neighbourhood of x = 1 (the planar origin)");
    }
    ValidityReport v = validate_profile(f_);
    if (!v.admissible) throw DomainError("inadmissible profile: 2 - hA + f(1 - hA) reaches zero");
    sigma0_ = (1.0 - s_) / h;
    double target = (1.0 + s_) / h;
    if (s_ == 0.0) {
      sigma1_ = sigma0_;
      k_ = 1.0;
    } else {
      solve(target, rtol);
    }
    sigma_max_ = 2.0 / (h * k_);
  }

  double h() const { return h_; }
  const DeformationProfile& profile() const { return f_; }
  double support_radius() const { return s_; }
  double identity_end() const { return sigma0_; }  ///< A(sigma) = sigma below this
  double tail_start() const { return sigma1_; }    ///< A(sigma) = k sigma above this
  double tail_slope() const { return k_; }
  double sigma_max() const { return sigma_max_; }
  const std::vector<Solver::Step>& steps() const { return steps_; }

  double A(double sigma) const {
    check(sigma);
    if (sigma <= sigma0_) return sigma;
    if (sigma >= sigma1_) return k_ * sigma;
    return step_at(sigma).dense(sigma)[0];
  }

  /// A' from the right-hand side of the ODE.
  double dA(double sigma) const {
    check(sigma);
    if (sigma <= sigma0_) return 1.0;
    if (sigma >= sigma1_) return k_;
    return slope(sigma, A(sigma));
  }

  /// A' from the dense interpolant, independent of the ODE formula.
  double dA_interpolant(double sigma) const {
    check(sigma);
    if (sigma <= sigma0_) return 1.0;
    if (sigma >= sigma1_) return k_;
    return step_at(sigma).dense_derivative(sigma)[0];
  }

  /// A'(sigma) sigma (2 - hA + f(1 - hA)) - A (2 - hA), with A' from the interpolant.
  double conformality_residual(double sigma) const {
    double a = A(sigma);
    double w = 2.0 - h_ * a;
    return dA_interpolant(sigma) * sigma * (w + value(f_.fn, 1.0 - h_ * a)) - a * w;
  }

  double inverse(double rho) const {
    if (!(rho >= 0 && rho <= 2.0 / h_ * (1 + 1e-15))) {
      throw DomainError("rho = " + std::to_string(rho) + " outside the Hill interval");
    }
    if (rho <= sigma0_) return rho;
    if (rho >= k_ * sigma1_) return rho / k_;
    auto it = std::lower_bound(steps_.begin(), steps_.end(), rho,
                               [](const Solver::Step& s, double r) { return s.y_new[0] < r; });
    if (it == steps_.end()) it = std::prev(steps_.end());
    auto g = [&](double t) { return it->dense(t)[0] - rho; };
    double ga = g(it->t_old), gb = g(it->t_new);
    if (ga >= 0) return it->t_old;
    if (gb <= 0) return it->t_new;
    std::uintmax_t iters = 100;
    auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-15 * std::max(1.0, std::abs(a)); };
    auto [a, b] = boost::math::tools::toms748_solve(g, it->t_old, it->t_new, ga, gb, tol, iters);
    return 0.5 * (a + b);
  }

 private:
  double slope(double sigma, double a) const {
    double w = 2.0 - h_ * a;
    double den = w + value(f_.fn, 1.0 - h_ * a);
    if (!(den > 0)) throw DomainError("inadmissible profile: 2 - hA + f(1 - hA) <= 0 at sigma " + std::to_string(sigma));
    return a * w / (sigma * den);
  }

  void solve(double target, double rtol) {
    Solver solver([this](double t, const Solver::State& y, Solver::State& dy) { dy[0] = slope(t, y[0]); },
                  Dop853Options{rtol, 1e-15, 0.0, 200'000});
    bool hit = false;
    // A grows at least like sigma, so the target is reached before sigma = target.
    solver.integrate(sigma0_, {sigma0_}, 2.0 * target + 1.0, [&](const Solver::Step& s) {
      if (!(s.y_new[0] > s.y_old[0])) throw NumericalFailure("conformal map is not increasing");
      if (s.y_new[0] < target) {
        steps_.push_back(s);
        return true;
      }
      auto g = [&](double t) { return s.dense(t)[0] - target; };
      std::uintmax_t iters = 100;
      auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-15 * std::max(1.0, std::abs(a)); };
      auto [a, b] = boost::math::tools::toms748_solve(g, s.t_old, s.t_new, g(s.t_old), g(s.t_new), tol, iters);
      Solver::Step last = s;
      last.t_new = 0.5 * (a + b);
      last.y_new = s.dense(last.t_new);
      steps_.push_back(last);
      hit = true;
      return false;
    });
    if (!hit) throw NumericalFailure("conformal map never reached the end of the profile support");
    sigma1_ = steps_.back().t_new;
    k_ = target / sigma1_;
  }

  const Solver::Step& step_at(double sigma) const {
    auto it = std::lower_bound(steps_.begin(), steps_.end(), sigma,
                               [](const Solver::Step& s, double t) { return s.t_new < t; });
    if (it == steps_.end()) it = std::prev(steps_.end());
    return *it;
  }

  void check(double sigma) const {
    if (!(sigma >= 0 && sigma <= sigma_max_ * (1 + 1e-15))) {
      throw DomainError("sigma = " + std::to_string(sigma) + " outside [0, " + std::to_string(sigma_max_) + "]");
    }
  }

  double h_;
  DeformationProfile f_;
  double s_ = 0, sigma0_ = 0, sigma1_ = 0, k_ = 1, sigma_max_ = 0;
  std::vector<Solver::Step> steps_;
};

inline ConformalMap solve_conformal_map(double h, const DeformationProfile& f) { return ConformalMap(h, f); }

/// P(sigma) = A (2 - h A)/(2 sigma^2), plus an optional additive perturbation
/// used to build deliberately broken potentials.
class ExoticPotential {
 public:
  explicit ExoticPotential(ConformalMap map, Expr perturbation = constant(0.0))
      : map_(std::move(map)), pert_(std::move(perturbation)) {}

  const ConformalMap& map() const { return map_; }
  double h() const { return map_.h(); }
  double sigma_max() const { return map_.sigma_max(); }
  /// Default lower end of tabulations; P blows up at 0.
  double sigma_min() const { return 1e-4 * map_.sigma_max(); }

  double P(double sigma) const {
    if (!(sigma > 0)) throw DomainError("P is singular at sigma = 0");
    double a = map_.A(sigma);
    return a * (2.0 - h() * a) / (2 * sigma * sigma) + value(pert_, sigma);
  }

  double dP(double sigma) const {
    if (!(sigma > 0)) throw DomainError("P is singular at sigma = 0");
    double a = map_.A(sigma), da = map_.dA(sigma);
    return da * (1.0 - h() * a) / (sigma * sigma) - a * (2.0 - h() * a) / (sigma * sigma * sigma) +
           eval_taylor(pert_, sigma, 1)[1];
  }

  /// Projective profile making the pulled-back Kepler system projectively
  /// equivalent to the flat one: phi(rho) = 2 log(rho / A^{-1}(rho)).
  double phi(double rho) const {
    if (!(rho > 0)) return 0.0;
    return 2.0 * std::log(rho / map_.inverse(rho));
  }

 private:
  ConformalMap map_;
  Expr pert_;
};

inline ExoticPotential exotic_potential(const ConformalMap& map) { return ExoticPotential(map); }

/// H = p^2/2 + p_theta^2/(2 sigma^2) - P(sigma); JM length accumulates 2P.
class FlatSystem {
 public:
  explicit FlatSystem(ExoticPotential pot) : pot_(std::move(pot)) {}

  double h() const { return pot_.h(); }
  const ExoticPotential& potential() const { return pot_; }

  double hamiltonian(const OrbitVec& y) const {
    double s = y[kQ];
    return y[kP] * y[kP] / 2 + y[kPTheta] * y[kPTheta] / (2 * s * s) - pot_.P(s);
  }

  void rhs(const OrbitVec& y, OrbitVec& dy) const {
    double s = y[kQ], L = y[kPTheta];
    if (!(s > 0 && s < pot_.sigma_max())) {
      throw DomainError("orbit left the open Hill disk: sigma = " + std::to_string(s));
    }
    dy[kQ] = y[kP];
    dy[kTheta] = L / (s * s);
    dy[kP] = L * L / (s * s * s) + pot_.dP(s);
    dy[kPTheta] = 0.0;
    dy[kLength] = 2.0 * pot_.P(s);
  }

  /// Smaller root of 2 P(sigma) sigma^2 = p_theta^2, seeded by the image of
  /// the Kepler perihelion.
  double q_min(double p_theta) const {
    double h = pot_.h();
    ptheta_to_clairaut(h, p_theta);
    double rho = p_theta * p_theta / (1.0 + std::sqrt(1.0 - h * p_theta * p_theta));
    double guess = pot_.map().inverse(rho);
    auto F = [&](double s) { return 2.0 * pot_.P(s) * s * s - p_theta * p_theta; };
    double f0 = F(guess);
    if (f0 == 0.0) return guess;
    // Expand a bracket around the guess; F < 0 below the root, > 0 above it.
    double lo = guess, hi = guess;
    for (double d = 1e-12 * guess; d < guess; d *= 2) {
      lo = std::max(guess - d, 0.5 * guess);
      hi = std::min(guess + d, 0.999 * pot_.sigma_max());
      if (F(lo) < 0 && F(hi) > 0) break;
    }
    if (!(F(lo) < 0 && F(hi) > 0)) throw NumericalFailure("could not bracket the flat perihelion");
    std::uintmax_t iters = 200;
    auto tol = [](double a, double b) { return std::abs(b - a) <= 4e-16 * std::abs(a); };
    auto [a, b] = boost::math::tools::toms748_solve(F, lo, hi, tol, iters);
    return 0.5 * (a + b);
  }

  double to_rho(double sigma) const { return pot_.map().A(sigma); }

 private:
  ExoticPotential pot_;
};

/// Energy drift above this makes a flat verdict inconclusive.
inline constexpr double kFlatDriftBound = 1e-8;

inline OrbitOptions flat_orbit_options() {
  OrbitOptions o;
  o.rtol = 1e-13;
  o.atol = 1e-15;
  return o;
}

inline ZollReport verify_flat_zoll(const ExoticPotential& pot, int grid_size, double tol = kIntegrationTol,
                                   const OrbitOptions& opt = flat_orbit_options()) {
  ZollReport r = zoll_scan_integration(FlatSystem(pot), grid_size, tol, opt);
  if (r.verdict != Verdict::failed && r.max_energy_drift > kFlatDriftBound) {
    r.verdict = Verdict::inconclusive;
    r.failure = "energy drift " + std::to_string(r.max_energy_drift) + " exceeds " + std::to_string(kFlatDriftBound);
  }
  return r;
}

}  // namespace zoll
