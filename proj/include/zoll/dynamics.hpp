#pragma once

// Zoll verification at a fixed energy: return-angle quadrature in the normal
// form, and direct Hamiltonian integration with perihelion detection.

#include <boost/math/tools/toms748_solve.hpp>

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "zoll/dop853.hpp"
#include "zoll/errors.hpp"
#include "zoll/geometry.hpp"
#include "zoll/quadrature.hpp"

namespace zoll {

inline constexpr double kTwoPi = 2.0 * M_PI;
inline constexpr double kQuadratureTol = 1e-9;
inline constexpr double kIntegrationTol = 1e-5;

// ---- Clairaut constant and quadrature --------------------------------------

inline double ptheta_to_clairaut(double h, double p_theta) {
  require_positive_h(h);
  double limit = 1.0 / std::sqrt(h);
  if (!(p_theta > 0 && p_theta < limit)) {
    throw DomainError("p_theta = " + std::to_string(p_theta) + " outside (0, " + std::to_string(limit) +
                      "); 0 is a collision orbit and the upper end is circular");
  }
  return std::sqrt(h) * p_theta;
}

inline void require_clairaut(double c) {
  if (!(c > 0 && c < 1)) throw DomainError("Clairaut constant c = " + std::to_string(c) + " outside (0, 1)");
}

/// Angle swept during one radial oscillation of a normal-form geodesic with
/// Clairaut constant c. Uses cos r = sqrt(1 - c^2) sin t, which removes both
/// turning-point singularities; the remaining peak of width ~c near t = +-pi/2
/// is resolved by graded panels.
inline double return_angle_quadrature(const BesseProfile& b, double c) {
  require_clairaut(c);
  double k = std::sqrt(1.0 - c * c);
  auto integrand = [&](double t) {
    double st = std::sin(t);
    return c * (1.0 + value(b.b, k * st)) / (1.0 - k * k * st * st);
  };
  return 2.0 * composite_gauss64(integrand, graded_breakpoints(c));
}

/// Normal-form length of one radial oscillation (without the factor 1/sqrt(h)).
inline double radial_period_quadrature(const BesseProfile& b, double c) {
  require_clairaut(c);
  double k = std::sqrt(1.0 - c * c);
  auto integrand = [&](double t) { return 1.0 + value(b.b, k * std::sin(t)); };
  return 2.0 * composite_gauss64(integrand, graded_breakpoints(1.0));
}

// ---- Hamiltonian systems ----------------------------------------------------

/// State layout shared by all central systems: radial coordinate, angle,
/// radial momentum, angular momentum, accumulated JM length.
using OrbitVec = std::array<double, 5>;
enum OrbitIndex : std::size_t { kQ = 0, kTheta = 1, kP = 2, kPTheta = 3, kLength = 4 };

/// H = e^phi (p^2/(2 B^2) + p_theta^2/(2 rho^2) - 1/rho + h/2) on rho in (0, 2/h).
class DeformedKepler {
 public:
  explicit DeformedKepler(RotSystem sys) : sys_(std::move(sys)) { require_positive_h(sys_.h); }

  const RotSystem& system() const { return sys_; }
  double h() const { return sys_.h; }

  double hamiltonian(const OrbitVec& y) const {
    auto [B, dB, phi, dphi] = coefficients(y[kQ]);
    (void)dB;
    (void)dphi;
    return std::exp(phi) * bracket(y, B);
  }

  void rhs(const OrbitVec& y, OrbitVec& dy) const {
    double rho = y[kQ], p = y[kP], L = y[kPTheta];
    auto [B, dB, phi, dphi] = coefficients(rho);
    double e = std::exp(phi);
    double H = e * bracket(y, B);
    dy[kQ] = e * p / (B * B);
    dy[kTheta] = e * L / (rho * rho);
    dy[kP] = -dphi * H - e * (-p * p * dB / (B * B * B) - L * L / (rho * rho * rho) + 1.0 / (rho * rho));
    dy[kPTheta] = 0.0;
    dy[kLength] = e * (2.0 / rho - sys_.h);
  }

  /// Perihelion radius: smaller root of h rho^2 - 2 rho + p_theta^2 = 0.
  double q_min(double p_theta) const {
    ptheta_to_clairaut(sys_.h, p_theta);
    return p_theta * p_theta / (1.0 + std::sqrt(1.0 - sys_.h * p_theta * p_theta));
  }

  /// Maps a radial coordinate to the planar Kepler radius rho.
  double to_rho(double q) const { return q; }

 private:
  struct Coeffs {
    double B, dB, phi, dphi;
  };

  Coeffs coefficients(double rho) const {
    if (!(rho > 0 && rho < sys_.hill_radius())) {
      throw DomainError("orbit left the open Hill interval: rho = " + std::to_string(rho));
    }
    Taylor B = besse_B_taylor(sys_.h, sys_.f.fn, rho, 1);
    Taylor phi = eval_taylor(sys_.phi.fn, rho, 1);
    if (!(B[0] > 0)) throw DomainError("inadmissible profile: B <= 0 at rho = " + std::to_string(rho));
    return {B[0], B[1], phi[0], phi[1]};
  }

  double bracket(const OrbitVec& y, double B) const {
    double rho = y[kQ];
    return y[kP] * y[kP] / (2 * B * B) + y[kPTheta] * y[kPTheta] / (2 * rho * rho) - 1.0 / rho + sys_.h / 2;
  }

  RotSystem sys_;
};

template <class S>
concept CentralSystem = requires(const S& s, const OrbitVec& y, OrbitVec& dy, double v) {
  { s.h() } -> std::convertible_to<double>;
  { s.hamiltonian(y) } -> std::convertible_to<double>;
  s.rhs(y, dy);
  { s.q_min(v) } -> std::convertible_to<double>;
  { s.to_rho(v) } -> std::convertible_to<double>;
};

struct OrbitOptions {
  // 1e-12 lets occasional steps across steep bump flanks slip through the
  // error estimate; 1e-13 keeps return angles near 1e-11.
  double rtol = 1e-13;
  double atol = 1e-15;
  double event_time_tol = 1e-15;
  /// Record rho at theta = k * theta_step (0 disables).
  double theta_step = 0.0;
  long max_steps = 2'000'000;
};

struct Perihelion {
  double t = 0;
  double theta = 0;
  double length = 0;  ///< accumulated JM length
};

struct OrbitTrace {
  std::vector<double> times;
  std::vector<OrbitVec> states;
  std::vector<Perihelion> perihelia;
  std::vector<double> theta_grid;    ///< theta values of the angle samples
  std::vector<double> rho_at_theta;  ///< planar radius at those angles
  double energy_drift = 0;           ///< max |H| along the trace
  double ptheta_drift = 0;
  long steps = 0;

  /// Angle swept between consecutive perihelia.
  std::vector<double> return_angles() const {
    std::vector<double> out;
    double prev = 0;
    for (const auto& p : perihelia) {
      out.push_back(p.theta - prev);
      prev = p.theta;
    }
    return out;
  }
  std::vector<double> lengths() const {
    std::vector<double> out;
    double prev = 0;
    for (const auto& p : perihelia) {
      out.push_back(p.length - prev);
      prev = p.length;
    }
    return out;
  }
};

/// Integrates from perihelion (q = q_min, p = 0, theta = 0) on the level H = 0
/// until `n_periods` further perihelia have been located.
template <CentralSystem S>
OrbitTrace integrate_orbit(const S& sys, double p_theta, int n_periods, const OrbitOptions& opt = {}) {
  if (n_periods < 1) throw InvalidInput("need at least one radial period");
  double q0 = sys.q_min(p_theta);
  OrbitVec y0{q0, 0.0, 0.0, p_theta, 0.0};
  using Solver = Dop853<5>;
  Solver solver([&](double, const OrbitVec& y, OrbitVec& dy) { sys.rhs(y, dy); },
                Dop853Options{opt.rtol, opt.atol, 0.0, opt.max_steps});

  OrbitTrace tr;
  tr.times.push_back(0.0);
  tr.states.push_back(y0);
  tr.energy_drift = std::abs(sys.hamiltonian(y0));
  std::size_t next_theta = 1;
  if (opt.theta_step > 0) {
    tr.theta_grid.push_back(0.0);
    tr.rho_at_theta.push_back(sys.to_rho(q0));
  }

  auto refine = [&](const Solver::Step& s, auto&& g) {
    double ga = g(s.t_old), gb = g(s.t_new);
    if (ga == 0) return s.t_old;
    if (gb == 0) return s.t_new;
    std::uintmax_t iters = 200;
    auto tol = [&](double a, double b) {
      return std::abs(b - a) <= std::max(opt.event_time_tol, 4e-16 * std::abs(a));
    };
    auto [a, b] = boost::math::tools::toms748_solve(g, s.t_old, s.t_new, ga, gb, tol, iters);
    return 0.5 * (a + b);
  };

  // The time horizon is generous: the loop stops on the perihelion count.
  double horizon = 1e6;
  solver.integrate(0.0, y0, horizon, [&](const Solver::Step& s) {
    ++tr.steps;
    tr.times.push_back(s.t_new);
    tr.states.push_back(s.y_new);
    tr.energy_drift = std::max(tr.energy_drift, std::abs(sys.hamiltonian(s.y_new)));
    tr.ptheta_drift = std::max(tr.ptheta_drift, std::abs(s.y_new[kPTheta] - p_theta));

    // Locate a perihelion first so angle samples past the final one are not recorded.
    bool done = false;
    double theta_end = s.y_new[kTheta];
    if (s.y_old[kP] < 0 && s.y_new[kP] >= 0) {
      double t = refine(s, [&](double tt) { return s.dense(tt)[kP]; });
      OrbitVec y = s.dense(t);
      tr.perihelia.push_back({t, y[kTheta], y[kLength]});
      done = int(tr.perihelia.size()) >= n_periods;
      if (done) theta_end = y[kTheta];
    }
    if (opt.theta_step > 0) {
      while (double(next_theta) * opt.theta_step <= theta_end) {
        double target = double(next_theta) * opt.theta_step;
        double t = refine(s, [&](double tt) { return s.dense(tt)[kTheta] - target; });
        tr.theta_grid.push_back(target);
        tr.rho_at_theta.push_back(sys.to_rho(s.dense(t)[kQ]));
        ++next_theta;
      }
    }
    return !done;
  });
  if (int(tr.perihelia.size()) < n_periods) {
    throw NumericalFailure("orbit did not complete " + std::to_string(n_periods) + " radial periods");
  }
  return tr;
}

/// Planar points (rho cos theta, rho sin theta) at the recorded angle samples.
inline std::vector<std::array<double, 2>> orbit_points(const OrbitTrace& tr) {
  std::vector<std::array<double, 2>> pts;
  for (std::size_t i = 0; i < tr.theta_grid.size(); ++i) {
    pts.push_back({tr.rho_at_theta[i] * std::cos(tr.theta_grid[i]), tr.rho_at_theta[i] * std::sin(tr.theta_grid[i])});
  }
  return pts;
}

/// Symmetric Hausdorff distance between two finite point sets.
inline double hausdorff_distance(const std::vector<std::array<double, 2>>& a,
                                 const std::vector<std::array<double, 2>>& b) {
  if (a.empty() || b.empty()) throw InvalidInput("Hausdorff distance of an empty point set");
  auto directed = [](const auto& from, const auto& to) {
    double worst = 0;
    for (const auto& p : from) {
      double best = INFINITY;
      for (const auto& q : to) best = std::min(best, std::hypot(p[0] - q[0], p[1] - q[1]));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

// ---- scans ------------------------------------------------------------------

enum class ScanMethod { quadrature, integration };

inline std::string to_string(ScanMethod m) { return m == ScanMethod::quadrature ? "quadrature" : "integration"; }

enum class Verdict { zoll, non_zoll, inconclusive, failed };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::zoll: return "zoll";
    case Verdict::non_zoll: return "non-zoll";
    case Verdict::inconclusive: return "inconclusive";
    case Verdict::failed: return "failed";
  }
  return "failed";
}

struct ZollReport {
  ScanMethod method = ScanMethod::quadrature;
  double h = 1.0;
  std::vector<double> clairaut;
  std::vector<double> p_theta;
  std::vector<double> dtheta;
  std::vector<double> period;  ///< normal-form length per radial oscillation
  std::vector<double> energy_drift;
  double max_dtheta_dev = 0;
  double max_period_dev = 0;
  double max_energy_drift = 0;
  double tol = 0;
  Verdict verdict = Verdict::failed;
  std::optional<double> failed_at;  ///< offending Clairaut constant
  std::string failure;
};

/// c_i = 0.02 + 0.96 (i + 1/2)/n: n interior points with 2% end margins.
inline std::vector<double> clairaut_grid(int n) {
  if (n < 8) throw InvalidInput("scan grid needs at least 8 points");
  std::vector<double> c(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) c[std::size_t(i)] = 0.02 + 0.96 * (i + 0.5) / n;
  return c;
}

inline void finish_report(ZollReport& r) {
  for (std::size_t i = 0; i < r.dtheta.size(); ++i) {
    r.max_dtheta_dev = std::max(r.max_dtheta_dev, std::abs(r.dtheta[i] - kTwoPi));
    r.max_period_dev = std::max(r.max_period_dev, std::abs(r.period[i] - kTwoPi));
  }
  for (double e : r.energy_drift) r.max_energy_drift = std::max(r.max_energy_drift, e);
  if (r.verdict != Verdict::failed) {
    r.verdict = (r.max_dtheta_dev < r.tol && r.max_period_dev < r.tol) ? Verdict::zoll : Verdict::non_zoll;
  }
}

inline ZollReport zoll_scan_quadrature(const BesseProfile& b, int grid_size, double h = 1.0,
                                       double tol = kQuadratureTol) {
  ZollReport r;
  r.method = ScanMethod::quadrature;
  r.h = h;
  r.tol = tol;
  r.verdict = Verdict::zoll;
  for (double c : clairaut_grid(grid_size)) {
    try {
      double dt = return_angle_quadrature(b, c);
      double per = radial_period_quadrature(b, c);
      if (!std::isfinite(dt) || !std::isfinite(per)) throw NumericalFailure("non-finite quadrature value");
      r.clairaut.push_back(c);
      r.p_theta.push_back(c / std::sqrt(h));
      r.dtheta.push_back(dt);
      r.period.push_back(per);
      r.energy_drift.push_back(0.0);
    } catch (const std::exception& e) {
      r.verdict = Verdict::failed;
      r.failed_at = c;
      r.failure = e.what();
      break;
    }
  }
  finish_report(r);
  return r;
}

/// Integration scan; the normal-form period is sqrt(h) times the JM length.
template <CentralSystem S>
ZollReport zoll_scan_integration(const S& sys, int grid_size, double tol = kIntegrationTol,
                                 const OrbitOptions& opt = {}) {
  ZollReport r;
  r.method = ScanMethod::integration;
  r.h = sys.h();
  r.tol = tol;
  r.verdict = Verdict::zoll;
  for (double c : clairaut_grid(grid_size)) {
    double pt = c / std::sqrt(sys.h());
    try {
      OrbitTrace tr = integrate_orbit(sys, pt, 1, opt);
      r.clairaut.push_back(c);
      r.p_theta.push_back(pt);
      r.dtheta.push_back(tr.return_angles().front());
      r.period.push_back(std::sqrt(sys.h()) * tr.lengths().front());
      r.energy_drift.push_back(tr.energy_drift);
    } catch (const std::exception& e) {
      r.verdict = Verdict::failed;
      r.failed_at = c;
      r.failure = e.what();
      break;
    }
  }
  finish_report(r);
  return r;
}

/// Quadrature scan of the normal form of (h, f).
inline ZollReport zoll_scan(const DeformationProfile& f, double h, int grid_size,
                            ScanMethod method = ScanMethod::quadrature) {
  if (method == ScanMethod::quadrature) return zoll_scan_quadrature(to_besse(f, h), grid_size, h);
  return zoll_scan_integration(DeformedKepler(RotSystem{h, f, {constant(0.0), h}}), grid_size);
}

}  // namespace zoll
