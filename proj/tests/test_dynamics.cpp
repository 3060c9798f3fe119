#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "generators.hpp"
#include "zoll/dynamics.hpp"

using namespace zoll;
using namespace zoll::testing;

namespace {

BesseProfile besse_of(Expr b) {
  BesseProfile p;
  p.b = std::move(b);
  return p;
}

// b(s) = s + 0.1 (1 - s^2)
BesseProfile even_perturbed() { return besse_of(polynomial({0.1, 1.0, -0.1})); }

DeformedKepler kepler(double h, Expr phi = constant(0.0)) {
  return DeformedKepler(RotSystem{h, DeformationProfile{}, {std::move(phi), h}});
}

}  // namespace

TEST(Clairaut, Examples) {
  EXPECT_NEAR(ptheta_to_clairaut(2.0, 0.5), std::sqrt(2.0) / 2, 1e-15);
  EXPECT_NEAR(ptheta_to_clairaut(4.0, 0.25), 0.5, 1e-15);
  EXPECT_GT(ptheta_to_clairaut(1.0, 1.0 - 1e-12), 1.0 - 1e-11);
  EXPECT_THROW(ptheta_to_clairaut(1.0, 1.0), DomainError);
  EXPECT_THROW(ptheta_to_clairaut(1.0, 0.0), DomainError);
}

// The Clairaut constant equals sin r at the turning point, where
// h rho^2 - 2 rho + p_theta^2 = 0 and cos r = 1 - h rho.
TEST(Clairaut, MatchesTurningPointOracle) {
  std::mt19937_64 rng(51);
  for (int i = 0; i < 100; ++i) {
    double h = uniform(rng, 0.2, 8.0);
    double pt = uniform(rng, 0.01, 0.99) / std::sqrt(h);
    double rho = (1.0 - std::sqrt(1.0 - h * pt * pt)) / h;
    EXPECT_NEAR(ptheta_to_clairaut(h, pt), std::sin(std::acos(1.0 - h * rho)), 1e-10);
  }
}

TEST(ReturnAngle, BaseCases) {
  EXPECT_NEAR(return_angle_quadrature(besse_of(constant(0.0)), 0.7), kTwoPi, 1e-12);
  EXPECT_NEAR(return_angle_quadrature(besse_of(identity()), 0.3), kTwoPi, 1e-12);
  EXPECT_GT(std::abs(return_angle_quadrature(even_perturbed(), 0.5) - kTwoPi), 1e-3);
  EXPECT_THROW(return_angle_quadrature(besse_of(identity()), 1.0), DomainError);
}

TEST(RadialPeriod, BaseCases) {
  EXPECT_NEAR(radial_period_quadrature(besse_of(constant(0.0)), 0.5), kTwoPi, 1e-12);
  EXPECT_NEAR(radial_period_quadrature(besse_of(identity()), 0.9), kTwoPi, 1e-12);
  EXPECT_GT(std::abs(radial_period_quadrature(even_perturbed(), 0.5) - kTwoPi), 1e-3);
}

// Independent oracle for an even perturbation: with b = s + e(1 - s^2), the
// return angle is 2 pi + 2 e c int (1 - k^2 sin^2)/(1 - k^2 sin^2) dt = 2 pi + 2 pi e c.
TEST(ReturnAngle, EvenPerturbationClosedForm) {
  for (double c : {0.1, 0.5, 0.9}) {
    double e = 0.1;
    EXPECT_NEAR(return_angle_quadrature(besse_of(polynomial({e, 1.0, -e})), c), kTwoPi + kTwoPi * e * c, 1e-11);
  }
}

TEST(ReturnAngle, ParityImpliesZoll) {
  std::mt19937_64 rng(52);
  for (int i = 0; i < 20; ++i) {
    auto b = to_besse(random_odd_profile(rng), 1.0);
    for (double c : clairaut_grid(16)) {
      EXPECT_NEAR(return_angle_quadrature(b, c), kTwoPi, 1e-9);
      EXPECT_NEAR(radial_period_quadrature(b, c), kTwoPi, 1e-9);
    }
  }
}

TEST(Hamiltonian, CircularOrbitIsEquilibrium) {
  auto sys = kepler(2.0);
  OrbitVec y{0.5, 0.0, 0.0, 1.0 / std::sqrt(2.0), 0.0}, dy{};
  sys.rhs(y, dy);
  EXPECT_NEAR(dy[kQ], 0.0, 1e-15);
  EXPECT_NEAR(dy[kP], 0.0, 1e-14);
  EXPECT_NEAR(sys.hamiltonian(y), 0.0, 1e-15);
}

TEST(Hamiltonian, AngularVelocity) {
  auto sys = kepler(1.0);
  OrbitVec y{1.0, 0.0, 0.0, 0.5, 0.0}, dy{};
  sys.rhs(y, dy);
  EXPECT_DOUBLE_EQ(dy[kTheta], 0.5);
}

// Hamilton's equations against central differences of H.
TEST(Hamiltonian, RhsMatchesFiniteDifferenceGradient) {
  std::mt19937_64 rng(53);
  for (int i = 0; i < 30; ++i) {
    double h = uniform(rng, 0.5, 3.0);
    RotSystem s{h, random_odd_profile(rng), {polynomial({0.0, 0.0, uniform(rng, -0.5, 0.5)}), h}};
    DeformedKepler sys(s);
    OrbitVec y{uniform(rng, 0.2, 1.8) / h, 0.3, uniform(rng, -1, 1), uniform(rng, 0.1, 0.9), 0.0}, dy{};
    sys.rhs(y, dy);
    auto partial = [&](std::size_t idx) {
      double d = 1e-6;
      OrbitVec a = y, b = y;
      a[idx] += d;
      b[idx] -= d;
      return (sys.hamiltonian(a) - sys.hamiltonian(b)) / (2 * d);
    };
    EXPECT_NEAR(dy[kQ], partial(kP), 1e-7);
    EXPECT_NEAR(dy[kTheta], partial(kPTheta), 1e-7);
    EXPECT_NEAR(dy[kP], -partial(kQ), 1e-7);
  }
}

TEST(IntegrateOrbit, KeplerCloses) {
  auto tr = integrate_orbit(kepler(2.0), 0.5, 1);
  EXPECT_NEAR(tr.return_angles().front(), kTwoPi, 1e-6);
  EXPECT_LT(tr.energy_drift, 1e-10);
  EXPECT_LT(tr.ptheta_drift, 1e-15);
  EXPECT_THROW(integrate_orbit(kepler(2.0), 1.0 / std::sqrt(2.0), 1), DomainError);
}

// Kepler ellipse oracle: rho(theta) = p/(1 + e cos theta) with p = p_theta^2 and
// e = sqrt(1 - h p_theta^2), measured from perihelion.
TEST(IntegrateOrbit, KeplerFollowsEllipse) {
  double h = 2.0, pt = 0.5;
  OrbitOptions opt;
  opt.theta_step = 0.1;
  auto tr = integrate_orbit(kepler(h), pt, 1, opt);
  double p = pt * pt, e = std::sqrt(1.0 - h * pt * pt);
  ASSERT_GT(tr.theta_grid.size(), 60u);
  for (std::size_t i = 0; i < tr.theta_grid.size(); ++i) {
    EXPECT_NEAR(tr.rho_at_theta[i], p / (1 + e * std::cos(tr.theta_grid[i])), 1e-9);
  }
}

TEST(IntegrateOrbit, DeformedZollMatchesQuadrature) {
  DeformationProfile f{odd_bump(0.1, 0.6, 0.1), {-0.6, 0.6}};
  double h = 2.0, pt = 0.3;
  auto tr = integrate_orbit(DeformedKepler(RotSystem{h, f, {constant(0.0), h}}), pt, 2);
  for (double dt : tr.return_angles()) EXPECT_NEAR(dt, kTwoPi, 1e-6);
  EXPECT_NEAR(tr.return_angles().front(), return_angle_quadrature(to_besse(f, h), ptheta_to_clairaut(h, pt)), 1e-6);
}

TEST(IntegrateOrbit, JmLengthScalesWithEnergy) {
  DeformationProfile f{odd_bump(0.2, 0.7, 0.15), {-0.7, 0.7}};
  for (double h : {0.5, 2.0, 5.0}) {
    DeformedKepler sys(RotSystem{h, f, {constant(0.0), h}});
    for (double c : {0.2, 0.5, 0.8}) {
      auto tr = integrate_orbit(sys, c / std::sqrt(h), 1);
      EXPECT_NEAR(tr.lengths().front(), kTwoPi / std::sqrt(h), 1e-9);
    }
  }
}

TEST(IntegrateOrbit, ConservesInvariants) {
  std::mt19937_64 rng(54);
  for (int i = 0; i < 10; ++i) {
    double h = uniform(rng, 0.5, 4.0);
    DeformedKepler sys(RotSystem{h, random_odd_profile(rng), {polynomial({0.0, 0.0, 0.25}), h}});
    auto tr = integrate_orbit(sys, uniform(rng, 0.05, 0.95) / std::sqrt(h), 3);
    EXPECT_LT(tr.energy_drift, 1e-9);
    EXPECT_LT(tr.ptheta_drift, 1e-15);
  }
}

TEST(ZollScan, KeplerAndPerturbations) {
  auto k = zoll_scan({}, 2.0, 32);
  EXPECT_EQ(k.verdict, Verdict::zoll);
  EXPECT_LT(k.max_dtheta_dev, 1e-9);
  EXPECT_LT(k.max_period_dev, 1e-9);

  auto e = zoll_scan({polynomial({0.1, 0.0, -0.1}), {-1.0, 1.0}}, 2.0, 32);
  EXPECT_EQ(e.verdict, Verdict::non_zoll);

  // Odd but violating the endpoint conditions: still Zoll away from the origin.
  auto q = zoll_scan({polynomial({0.0, 1.0, 0.0, -2.0, 0.0, 1.0}), {-1.0, 1.0}}, 2.0, 32);
  EXPECT_EQ(q.verdict, Verdict::zoll);
}

TEST(ZollScan, MethodsAgree) {
  std::mt19937_64 rng(55);
  for (int i = 0; i < 3; ++i) {
    auto f = random_odd_profile(rng);
    double h = uniform(rng, 0.5, 4.0);
    auto q = zoll_scan(f, h, 12, ScanMethod::quadrature);
    auto n = zoll_scan(f, h, 12, ScanMethod::integration);
    ASSERT_EQ(q.dtheta.size(), n.dtheta.size());
    for (std::size_t j = 0; j < q.dtheta.size(); ++j) EXPECT_NEAR(q.dtheta[j], n.dtheta[j], 1e-5);
    EXPECT_EQ(n.verdict, Verdict::zoll);
  }
}

TEST(ZollScan, GridShape) {
  auto c = clairaut_grid(32);
  EXPECT_NEAR(c.front(), 0.02 + 0.96 * 0.5 / 32, 1e-15);
  for (double v : c) EXPECT_TRUE(v > 0.02 && v < 0.98);
  EXPECT_THROW(clairaut_grid(4), InvalidInput);
}

// Projective deformations only reparametrize the zero-energy flow.
TEST(ProjectiveInvariance, SameOrbitPointSets) {
  std::mt19937_64 rng(56);
  OrbitOptions opt;
  opt.theta_step = 0.05;
  for (int i = 0; i < 5; ++i) {
    double h = uniform(rng, 0.5, 4.0);
    auto f = random_odd_profile(rng);
    double pt = uniform(rng, 0.1, 0.9) / std::sqrt(h);
    DeformedKepler plain(RotSystem{h, f, {constant(0.0), h}});
    DeformedKepler deformed(RotSystem{h, f, {polynomial({0.0, 0.0, 0.25}), h}});
    auto a = integrate_orbit(plain, pt, 1, opt), b = integrate_orbit(deformed, pt, 1, opt);
    EXPECT_LT(hausdorff_distance(orbit_points(a), orbit_points(b)), 1e-6);
    EXPECT_NEAR(a.return_angles().front(), b.return_angles().front(), 1e-8);
    EXPECT_NEAR(a.lengths().front(), b.lengths().front(), 1e-8);
  }
}

TEST(Hausdorff, Basics) {
  std::vector<std::array<double, 2>> a{{0, 0}, {1, 0}}, b{{0, 0}, {1, 0}, {1, 2}};
  EXPECT_DOUBLE_EQ(hausdorff_distance(a, a), 0.0);
  EXPECT_DOUBLE_EQ(hausdorff_distance(a, b), 2.0);
  EXPECT_THROW(hausdorff_distance(a, {}), InvalidInput);
}
