#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "generators.hpp"
#include "zoll/geometry.hpp"

using namespace zoll;
using namespace zoll::testing;

namespace {
const DeformationProfile kKepler{};
}

TEST(Charts, RoundTrip) {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 100; ++i) {
    double h = uniform(rng, 0.1, 10.0);
    double rho = uniform(rng, 0.0, 2.0 / h);
    EXPECT_NEAR(r_to_rho(h, rho_to_r(h, rho)), rho, 1e-12 * std::max(1.0, rho) + 1e-13 / h);
  }
  EXPECT_NEAR(rho_to_r(2.0, 0.5), M_PI / 2, 1e-15);
  EXPECT_THROW(rho_to_r(2.0, 1.5), DomainError);
  EXPECT_THROW(rho_to_r(-1.0, 0.5), InvalidInput);
  EXPECT_THROW(r_to_rho(1.0, 4.0), DomainError);
}

TEST(JmMetric, KeplerExamples) {
  auto a = jm_metric(2.0, kKepler, 0.5);
  EXPECT_NEAR(a.g_rr, 2.0, 1e-15);
  EXPECT_NEAR(a.g_thth, 0.5, 1e-15);
  auto b = jm_metric(1.0, kKepler, 1.0);
  EXPECT_NEAR(b.g_rr, 1.0, 1e-15);
  EXPECT_NEAR(b.g_thth, 1.0, 1e-15);
}

TEST(JmMetric, DegeneratesAtHillBoundary) {
  for (double eps : {1e-2, 1e-4, 1e-6}) {
    double h = 2.0;
    auto m = jm_metric(h, kKepler, 2.0 / h - eps);
    EXPECT_NEAR(m.g_thth, h * eps * (2.0 / h - eps), 1e-12);
  }
  EXPECT_THROW(jm_metric(2.0, kKepler, 1.0), DomainError);
  EXPECT_THROW(jm_metric(2.0, kKepler, 0.0), DomainError);
}

// The normal form pulled back through cos r = 1 - h rho reproduces the JM metric.
TEST(NormalForm, PullbackMatchesJmMetric) {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 100; ++i) {
    auto f = random_odd_profile(rng);
    double h = uniform(rng, 0.3, 6.0);
    double rho = uniform(rng, 0.01, 1.99) / h;
    auto jm = jm_metric(h, f, rho);
    auto nf = pullback_to_rho(to_besse(f, h), h, rho);
    EXPECT_NEAR(nf.g_rr / jm.g_rr, 1.0, 1e-12);
    EXPECT_NEAR(nf.g_thth / jm.g_thth, 1.0, 1e-12);
  }
}

TEST(NormalForm, KeplerIsRoundSphere) {
  auto b = to_besse(kKepler, 4.0);
  for (double r : {0.3, 1.0, 2.5}) {
    auto m = normal_form_metric(b, r);
    EXPECT_NEAR(m.g_rr, 0.25 * std::pow(1 + std::cos(r), 2), 1e-15);
    EXPECT_NEAR(m.g_thth, 0.25 * std::pow(std::sin(r), 2), 1e-15);
  }
}

TEST(ToBesse, FlagsButKeepsNonVanishingEndpoints) {
  auto b = to_besse({scale(-1.0, identity()), {-1.0, 1.0}}, 1.0);
  EXPECT_FALSE(b.endpoints_zero);
  EXPECT_TRUE(b.odd);
  EXPECT_NEAR(value(b.b, 0.37), 0.0, 1e-16);
}

TEST(ToBesse, RejectsInadmissible) {
  EXPECT_THROW(to_besse({scale(-3.0, identity()), {-1.0, 1.0}}, 1.0), DomainError);
  EXPECT_THROW(to_besse(kKepler, 0.0), InvalidInput);
}

TEST(MetricCoeffB, JetMatchesFiniteDifferences) {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 30; ++i) {
    auto f = random_odd_profile(rng);
    double h = uniform(rng, 0.5, 3.0);
    double rho = uniform(rng, 0.1, 1.9) / h;
    Jet B = metric_coeff_B(h, f, rho, 1);
    double d = 1e-6;
    double fd = (metric_coeff_B(h, f, rho + d, 0).value() - metric_coeff_B(h, f, rho - d, 0).value()) / (2 * d);
    EXPECT_NEAR(B[1], fd, 1e-6);
  }
}

TEST(Lagrangian, Example) {
  RotSystem sys{2.0, kKepler, {polynomial({0.0, 0.0, 1.0}), 2.0}};
  auto t = lagrangian_terms(sys, 0.5);
  EXPECT_NEAR(t.potential, std::exp(0.25) * (2.0 - 1.0), 1e-15);
  EXPECT_NEAR(t.kinetic_rr, std::exp(-0.25), 1e-15);
  EXPECT_NEAR(t.kinetic_thth, 0.25 * std::exp(-0.25), 1e-15);
  EXPECT_EQ(lagrangian_terms(sys, 1.0).potential, 0.0);
  EXPECT_THROW(lagrangian_terms(sys, 0.0), DomainError);
  EXPECT_THROW(lagrangian_terms(sys, 1.1), DomainError);
}

// The JM metric 2(h_eff - V) g of the projectively deformed system is
// independent of phi: e^phi (1/rho - h/2) * e^-phi g.
TEST(Lagrangian, ProjectiveFactorCancelsInJmMetric) {
  std::mt19937_64 rng(44);
  for (int i = 0; i < 50; ++i) {
    auto f = random_odd_profile(rng);
    double h = uniform(rng, 0.5, 4.0);
    double rho = uniform(rng, 0.05, 1.95) / h;
    RotSystem plain{h, f, {constant(0.0), h}};
    RotSystem deformed{h, f, {polynomial({0.0, 0.0, uniform(rng, -1, 1)}), h}};
    auto a = lagrangian_terms(plain, rho), b = lagrangian_terms(deformed, rho);
    EXPECT_NEAR(a.potential * a.kinetic_rr, b.potential * b.kinetic_rr, 1e-12 * std::abs(a.potential * a.kinetic_rr));
    EXPECT_NEAR(a.potential * a.kinetic_thth, b.potential * b.kinetic_thth,
                1e-12 * std::abs(a.potential * a.kinetic_thth));
    auto jm = jm_metric(h, f, rho);
    EXPECT_NEAR(2 * a.potential * a.kinetic_rr, jm.g_rr, 1e-12 * jm.g_rr);
  }
}
