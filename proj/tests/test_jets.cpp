#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "generators.hpp"
#include "zoll/expr.hpp"
#include "zoll/expr_json.hpp"
#include "zoll/profiles.hpp"

using namespace zoll;
using namespace zoll::testing;

TEST(EvalJet, IdentityDerivatives) {
  Jet j = eval_jet(identity(), 0.3, 2);
  EXPECT_DOUBLE_EQ(j[0], 0.3);
  EXPECT_DOUBLE_EQ(j[1], 1.0);
  EXPECT_DOUBLE_EQ(j[2], 0.0);
}

TEST(EvalJet, QuinticAtOne) {
  Jet j = eval_jet(polynomial({0.0, 1.0, 0.0, -2.0, 0.0, 1.0}), 1.0, 3);
  EXPECT_NEAR(j[0], 0.0, 1e-14);
  EXPECT_NEAR(j[1], 0.0, 1e-13);
  EXPECT_NEAR(j[2], 8.0, 1e-12);
  EXPECT_NEAR(j[3], 48.0, 1e-12);
}

TEST(EvalJet, BumpIsFlatAtItsEnds) {
  for (double x : {-1.0, 1.0}) {
    Jet j = eval_jet(make_bump(-1.0, 1.0), x, kMaxJetOrder);
    for (int k = 0; k <= kMaxJetOrder; ++k) EXPECT_EQ(j[k], 0.0) << "x=" << x << " k=" << k;
  }
  EXPECT_EQ(eval_jet(make_bump(-1.0, 1.0), 1.0, 5)[5], 0.0);
}

TEST(EvalJet, BumpValues) {
  EXPECT_NEAR(value(make_bump(-1.0, 1.0), 0.0), std::exp(-1.0), 1e-15);
  EXPECT_EQ(value(make_bump(0.0, 0.25), 0.5), 0.0);
}

TEST(EvalJet, RejectsOrdersAboveMaximum) {
  EXPECT_THROW(eval_jet(identity(), 0.0, kMaxJetOrder + 1), DomainError);
  EXPECT_THROW(eval_jet(identity(), 0.0, -1), DomainError);
}

TEST(EvalJet, DomainViolation) {
  Expr f = identity().with_domain({0.0, 1.0});
  EXPECT_THROW(eval_jet(f, 1.5, 1), DomainError);
}

TEST(EvalJet, ReciprocalOfVanishingFunction) {
  Expr r = reciprocal(identity(), {-1.0, 1.0});
  EXPECT_THROW(eval_jet(r, 0.0, 1), DomainError);
  EXPECT_THROW(eval_jet(r, 2.0, 1), DomainError);  // outside the certified interval
  EXPECT_NEAR(eval_jet(r, 0.5, 2)[2], 2.0 / 0.125, 1e-12);
}

TEST(MakeBump, RejectsEmptySupport) {
  EXPECT_THROW(make_bump(1.0, 1.0), InvalidInput);
  EXPECT_THROW(make_bump(2.0, 1.0), InvalidInput);
}

TEST(Antisymmetrize, EvenInputVanishes) {
  Expr g = antisymmetrize(polynomial({0.0, 0.0, 1.0}), 0.0);
  for (double x : {-0.7, 0.0, 0.3, 0.9}) EXPECT_EQ(value(g, x), 0.0);
}

TEST(Antisymmetrize, OddInputUnchanged) {
  Expr c = polynomial({0.0, 0.0, 0.0, 1.0});
  Expr g = antisymmetrize(c, 0.0);
  for (double x : {-0.7, 0.1, 0.3, 0.9}) EXPECT_NEAR(value(g, x), x * x * x, 1e-15);
}

TEST(Antisymmetrize, BumpPairValue) {
  Expr b = make_bump(0.1, 0.4);
  Expr g = antisymmetrize(b, 0.0);
  EXPECT_NEAR(value(g, 0.25), 0.5 * value(b, 0.25), 1e-16);
  EXPECT_NEAR(value(g, -0.25), -0.5 * value(b, 0.25), 1e-16);
}

TEST(Antisymmetrize, AsymmetricDomainRejected) {
  EXPECT_THROW(antisymmetrize(identity().with_domain({0.0, 1.0}), 0.0), InvalidInput);
  EXPECT_NO_THROW(antisymmetrize(identity().with_domain({0.0, 1.0}), 0.5));
}

TEST(FdValidate, Examples) {
  EXPECT_LT(fd_validate(identity(), 0.5, 1, 1e-4), 1e-8);
  EXPECT_LT(fd_validate(polynomial({0, 0, 0, 0, 0, 1.0}), 1.0, 2, 1e-4), 1e-5);
  EXPECT_LT(fd_validate(make_bump(-1.0, 1.0), 0.0, 1, 1e-4), 1e-6);
}

// ---- properties -------------------------------------------------------------

TEST(JetProperties, Linearity) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    Expr f = poly(random_coeffs(rng, 6)), g = exponential(poly(random_coeffs(rng, 3, 0.5)));
    double a = uniform(rng, -3, 3), b = uniform(rng, -3, 3), x = uniform(rng, -1, 1);
    Jet lhs = eval_jet(scale(a, f) + scale(b, g), x, 8);
    Jet jf = eval_jet(f, x, 8), jg = eval_jet(g, x, 8);
    for (int k = 0; k <= 8; ++k) {
      double rhs = a * jf[k] + b * jg[k];
      EXPECT_NEAR(lhs[k], rhs, 1e-9 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST(JetProperties, LeibnizRule) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    Expr f = poly(random_coeffs(rng, 5)), g = make_bump(-1.0, 1.0);
    double x = uniform(rng, -0.9, 0.9);
    int K = 7;
    Jet p = eval_jet(f * g, x, K), jf = eval_jet(f, x, K), jg = eval_jet(g, x, K);
    for (int k = 0; k <= K; ++k) {
      double s = 0, binom = 1;
      for (int i = 0; i <= k; ++i) {
        s += binom * jf[i] * jg[k - i];
        binom = binom * (k - i) / (i + 1);
      }
      EXPECT_NEAR(p[k], s, 1e-9 * std::max(1.0, std::abs(s)));
    }
  }
}

TEST(JetProperties, CompositionMatchesSymbolicExpansion) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    auto p = random_coeffs(rng, uniform_int(rng, 1, 3));
    auto q = random_coeffs(rng, uniform_int(rng, 1, 2));
    auto pq = compose_coeffs(p, q);
    double x = uniform(rng, -1, 1);
    int K = 6;
    Jet j = eval_jet(compose(poly(p), poly(q)), x, K);
    for (int k = 0; k <= K; ++k) EXPECT_NEAR(j[k], poly_derivative(pq, k, x), 1e-10);
  }
}

TEST(JetProperties, FiniteDifferencesOnEveryPrimitive) {
  std::mt19937_64 rng(14);
  std::vector<std::pair<const char*, Expr>> prims = {
      {"constant", constant(0.7)},
      {"identity", identity()},
      {"polynomial", polynomial({0.3, -1.0, 0.5, 0.25})},
      {"bump", make_bump(-1.0, 1.0)},
      {"sum", identity() + make_bump(-1.0, 1.0)},
      {"product", polynomial({1.0, 2.0}) * make_bump(-1.0, 1.0)},
      {"scale", scale(-2.5, make_bump(-1.0, 1.0))},
      {"compose", compose(make_bump(-1.0, 1.0), polynomial({0.0, 0.5, 0.3}))},
      {"reciprocal", reciprocal(polynomial({2.0, 0.0, 1.0}), {-1.0, 1.0})},
      {"exponential", exponential(polynomial({0.0, 0.4, -0.3}))},
  };
  for (const auto& [name, f] : prims) {
    for (int i = 0; i < 100; ++i) {
      double x = uniform(rng, -0.9, 0.9);
      for (int k = 1; k <= 3; ++k) EXPECT_LT(fd_validate(f, x, k, 1e-4), 1e-5) << name << " x=" << x << " k=" << k;
    }
  }
}

// ---- JSON schema ------------------------------------------------------------

TEST(ExprJson, RoundTripKeepsRationalParameters) {
  Expr f = scale(Param(0.25, "1/4"), compose(make_bump(Param(0.0, "0"), Param(1.0 / 3, "1/3")),
                                             affine(Param(-1.0, "-1"), Param(-0.5, "-1/2"))));
  nlohmann::json j = expr_to_json(f);
  Expr g = expr_from_json(j);
  EXPECT_EQ(expr_to_json(g).dump(), j.dump());
  for (double x : {-0.8, -0.6, -0.5, 0.1}) EXPECT_EQ(value(f, x), value(g, x));
  EXPECT_NE(j.dump().find("1/3"), std::string::npos);
}

TEST(ExprJson, RoundTripsEveryNodeKind) {
  Expr f = sum({constant(1.5), identity(), polynomial({1.0, 2.0}), make_bump(-1.0, 1.0),
                product({identity(), identity()}), scale(2.0, identity()),
                compose(identity(), identity()), reciprocal(polynomial({2.0, 1.0}), {-1.0, 1.0}),
                exponential(identity())})
                .with_domain({-1.0, 1.0});
  Expr g = expr_from_json(nlohmann::json::parse(expr_to_json(f).dump()));
  for (double x : {-0.9, -0.2, 0.0, 0.5}) EXPECT_DOUBLE_EQ(value(f, x), value(g, x));
  EXPECT_THROW(eval_jet(g, 1.5, 0), DomainError);
}

TEST(ExprJson, MalformedInputs) {
  EXPECT_THROW(expr_from_json(nlohmann::json::parse(R"({"op":"nope"})")), InvalidInput);
  EXPECT_THROW(expr_from_json(nlohmann::json::parse(R"({"op":"bump","a":1,"b":0})")), InvalidInput);
  EXPECT_THROW(expr_from_json(nlohmann::json::parse(R"({"op":"recip","args":[{"op":"id"}]})")), InvalidInput);
  EXPECT_THROW(expr_from_json(nlohmann::json::parse(R"([1,2])")), InvalidInput);
}
