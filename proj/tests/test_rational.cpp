#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "generators.hpp"
#include "zoll/rational.hpp"

using namespace zoll;

TEST(ParseRational, Forms) {
  EXPECT_EQ(*parse_rational("15"), BigRational(15));
  EXPECT_EQ(*parse_rational("-3/6"), BigRational(-1, 2));
  EXPECT_EQ(*parse_rational(" 0.125 "), BigRational(1, 8));
  EXPECT_EQ(*parse_rational("-.5"), BigRational(-1, 2));
  EXPECT_FALSE(parse_rational("1/0"));
  EXPECT_FALSE(parse_rational("abc"));
  EXPECT_FALSE(parse_rational(""));
  EXPECT_FALSE(parse_rational("1.2.3"));
}

TEST(ParseRational, ToStringRoundTrip) {
  for (const char* s : {"1/4", "-7/3", "12", "0"}) EXPECT_EQ(to_string(*parse_rational(s)), s);
}

TEST(RationalGcd, Examples) {
  EXPECT_EQ(rational_gcd({BigRational(1, 4), BigRational(1, 2)}), BigRational(1, 4));
  EXPECT_EQ(rational_gcd({BigRational(1, 3)}), BigRational(1, 3));
  EXPECT_EQ(rational_gcd({BigRational(2, 3), BigRational(1, 2)}), BigRational(1, 6));
  EXPECT_THROW(rational_gcd({BigRational(0)}), InvalidInput);
  EXPECT_THROW(rational_gcd({BigRational(-1, 2)}), InvalidInput);
  EXPECT_THROW(rational_gcd({}), InvalidInput);
}

// Property: gcd divides every input and is an integer combination of them,
// checked by an independent Euclid on a common denominator.
TEST(RationalGcd, DividesInputsAndIsMinimal) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<BigRational> v;
    int n = zoll::testing::uniform_int(rng, 1, 4);
    long long common = 1;
    for (int i = 0; i < n; ++i) {
      long long p = zoll::testing::uniform_int(rng, 1, 60), q = zoll::testing::uniform_int(rng, 1, 24);
      v.emplace_back(p, q);
    }
    for (int q = 1; q <= 24; ++q) common = std::lcm(common, (long long)q);
    BigRational g = rational_gcd(v);
    long long euclid = 0;
    for (const auto& x : v) {
      BigRational ratio = x / g;
      EXPECT_EQ(boost::multiprecision::denominator(ratio), 1);
      BigRational scaled = x * common;
      euclid = std::gcd(euclid, boost::multiprecision::numerator(scaled).convert_to<long long>());
    }
    EXPECT_EQ(g, BigRational(euclid, common));
  }
}

TEST(ExactFromDouble, IsExact) {
  EXPECT_EQ(exact_from_double(0.5), BigRational(1, 2));
  EXPECT_EQ(exact_from_double(-3.0), BigRational(-3));
  EXPECT_EQ(to_double(exact_from_double(0.1)), 0.1);
  EXPECT_NE(exact_from_double(0.1), BigRational(1, 10));
}

TEST(Convergents, OfGoldenRatioAreFibonacci) {
  auto cv = convergents((1 + std::sqrt(5.0)) / 2, 100);
  std::vector<std::int64_t> q;
  for (const auto& c : cv) q.push_back(c.q);
  std::vector<std::int64_t> fib{1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89};
  ASSERT_GE(q.size(), 5u);
  for (std::size_t i = 0; i < q.size(); ++i) EXPECT_EQ(q[i], fib[i]);
}

TEST(ClassifyRationality, Verdicts) {
  auto r = classify_rationality(0.5 / 0.25);
  EXPECT_EQ(r.kind, Rationality::rational);
  EXPECT_EQ(r.p, 2);
  EXPECT_EQ(r.q, 1);
  auto s = classify_rationality(1.2 / 0.3 * 1.0 / 3.0);  // 4/3 up to rounding
  EXPECT_EQ(s.kind, Rationality::rational);
  EXPECT_EQ(s.q, 3);
  EXPECT_EQ(classify_rationality(std::sqrt(2.0)).kind, Rationality::irrational);
  EXPECT_EQ(classify_rationality(0.35355339059327373 / 0.3).kind, Rationality::irrational);
  EXPECT_EQ(classify_rationality(M_PI).kind, Rationality::ambiguous);  // 355/113 is anomalously good
}

// Property: p/q with q below the bound is reconstructed from its double.
TEST(ClassifyRationality, ReconstructsSmallRationals) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 500; ++trial) {
    std::int64_t q = zoll::testing::uniform_int(rng, 1, 2000);
    std::int64_t p = zoll::testing::uniform_int(rng, 1, 5000);
    auto v = classify_rationality(double(p) / double(q));
    ASSERT_EQ(v.kind, Rationality::rational) << p << "/" << q;
    EXPECT_EQ(BigRational(v.p, v.q), BigRational(p, q));
  }
}

TEST(SnapRational, PicksSimplestWithinTolerance) {
  EXPECT_EQ(snap_rational(1.3000001, 1e-3), BigRational(13, 10));
  EXPECT_EQ(snap_rational(0.3333, 1e-3), BigRational(1, 3));
  EXPECT_EQ(snap_rational(2.0, 0.1), BigRational(2));
  EXPECT_THROW(snap_rational(1.0, 0.0), InvalidInput);
}

TEST(SnapRational, StaysWithinTolerance) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    double x = zoll::testing::uniform(rng, -20, 20);
    double eps = std::pow(10.0, -zoll::testing::uniform(rng, 1, 9));
    BigRational r = snap_rational(x, eps);
    EXPECT_LE(std::abs(to_double(r) - x), eps * (1 + 1e-12));
  }
}
