#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "diophnet/encoding.hpp"
#include "diophnet/error.hpp"
#include "oracles.hpp"

using namespace diophnet;

namespace {
std::vector<double> random_with_ties(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  std::uniform_int_distribution<int> half(-40, 40);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i % 4 == 0 ? half(rng) + 0.5 : (i % 4 == 1 ? std::round(u(rng)) : u(rng));
  return v;
}
}  // namespace

TEST(Encode, Examples) {
  EXPECT_EQ(encode(std::vector<double>{0.25}, EncodingMap{100}), (std::vector<std::int64_t>{25}));
  EXPECT_EQ(encode(std::vector<double>{3.45}, EncodingMap{1}), (std::vector<std::int64_t>{3}));
  EXPECT_EQ(encode(std::vector<double>{-1.296, 0.697}, EncodingMap{1}), (std::vector<std::int64_t>{-1, 1}));
}

TEST(Decode, Examples) {
  EXPECT_EQ(decode(std::vector<std::int64_t>{25}, EncodingMap{100}), (std::vector<double>{0.25}));
  EXPECT_EQ(decode(std::vector<std::int64_t>{3}, EncodingMap{1}), (std::vector<double>{3.0}));
  const auto q = decode(encode(std::vector<double>{0.24}, EncodingMap{10}), EncodingMap{10});
  EXPECT_DOUBLE_EQ(q[0], 0.2);
  EXPECT_LE(std::abs(q[0] - 0.24), 1.0 / 20 + 1e-15);
}

TEST(Encode, BadScaleAndRange) {
  EXPECT_THROW(encode(std::vector<double>{1.0}, EncodingMap{0}), DomainError);
  EXPECT_THROW(encode(std::vector<double>{1.0}, EncodingMap{-2}), DomainError);
  EXPECT_THROW(encode(std::vector<double>{1e19}, EncodingMap{1}), ArithmeticError);
}

TEST(Project, Examples) {
  EXPECT_EQ(project_integers(std::vector<double>{2.27, 1.0, 3.5, 5.288, -3.5, -0.5, 0.5}),
            (std::vector<double>{2, 1, 3, 5, -3, 0, 0}));
  EXPECT_EQ(project_integers(Matrix{{2.499, -1.296}, {0.697, 1.598}}), (Matrix{{2, -1}, {1, 2}}));
}

TEST(Project, HalfUpIsTheNegativeControl) {
  EXPECT_EQ(round_to_integer(3.5, Rounding::half_up), 4.0);
  EXPECT_EQ(round_to_integer(-3.5, Rounding::half_up), -3.0);
  EXPECT_EQ(round_to_integer(3.5, Rounding::half_toward_zero), 3.0);
}

TEST(Project, Properties) {
  std::mt19937_64 rng(99);
  const auto theta = random_with_ties(rng, 10000);
  const auto p = project_integers(theta);
  EXPECT_EQ(project_integers(p), p);
  EXPECT_TRUE(all_integral(p));
  for (std::size_t i = 0; i < theta.size(); ++i) {
    EXPECT_LE(std::abs(theta[i] - p[i]), 0.5);
    if (theta[i] == std::round(theta[i])) EXPECT_EQ(p[i], theta[i]);
    if (std::abs(theta[i] - std::trunc(theta[i])) == 0.5) EXPECT_EQ(p[i], std::trunc(theta[i]));
  }
}

TEST(Encode, RoundTripAndDeterminism) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3, 3);
  for (double s : {1.0, 10.0, 64.0, 1000.0}) {
    std::vector<double> theta(500);
    for (auto& t : theta) t = u(rng);
    const EncodingMap map{s};
    const auto e = encode(theta, map);
    EXPECT_EQ(encode(theta, map), e);
    const auto d = decode(e, map);
    for (std::size_t i = 0; i < theta.size(); ++i) EXPECT_LE(std::abs(d[i] - theta[i]), 1 / (2 * s) + 1e-12);
  }
}

TEST(DiophantineLoss, Examples) {
  const auto p = DiophantinePolynomial::parse("x1 + x2 - 3");
  EXPECT_EQ(diophantine_loss(p, std::vector<double>{1, 1}, EncodingMap{1}), 1.0);
  EXPECT_EQ(diophantine_loss(p, std::vector<double>{1.5, 1.5}, EncodingMap{1}), 0.0);
  EXPECT_EQ(diophantine_loss(p, std::vector<double>{1, 2}, EncodingMap{1}), 0.0);
  EXPECT_THROW(diophantine_loss(p, std::vector<double>{1, 2, 3}, EncodingMap{1}), ShapeError);
}

TEST(DiophantineLoss, NonNegativeAndZeroOnVariety) {
  const auto p = DiophantinePolynomial::parse("x1^2 + x2^2 - x3^2");
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int t = 0; t < 1000; ++t) {
    const std::vector<double> th{u(rng), u(rng), u(rng)};
    EXPECT_GE(diophantine_loss(p, th, EncodingMap{3}), 0.0);
  }
  // (3,4,5)/s lies on the variety under scaling s
  EXPECT_EQ(diophantine_loss(p, std::vector<double>{0.75, 1.0, 1.25}, EncodingMap{4}), 0.0);
}

TEST(Constraint, SubsetAndGradient) {
  const Constraint c{DiophantinePolynomial::parse("x1 x2 - 6"), EncodingMap{2}, {1, 3}};
  const std::vector<double> theta{9, 1.0, 9, 1.5};
  // P(2*1.0, 2*1.5) = 6 - 6 = 0
  EXPECT_EQ(diophantine_loss(c, theta), 0.0);
  const std::vector<double> t2{9, 1.0, 9, 2.0};  // P(2,4) = 2
  EXPECT_EQ(diophantine_loss(c, t2), 4.0);
  const auto g = diophantine_loss_gradient(c, t2);
  const auto fd = oracle::fd_gradient([&](const std::vector<double>& t) { return diophantine_loss(c, t); }, t2, 1e-6);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(g[i], fd[i], 1e-6);
  EXPECT_EQ(g[0], 0.0);
  EXPECT_EQ(constraint_residual(c, std::vector<double>{0, 1.2, 0, 1.4}), 0.0);  // encodes to (2, 3)
  EXPECT_EQ(constraint_residual(c, std::vector<double>{0, 1.2, 0, 1.9}), 4.0);  // (2, 4): P = 2
}

TEST(RationalApprox, Examples) {
  EXPECT_EQ(rational_approx(0.5, 10), (Rational{1, 2}));
  EXPECT_EQ(rational_approx(std::numbers::pi, 120), (Rational{355, 113}));
  EXPECT_LT(std::abs(std::numbers::pi - 355.0 / 113), 1.0 / (113.0 * 113.0));
  EXPECT_EQ(rational_approx(std::numbers::sqrt2, 12), (Rational{17, 12}));
  EXPECT_EQ(rational_approx(-2.75, 100), (Rational{-11, 4}));
  EXPECT_EQ(rational_approx(3.0, 5), (Rational{3, 1}));
  EXPECT_THROW(rational_approx(1.0, 0), DomainError);
}

TEST(Convergents, ClassicalConstants) {
  const auto pi = convergents(std::numbers::pi, 120);
  ASSERT_EQ(pi.size(), 4u);
  EXPECT_EQ(pi[1], (Rational{22, 7}));
  EXPECT_EQ(pi[2], (Rational{333, 106}));
  const auto r2 = convergents(std::numbers::sqrt2, 12);
  ASSERT_EQ(r2.size(), 4u);
  EXPECT_EQ(r2[0], (Rational{1, 1}));
  EXPECT_EQ(r2[1], (Rational{3, 2}));
  EXPECT_EQ(r2[2], (Rational{7, 5}));
  EXPECT_EQ(r2[3], (Rational{17, 12}));
}

TEST(Convergents, MatchOracleAndDirichlet) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1000, 1000);
  std::uniform_int_distribution<std::int64_t> den(1, 1000000);
  for (int t = 0; t < 1000; ++t) {
    const double theta = u(rng);
    const std::int64_t max_den = den(rng);
    const auto got = convergents(theta, max_den);
    const auto want = oracle::cf_convergents(theta, max_den);
    ASSERT_EQ(got.size(), want.size()) << theta;
    for (std::size_t i = 0; i < got.size(); ++i) {
      ASSERT_EQ(got[i].p, want[i].p);
      ASSERT_EQ(got[i].q, want[i].q);
      if (!oracle::equals_exactly(theta, got[i].p, got[i].q))
        ASSERT_TRUE(oracle::within_dirichlet(theta, got[i].p, got[i].q)) << theta << " " << got[i].p << "/" << got[i].q;
    }
  }
}
