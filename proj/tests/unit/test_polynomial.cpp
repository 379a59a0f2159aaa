#include <cstdint>
#include <vector>

#include <gtest/gtest.h>

#include "diophnet/error.hpp"
#include "diophnet/polynomial.hpp"

using namespace diophnet;

namespace {
WideInt ev(const DiophantinePolynomial& p, std::vector<std::int64_t> x) { return poly_eval(p, x); }
}  // namespace

TEST(PolyEval, Examples) {
  EXPECT_TRUE(ev(DiophantinePolynomial::parse("x1 + x2 - 3"), {1, 2}) == 0);
  const auto pyth = DiophantinePolynomial::parse("x1^2 + x2^2 - x3^2");
  EXPECT_TRUE(ev(pyth, {3, 4, 5}) == 0);
  EXPECT_TRUE(ev(pyth, {1, 1, 1}) == 1);
  EXPECT_EQ(pyth.n_vars(), 3u);
}

TEST(PolyEval, ArityMismatch) {
  const auto p = DiophantinePolynomial::parse("x1 + x2");
  EXPECT_THROW(ev(p, {1}), ShapeError);
  EXPECT_THROW(ev(p, {1, 2, 3}), ShapeError);
}

TEST(PolyEval, WiderThanInt64) {
  const auto p = DiophantinePolynomial::parse("x1^3");
  EXPECT_EQ(to_string(ev(p, {3000000})), "27000000000000000000");
  EXPECT_EQ(to_string(ev(p, {-3000000})), "-27000000000000000000");
}

TEST(PolyEval, OverflowIsAnError) {
  const auto p = DiophantinePolynomial::parse("x1^5");
  EXPECT_THROW(ev(p, {std::int64_t{1} << 30}), ArithmeticError);
  const auto q = DiophantinePolynomial::parse("9223372036854775807 x1^2");
  EXPECT_NO_THROW(ev(q, {std::int64_t{1} << 32}));  // (2^63 - 1) 2^64 still fits
  EXPECT_THROW(ev(q, {std::int64_t{1} << 33}), ArithmeticError);
}

TEST(Parse, GrammarVariants) {
  const auto a = DiophantinePolynomial::parse("3*x1^2*x2 - x2 + 7");
  const auto b = DiophantinePolynomial::parse(" 7 -x2+3 x1^2 x2");
  EXPECT_EQ(a, b);
  EXPECT_TRUE(ev(a, {2, 5}) == 3 * 4 * 5 - 5 + 7);
  EXPECT_EQ(DiophantinePolynomial::parse("x1 + x1 - 2 x1").terms().size(), 0u);
  EXPECT_EQ(DiophantinePolynomial::parse("x2", 4).n_vars(), 4u);
}

TEST(Parse, CanonicalRoundTrip) {
  for (const char* s : {"x1^2 + x2^2 - x3^2", "-4 x1 x2^3 + 2", "x3 - x1", "0", "-x1^2 x2 + 5 x2 - 12"}) {
    const auto p = DiophantinePolynomial::parse(s);
    EXPECT_EQ(DiophantinePolynomial::parse(p.to_string(), p.n_vars()), p) << s << " -> " << p.to_string();
  }
}

TEST(Parse, Errors) {
  for (const char* s : {"", "x0 + 1", "x1 +", "2 ** x1", "x1^", "x1^-2", "y1", "x1 x", "1.5 x1", "(x1)"}) {
    EXPECT_THROW(DiophantinePolynomial::parse(s), ParseError) << s;
  }
  EXPECT_THROW(DiophantinePolynomial::parse("x3", 2), ParseError);
}

TEST(EvalReal, AgreesOnIntegers) {
  const auto p = DiophantinePolynomial::parse("2 x1^3 - x1 x2 + 5");
  for (std::int64_t a = -3; a <= 3; ++a)
    for (std::int64_t b = -3; b <= 3; ++b) {
      const std::vector<double> xr{double(a), double(b)};
      EXPECT_EQ(p.eval_real(xr), static_cast<double>(ev(p, {a, b})));
    }
}

TEST(GradientReal, MatchesFiniteDifference) {
  const auto p = DiophantinePolynomial::parse("2 x1^3 - x1 x2 + 5 x2^2 - 1");
  const std::vector<double> x{0.7, -1.3};
  const auto g = p.gradient_real(x);
  EXPECT_NEAR(g[0], 6 * 0.49 + 1.3, 1e-12);
  EXPECT_NEAR(g[1], -0.7 - 13.0, 1e-12);
}
