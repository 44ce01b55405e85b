#include <gtest/gtest.h>

#include <random>

#include "gleamlab/error.hpp"
#include "gleamlab/exactalg.hpp"
#include "gleamlab/io.hpp"

using namespace gleamlab;

namespace {

LaurentPoly t_poly(std::vector<std::pair<int, Integer>> terms) { return LaurentPoly::from_terms(Var::t, terms); }

LaurentPoly random_poly(std::mt19937& rng, Var v = Var::t) {
  std::uniform_int_distribution<int> exp(-6, 6), coeff(-5, 5), count(0, 5);
  LaurentPoly p(v);
  for (int i = count(rng); i > 0; --i) p.add_term(exp(rng), coeff(rng));
  return p;
}

// (1 + 3^n - 4^n) / n!, the expansion of e^x + e^{3x} - e^{4x}.
Rational trefoil_series_coefficient(unsigned n) {
  Integer num = 1, three = 1, four = 1, fact = 1;
  for (unsigned i = 1; i <= n; ++i) {
    three *= 3;
    four *= 4;
    fact *= i;
  }
  return make_rational(num + three - four, fact);
}

}  // namespace

TEST(Laurent, ProductOfBinomials) {
  LaurentPoly a = t_poly({{-1, 1}, {1, 1}});
  LaurentPoly b = t_poly({{-1, 1}, {1, -1}});
  EXPECT_EQ((a * b).to_string(), "t^-2 - t^2");
}

TEST(Laurent, ZeroAndFormatting) {
  EXPECT_EQ(LaurentPoly(Var::t).to_string(), "0");
  EXPECT_EQ(t_poly({{3, 2}}).to_string(), "2*t^3");
  EXPECT_EQ(LaurentPoly::from_terms(Var::A, {{-3, -1}}).to_string(), "-A^-3");
  EXPECT_EQ(t_poly({{1, 1}, {3, 1}, {4, -1}}).to_string(), "t + t^3 - t^4");
  EXPECT_TRUE((t_poly({{2, 1}}) - t_poly({{2, 1}})).is_zero());
}

TEST(Laurent, MixedVariablesRejected) {
  LaurentPoly a = LaurentPoly::monomial(Var::A, 1);
  LaurentPoly t = LaurentPoly::monomial(Var::t, 1);
  EXPECT_THROW(a + t, EvalError);
}

TEST(Laurent, ExponentOverflowRejected) {
  LaurentPoly big = LaurentPoly::monomial(Var::t, 1 << 30);
  EXPECT_THROW(big * big, EvalError);
}

TEST(Laurent, ExactDivision) {
  LaurentPoly num = t_poly({{0, 1}, {2, -1}}) * t_poly({{1, 1}, {3, 1}, {4, -1}});
  EXPECT_EQ(num.divided_exactly(t_poly({{0, 1}, {2, -1}})).to_string(), "t + t^3 - t^4");
  EXPECT_THROW(t_poly({{0, 1}}).divided_exactly(t_poly({{0, 1}, {1, 1}})), EvalError);
}

TEST(LaurentProperty, RingAxioms) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    LaurentPoly a = random_poly(rng), b = random_poly(rng), c = random_poly(rng);
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a * LaurentPoly::constant(Var::t, 1), a);
    EXPECT_TRUE((a - a).is_zero());
  }
}

TEST(LaurentProperty, TextRoundTrip) {
  std::mt19937 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    LaurentPoly a = random_poly(rng);
    EXPECT_EQ(parse_laurent(a.to_string(), Var::t), a) << a.to_string();
    LaurentPoly b = random_poly(rng, Var::A);
    EXPECT_EQ(parse_laurent(b.to_string(), Var::A), b) << b.to_string();
  }
}

TEST(ExpSubstitute, TrefoilSeries) {
  LaurentPoly v = t_poly({{1, 1}, {3, 1}, {4, -1}});
  RationalSeries s = exp_substitute(v, 3);
  const auto& c = s.coefficients();
  ASSERT_EQ(c.size(), 4u);
  EXPECT_EQ(c[0], Rational(1));
  EXPECT_EQ(c[1], Rational(0));
  EXPECT_EQ(c[2], Rational(-3));
  EXPECT_EQ(c[3], Rational(-6));
}

TEST(ExpSubstitute, MatchesClosedFormExpansion) {
  LaurentPoly v = t_poly({{1, 1}, {3, 1}, {4, -1}});
  RationalSeries s = exp_substitute(v, 12);
  for (unsigned n = 0; n <= 12; ++n) EXPECT_EQ(s.coefficients()[n], trefoil_series_coefficient(n)) << "n=" << n;
}

TEST(ExpSubstitute, ConstantAndNegativeExponents) {
  RationalSeries one = exp_substitute(LaurentPoly::constant(Var::t, 1), 2);
  EXPECT_EQ(one.coefficients(), (std::vector<Rational>{1, 0, 0}));
  RationalSeries inv = exp_substitute(t_poly({{-1, 1}}), 3);
  EXPECT_EQ(inv.coefficients()[3], Rational(-1, 6));
}

TEST(ExpSubstituteProperty, RingHomomorphism) {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    LaurentPoly p = random_poly(rng), q = random_poly(rng);
    EXPECT_EQ(exp_substitute(p + q, 6), exp_substitute(p, 6) + exp_substitute(q, 6));
    EXPECT_EQ(exp_substitute(p * q, 6), exp_substitute(p, 6) * exp_substitute(q, 6));
    EXPECT_EQ(exp_substitute(p, 6).coefficients()[0], Rational(p.value_at_one()));
  }
}

TEST(MultiPoly, Evaluate) {
  // 1 - 2 x y
  MultiPoly p = MultiPoly::constant(2, 1);
  p -= (MultiPoly::variable(2, 0) * MultiPoly::variable(2, 1)).scaled(2);
  std::vector<Integer> pt{3, -1};
  EXPECT_EQ(p.evaluate(std::span<const Integer>(pt)), Rational(7));
  std::vector<Integer> bad{1};
  EXPECT_THROW(p.evaluate(std::span<const Integer>(bad)), EvalError);
}

TEST(MultiPoly, BinomialBasis) {
  MultiPoly c = MultiPoly::binomial_basis(1, 0, 2);  // x(x-1)/2
  for (long x = -4; x <= 6; ++x) {
    std::vector<long> pt{x};
    EXPECT_EQ(c.evaluate(std::span<const long>(pt)), make_rational(x * (x - 1), 2));
  }
  EXPECT_EQ(c.total_degree(), 2);
}

TEST(Binomial, Values) {
  EXPECT_EQ(binomial(5, 2), Integer(10));
  EXPECT_EQ(binomial(-3, 2), Integer(6));
  EXPECT_EQ(binomial(4, 0), Integer(1));
  EXPECT_EQ(binomial(2, 3), Integer(0));
}
