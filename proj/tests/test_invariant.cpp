#include <gtest/gtest.h>

#include <random>

#include "corpus.hpp"
#include "gleamlab/invariant.hpp"
#include "oracles/goeritz.hpp"

using namespace gleamlab;
using namespace gleamlab::testing;

namespace {

LaurentPoly substitute_inverse(const LaurentPoly& p) {
  LaurentPoly out(p.var());
  for (const auto& [e, c] : p.terms()) out.add_term(-e, c);
  return out;
}

// V(T(2,n)) = t^{(n-1)/2} (1 + t^2 + sum_{i=3..n} (-1)^i t^i), n odd >= 3.
LaurentPoly jones_t2_formula(int n) {
  LaurentPoly v(Var::t);
  v.add_term(0, 1);
  v.add_term(2, 1);
  for (int i = 3; i <= n; ++i) v.add_term(i, i % 2 ? -1 : 1);
  return v.shifted((n - 1) / 2);
}

}  // namespace

TEST(Bracket, Kinks) {
  EXPECT_EQ(kauffman_bracket(validate({{1, 1, 2, 2}})).to_string(), "-A^3");
  EXPECT_EQ(kauffman_bracket(validate({{1, 2, 2, 1}})).to_string(), "-A^-3");
  EXPECT_EQ(kauffman_bracket(KnotDiagram::unknot()).to_string(), "1");
}

TEST(Bracket, CrossingLimit) {
  BracketOptions opt;
  opt.crossing_limit = 4;
  EXPECT_THROW(kauffman_bracket(torus_diagram(2, 5), opt), EvalError);
  EXPECT_THROW(state_sum_bracket(torus_diagram(2, 15)), EvalError);
}

TEST(Bracket, AgreesWithStateSumOnCorpus) {
  for (const auto& [name, d] : small_corpus()) {
    ASSERT_LE(d.crossing_count(), 12u) << name;
    EXPECT_EQ(kauffman_bracket(d), state_sum_bracket(d)) << name;
  }
}

TEST(BracketProperty, AgreesWithStateSumOnRandomBraids) {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    KnotDiagram d = braid_closure(random_knot_braid(rng, 2 + trial % 4, 1 + trial % 12));
    EXPECT_EQ(kauffman_bracket(d), state_sum_bracket(d)) << d.canonical_key();
  }
}

TEST(Jones, Examples) {
  EXPECT_EQ(jones(trefoil()).to_string(), "t + t^3 - t^4");
  EXPECT_EQ(jones(figure_eight()).to_string(), "t^-2 - t^-1 + 1 - t + t^2");
  EXPECT_EQ(jones(torus_diagram(3, 4)).to_string(), "t^3 + t^5 - t^8");
  EXPECT_EQ(jones(KnotDiagram::unknot()).to_string(), "1");
}

TEST(Jones, OddExponentBracketRejected) {
  // A bracket with an A-exponent not divisible by 4 after normalization.
  EXPECT_THROW(bracket_to_jones(LaurentPoly::monomial(Var::A, 2), 0), EvalError);
}

TEST(Jones, TorusClosedForm) {
  for (auto [p, q] : std::vector<std::pair<int, int>>{{2, 3}, {2, 5}, {2, 7}, {3, 4}, {3, 5}, {4, 5}}) {
    EXPECT_EQ(jones(torus_diagram(p, q)), jones_torus_closed_form(p, q)) << p << "," << q;
  }
  for (int n = 3; n <= 13; n += 2) EXPECT_EQ(jones_torus_closed_form(2, n), jones_t2_formula(n)) << n;
  EXPECT_THROW(jones_torus_closed_form(2, 4), EvalError);
}

TEST(Jones, MirrorRule) {
  for (const auto& [name, d] : small_corpus()) EXPECT_EQ(jones(mirror(d)), substitute_inverse(jones(d))) << name;
}

TEST(Jones, ReidemeisterInvariance) {
  const LaurentPoly v = jones(trefoil());
  EXPECT_EQ(jones(braid_closure({3, {1, 1, 1, 2}})), v);
  EXPECT_EQ(jones(braid_closure({3, {1, 1, 1, -2}})), v);
  EXPECT_EQ(jones(braid_closure({3, {1, 1, 1, 2, 1, -1}})), v);
  EXPECT_EQ(jones(braid_closure({3, {1, 2, 1, 2}})), jones(braid_closure({3, {2, 1, 2, 2}})));
}

TEST(Jones, ValueAtOneIsOne) {
  for (const auto& [name, d] : small_corpus()) EXPECT_EQ(jones(d).value_at_one(), Integer(1)) << name;
}

TEST(Vassiliev, TrefoilValues) {
  auto u = vassiliev_u(trefoil(), 3);
  EXPECT_EQ(u, (std::vector<Rational>{1, 0, -3, -6}));
  auto m = vassiliev_u(negative_trefoil(), 3);
  EXPECT_EQ(m, (std::vector<Rational>{1, 0, -3, 6}));
}

TEST(Vassiliev, UnknotAndFigureEight) {
  EXPECT_EQ(vassiliev_u(KnotDiagram::unknot(), 4), (std::vector<Rational>{1, 0, 0, 0, 0}));
  auto f = vassiliev_u(figure_eight(), 3);
  EXPECT_EQ(f[2], Rational(3));
  EXPECT_EQ(f[3], Rational(0));
}

TEST(Vassiliev, NormalizationOnCorpus) {
  for (const auto& [name, d] : small_corpus()) {
    auto u = vassiliev_u(d, 1);
    EXPECT_EQ(u[0], Rational(1)) << name;
    EXPECT_EQ(u[1], Rational(0)) << name;
  }
}

TEST(Span, Values) {
  EXPECT_EQ(jones_span(trefoil()), 3);
  EXPECT_EQ(jones_span(figure_eight()), 4);
  EXPECT_EQ(jones_span(KnotDiagram::unknot()), 0);
  EXPECT_EQ(jones_span(torus_diagram(3, 4)), 5);
  EXPECT_THROW(span_of(LaurentPoly(Var::t)), EvalError);
}

TEST(Torus, GenusMatchesSeifertOracle) {
  for (auto [p, q] : std::vector<std::pair<int, int>>{{2, 3}, {2, 5}, {3, 4}, {3, 5}, {4, 5}, {5, 6}, {2, 9}}) {
    EXPECT_EQ(torus_genus(p, q), oracle::seifert_surface_genus(torus_diagram(p, q))) << p << "," << q;
  }
  EXPECT_EQ(torus_genus(1, 5), 0);
}

TEST(Torus, SignatureMatchesGoeritzOracle) {
  for (auto [p, q] :
       std::vector<std::pair<int, int>>{{2, 3}, {2, 5}, {2, 7}, {3, 4}, {3, 5}, {4, 5}, {3, 7}, {5, 6}, {6, 7}}) {
    KnotDiagram d = torus_diagram(p, q);
    EXPECT_EQ(torus_signature(p, q), oracle::goeritz_signature(d, 0)) << p << "," << q;
    EXPECT_EQ(torus_signature(p, q), oracle::goeritz_signature(d, 1)) << p << "," << q;
  }
}

TEST(Torus, SignatureSymmetric) {
  EXPECT_EQ(torus_signature(4, 3), torus_signature(3, 4));
  EXPECT_EQ(torus_signature(7, 8), -30);
  EXPECT_EQ(torus_signature(1, 4), 0);
}

TEST(Oracle, GoeritzOnSmallKnots) {
  EXPECT_EQ(oracle::goeritz_signature(trefoil()), -2);
  EXPECT_EQ(oracle::goeritz_signature(negative_trefoil()), 2);
  EXPECT_EQ(oracle::goeritz_signature(figure_eight()), 0);
  EXPECT_EQ(oracle::goeritz_signature(validate({{1, 1, 2, 2}})), 0);
}

TEST(Evaluator, ClosedFormAndDiagramAgree) {
  Evaluator ev;
  KnotSample typed{torus_diagram(3, 5), std::pair{3, 5}};
  KnotSample untyped{torus_diagram(3, 5), std::nullopt};
  EXPECT_EQ(ev.evaluate(InvariantId::u(3), typed), ev.evaluate(InvariantId::u(3), untyped));
  EXPECT_EQ(ev.evaluate(InvariantId::parse("genus"), typed), Value(4L));
  EXPECT_THROW(ev.evaluate(InvariantId::parse("genus"), untyped), EvalError);
  EXPECT_THROW(ev.evaluate(InvariantId::parse("signature"), untyped), EvalError);
}

TEST(InvariantId, Parse) {
  EXPECT_EQ(InvariantId::parse("u2"), InvariantId::u(2));
  EXPECT_EQ(InvariantId::parse("u_3"), InvariantId::u(3));
  EXPECT_EQ(InvariantId::parse("u2").name(), "u2");
  EXPECT_EQ(InvariantId::parse("jones").kind, InvariantKind::jones);
  EXPECT_THROW(InvariantId::parse("alexander"), ParseError);
}
