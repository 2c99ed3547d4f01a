#include <gtest/gtest.h>

#include "fuzzylimit/parser.hpp"
#include "fuzzylimit/theorems.hpp"

using namespace fuzzylimit;

namespace {

const LimitConfig kCfg{};
FuzzyNumber pt(double v) { return from_singleton(v); }

const TheoremReport& find(const std::vector<TheoremReport>& v, Theorem t) {
  for (const auto& r : v)
    if (r.theorem == t) return r;
  throw std::runtime_error("missing report");
}

void expect_holds(const TheoremReport& r) {
  EXPECT_EQ(r.status, Status::Holds) << theorem_name(r.theorem) << ": " << r.notes;
  EXPECT_LE(r.max_alpha_gap, suite_tolerance(kCfg));
}

}  // namespace

TEST(LimitAlgebra, SumOfSquareAndIdentity) {
  auto reps = check_limit_algebra(parse("x^2"), parse("x"), from_triangular(1, 2, 3), pt(1));
  ASSERT_EQ(reps.size(), 4u);
  for (const auto& r : reps) expect_holds(r);
  const auto& sum = find(reps, Theorem::SumRule);
  ASSERT_TRUE(sum.lhs);
  EXPECT_NEAR(sum.lhs->core().lo(), 1.0 * 1.0 + 1.0, 1e-6);
}

TEST(LimitAlgebra, ScalarRuleUsesEndpointProducts) {
  auto reps = check_limit_algebra(parse("x"), parse("x"), from_triangular(1, 2, 3), pt(1));
  const auto& s = find(reps, Theorem::ScalarRule);
  expect_holds(s);
  ASSERT_TRUE(s.lhs);
  auto c = s.lhs->cut(AlphaLevel(0.5));
  EXPECT_NEAR(c.lo(), 1.5, 1e-6);
  EXPECT_NEAR(c.hi(), 2.5, 1e-6);
}

TEST(LimitAlgebra, QuotientExcludedAtZeroDenominator) {
  auto reps = check_limit_algebra(parse("x"), parse("x - 1"), from_triangular(1, 2, 3), pt(1));
  EXPECT_EQ(find(reps, Theorem::QuotientRule).status, Status::Inapplicable);
  expect_holds(find(reps, Theorem::SumRule));
}

TEST(LimitAlgebra, DependencyEffectAtFuzzyPointIsDiagnosed) {
  auto reps = check_limit_algebra(parse("x"), parse("x + 1"), from_triangular(1, 2, 3), from_triangular(1, 2, 3));
  const auto& q = find(reps, Theorem::QuotientRule);
  EXPECT_EQ(q.status, Status::Inapplicable);
  EXPECT_TRUE(q.known_dependency);
  EXPECT_NE(q.notes.find("dependency"), std::string::npos);
  EXPECT_TRUE(q.witness_alpha);
}

TEST(LimitAlgebra, ProductAndQuotientHoldInRigorousMode) {
  auto reps = check_limit_algebra(parse("x^2 + 1"), parse("x + 2"), from_triangular(1, 2, 3), pt(1), kCfg,
                                  EvalMode::rigorous(4));
  for (const auto& r : reps) expect_holds(r);
}

TEST(LimitAlgebra, NonConvergentInputsAreInapplicable) {
  auto reps = check_limit_algebra(parse("1/x^2"), parse("x"), pt(1), pt(0));
  for (const auto& r : reps) EXPECT_EQ(r.status, Status::Inapplicable) << theorem_name(r.theorem);
}

TEST(Composition, Examples) {
  auto sq = check_composition(parse("u^2"), parse("x + 1"), pt(1));
  expect_holds(sq);
  ASSERT_TRUE(sq.lhs);
  EXPECT_NEAR(sq.lhs->core().lo(), (1.0 + 1.0) * (1.0 + 1.0), 1e-6);
  EXPECT_EQ(check_composition(parse("exp(u)"), parse("1/x"), pt(0), kCfg, EvalMode::paper(), Side::Left).status,
            Status::Inapplicable);
  expect_holds(check_composition(parse("u"), parse("x^2 + x - 3"), pt(1)));
}

TEST(Composition, OccurrenceCapIsInapplicable) {
  auto r = check_composition(parse("u^10"), parse("x^3"), pt(1));
  EXPECT_EQ(r.status, Status::Inapplicable);
  EXPECT_FALSE(r.notes.empty());
}

TEST(Agreement, Examples) {
  expect_holds(check_agreement(parse("(x^2 - x)/x"), parse("x - 1"), pt(0)));
  expect_holds(check_agreement(parse("x^2 + 1"), parse("x^2 + 1"), pt(2)));
  auto off = check_agreement(parse("x"), parse("x + 0.001"), pt(0));
  EXPECT_EQ(off.status, Status::Inapplicable);
  EXPECT_NE(off.notes.find("differ"), std::string::npos);
}

TEST(Agreement, CancelledFactorDiffersOnVertexBoxes) {
  // endpoint enumeration does not cancel x - 1 against x^2 - 1
  auto r = check_agreement(parse("(x^2 - 1)/(x - 1)"), parse("x + 1"), pt(1));
  EXPECT_EQ(r.status, Status::Inapplicable);
  // crisp evaluation does agree away from 1
  for (double x : {0.9, 1.1, 1.5}) EXPECT_NEAR(eval_scalar(parse("(x^2 - 1)/(x - 1)"), x), x + 1, 1e-12);
}

TEST(OrderTheorems, Examples) {
  auto sq = check_order_theorems(parse("-x^2"), parse("x^2"), parse("x^2*sin(1/x)"), pt(0));
  ASSERT_EQ(sq.size(), 2u);
  expect_holds(find(sq, Theorem::Comparison));
  const auto& s = find(sq, Theorem::Squeeze);
  expect_holds(s);
  ASSERT_TRUE(s.lhs);
  EXPECT_NEAR(s.lhs->core().lo(), 0, 1e-6);

  auto cmp = check_order_theorems(parse("x"), parse("x + 1"), std::nullopt, pt(0));
  ASSERT_EQ(cmp.size(), 1u);
  expect_holds(cmp[0]);

  for (const auto& r : check_order_theorems(parse("x^2"), parse("x^2"), parse("x^2"), pt(1))) expect_holds(r);
}

TEST(OrderTheorems, FailedHypothesisIsInapplicable) {
  auto r = check_order_theorems(parse("x + 1"), parse("x"), std::nullopt, pt(0));
  EXPECT_EQ(r[0].status, Status::Inapplicable);
  auto s = check_order_theorems(parse("-x^2"), parse("x^2"), parse("sin(1/x)"), pt(0));
  EXPECT_EQ(find(s, Theorem::Squeeze).status, Status::Inapplicable);
}

TEST(UniquenessAndSides, Examples) {
  for (const auto& r : check_uniqueness_and_sides(parse("x^2 + x - 3"), ApproachSpec::at(pt(1)))) expect_holds(r);
  auto jump = check_uniqueness_and_sides(parse("abs(sin(x))/sin(x)"), ApproachSpec::at(pt(0)));
  expect_holds(find(jump, Theorem::OneSidedEquiv));
  expect_holds(find(jump, Theorem::Uniqueness));
  for (const auto& r : check_uniqueness_and_sides(parse("5"), ApproachSpec::at(from_triangular(1, 2, 3))))
    expect_holds(r);
  auto inf = check_uniqueness_and_sides(parse("1/x"), ApproachSpec::plus_infinity());
  expect_holds(find(inf, Theorem::Uniqueness));
  EXPECT_EQ(find(inf, Theorem::OneSidedEquiv).status, Status::Inapplicable);
}

TEST(Campaign, SmallRunIsDeterministicAndClean) {
  LimitConfig cfg;
  cfg.grid = AlphaGrid{11};
  auto a = run_algebra_campaign(3, 20, cfg);
  auto b = run_algebra_campaign(3, 20, cfg);
  EXPECT_EQ(a.cases, 20);
  EXPECT_EQ(a.fails, 0);
  EXPECT_EQ(a.holds, b.holds);
  EXPECT_EQ(a.inapplicable, b.inapplicable);
  EXPECT_EQ(a.holds + a.fails + a.inapplicable, 20 * 4);
}

TEST(Names, AllTheorems) {
  EXPECT_STREQ(theorem_name(Theorem::OneSidedEquiv), "OneSidedEquiv");
  EXPECT_STREQ(status_name(Status::Inapplicable), "Inapplicable");
}
