#include <gtest/gtest.h>

#include <cmath>

#include "fuzzylimit/fuzzy_json.hpp"
#include "fuzzylimit/fuzzy_number.hpp"
#include "oracles.hpp"

using namespace fuzzylimit;

namespace {

void expect_cut(const Interval& iv, double lo, double hi, double tol = 1e-15) {
  EXPECT_NEAR(iv.lo(), lo, tol);
  EXPECT_NEAR(iv.hi(), hi, tol);
}

}  // namespace

TEST(AlphaGrid, DefaultStoresHundredthsUpToOne) {
  auto a = AlphaGrid{}.alphas();
  ASSERT_EQ(a.size(), 100u);
  EXPECT_DOUBLE_EQ(a.front(), 0.01);
  EXPECT_EQ(a.back(), 1.0);
  EXPECT_DOUBLE_EQ(a[49], 0.5);
}

TEST(AlphaGrid, TooFewLevelsRejected) {
  EXPECT_THROW(AlphaGrid{2}.alphas(), InvalidShape);
  EXPECT_EQ(AlphaGrid{3}.alphas(), (std::vector<double>{0.5, 1.0}));
}

TEST(AlphaLevel, OutsideUnitIntervalIsDomainError) {
  EXPECT_THROW(AlphaLevel(0.0), DomainError);
  EXPECT_THROW(AlphaLevel(1.5), DomainError);
  EXPECT_THROW(AlphaLevel(std::nan("")), DomainError);
  EXPECT_NO_THROW(AlphaLevel(1.0));
}

TEST(Interval, RejectsInvertedAndNaN) {
  EXPECT_THROW(Interval(2, 1), InvalidShape);
  EXPECT_THROW(Interval(std::nan(""), 1), InvalidValue);
  EXPECT_TRUE(Interval(1, 1).degenerate());
}

TEST(FromTriangular, CoreAndHalfLevel) {
  auto t = from_triangular(0, 0.5, 1);
  expect_cut(t.cut(AlphaLevel(1)), 0.5, 0.5);
  expect_cut(t.cut(AlphaLevel(0.5)), 0.25, 0.75);
}

TEST(FromTriangular, DegenerateTriangleIsCrisp) {
  auto t = from_triangular(2, 2, 2);
  for (const auto& l : t.levels()) EXPECT_EQ(l.cut, Interval::point(2));
}

TEST(FromTriangular, OrderingViolation) {
  EXPECT_THROW(from_triangular(1, 0.5, 2), InvalidShape);
  EXPECT_THROW(from_triangular(0, 2, 1), InvalidShape);
  EXPECT_THROW(from_triangular(0, INFINITY, 1), InvalidValue);
}

TEST(FromSingleton, CutsAndMembership) {
  auto one = from_singleton(1);
  for (double a : {0.01, 0.2, 0.77, 1.0}) EXPECT_EQ(one.cut(AlphaLevel(a)), Interval::point(1));
  EXPECT_EQ(from_singleton(-1).membership(-1), 1.0);
  EXPECT_EQ(from_singleton(0).membership(0.1), 0.0);
  EXPECT_THROW(from_singleton(NAN), InvalidValue);
  EXPECT_THROW(from_singleton(INFINITY), InvalidValue);
}

TEST(AlphaCutOp, Examples) {
  auto t = from_triangular(0, 0.5, 1);
  expect_cut(alpha_cut(t, 1), 0.5, 0.5);
  expect_cut(alpha_cut(t, 0.5), 0.25, 0.75);
  EXPECT_EQ(alpha_cut(from_singleton(3), 0.2), Interval::point(3));
  EXPECT_THROW(alpha_cut(t, 0.0), DomainError);
  EXPECT_THROW(alpha_cut(t, 1.01), DomainError);
}

TEST(AlphaCutOp, GeneralInterpolatesBetweenStoredLevels) {
  auto g = reconstruct({{0.5, Interval(0, 4)}, {1.0, Interval(2, 2)}});
  expect_cut(g.cut(AlphaLevel(0.75)), 1, 3);
  // below the lowest stored level the lowest cut stands in
  expect_cut(g.cut(AlphaLevel(0.1)), 0, 4);
}

TEST(Membership, TriangularMatchesAnalyticOracle) {
  auto t = from_triangular(0, 0.5, 1);
  EXPECT_EQ(membership(t, 0.5), 1.0);
  const double grid_res = 0.01;
  EXPECT_NEAR(membership(t, 0.25), oracle::tri_membership(0, 0.5, 1, 0.25), grid_res);
  EXPECT_NEAR(membership(t, 0.25), oracle::tri_membership_bruteforce(0, 0.5, 1, 0.25), grid_res);
  EXPECT_EQ(membership(from_singleton(2), 2.1), 0.0);
  EXPECT_EQ(membership(t, -3), 0.0);
}

TEST(Reconstruct, RoundTripAndSingleton) {
  auto t = from_triangular(0, 0.5, 1);
  auto r = reconstruct(decompose(t));
  ASSERT_EQ(r.levels().size(), t.levels().size());
  for (std::size_t i = 0; i < t.levels().size(); ++i) {
    EXPECT_EQ(r.levels()[i].alpha, t.levels()[i].alpha);
    EXPECT_EQ(r.levels()[i].cut, t.levels()[i].cut);
  }
  auto s = reconstruct({{1.0, Interval(2, 2)}});
  EXPECT_TRUE(s.is_singleton());
  EXPECT_EQ(s.core(), Interval::point(2));
}

TEST(Reconstruct, Errors) {
  EXPECT_THROW(reconstruct({{0.5, Interval(0, 1)}, {1.0, Interval(2, 3)}}), InconsistentCuts);
  EXPECT_THROW(reconstruct({{0.5, Interval(0, 1)}}), InconsistentCuts);
  EXPECT_THROW(reconstruct({}), InconsistentCuts);
  EXPECT_THROW(reconstruct({{0.5, Interval(0, 1)}, {0.5, Interval(0, 1)}, {1.0, Interval(0, 0)}}),
               InconsistentCuts);
  EXPECT_THROW(reconstruct({{0.0, Interval(0, 1)}, {1.0, Interval(0, 0)}}), DomainError);
}

TEST(Reconstruct, SortsSamples) {
  auto r = reconstruct({{1.0, Interval(1, 1)}, {0.5, Interval(0, 2)}});
  EXPECT_EQ(r.base(), Interval(0, 2));
  EXPECT_EQ(r.core(), Interval::point(1));
}

TEST(HullRepair, IntersectsWithLowerCut) {
  std::vector<AlphaCut> v = {{0.5, Interval(0, 2)}, {1.0, Interval(1, 3)}};
  EXPECT_EQ(nest_violations(v).size(), 1u);
  hull_repair(v);
  EXPECT_EQ(v[1].cut, Interval(1, 2));
  EXPECT_TRUE(nest_violations(v).empty());
  std::vector<AlphaCut> w = {{0.5, Interval(0, 1)}, {1.0, Interval(5, 6)}};
  hull_repair(w);
  EXPECT_EQ(w[1].cut, Interval::point(1));
}

TEST(DistancePair, Examples) {
  auto p = distance_pair(Interval(0, 0), Interval(3, 4));
  EXPECT_EQ(p.d1, 3);
  EXPECT_EQ(p.d2, 4);
  p = distance_pair(Interval(1, 3), Interval(1, 3));
  EXPECT_EQ(p.d1, 0);
  EXPECT_EQ(p.d2, 2);
  p = distance_pair(Interval(5, 5), Interval(5, 5));
  EXPECT_EQ(p.d1, 0);
  EXPECT_EQ(p.d2, 0);
}

TEST(DistancePair, MatchedAgreesOnDegenerateTarget) {
  for (auto a : {Interval(0, 1), Interval(-2, 5), Interval(3, 3)}) {
    auto x = distance_pair(a, Interval::point(1.5));
    auto y = matched_distance_pair(a, Interval::point(1.5));
    EXPECT_EQ(x.d1, y.d1);
    EXPECT_EQ(x.d2, y.d2);
  }
  // identical intervals: matched gauge is zero while min/max reports the width
  EXPECT_EQ(matched_distance_pair(Interval(1, 3), Interval(1, 3)).d2, 0);
}

TEST(DistancePair, ConstructorValidates) {
  EXPECT_THROW(DistancePair(2, 1), InvalidValue);
  EXPECT_THROW(DistancePair(-1, 1), InvalidValue);
}

TEST(PairNorm, Examples) {
  EXPECT_EQ(pair_norm({3, 4}), 5);
  EXPECT_EQ(pair_norm({0, 0}), 0);
  EXPECT_DOUBLE_EQ(pair_norm({1, 1}), std::sqrt(2.0));
}

TEST(FuzzyLeq, Examples) {
  EXPECT_TRUE(fuzzy_leq(from_singleton(1), from_singleton(2)));
  EXPECT_FALSE(fuzzy_leq(from_singleton(2), from_singleton(1)));
  auto t = from_triangular(0, 0.5, 1);
  EXPECT_TRUE(fuzzy_leq(t, t));
  EXPECT_FALSE(fuzzy_leq(from_triangular(0, 1, 2), from_triangular(0.5, 1, 1.5)));
  EXPECT_FALSE(fuzzy_leq(from_triangular(0.5, 1, 1.5), from_triangular(0, 1, 2)));
}

TEST(ApproxEqual, TolerancesAndMixedGrids) {
  auto a = from_triangular(0, 1, 2);
  auto b = from_triangular(0, 1, 2 + 1e-10);
  EXPECT_TRUE(approx_equal(a, b));
  EXPECT_FALSE(approx_equal(a, from_triangular(0, 1, 2.1)));
  // different grids compare over the union of their levels
  EXPECT_TRUE(approx_equal(from_triangular(0, 1, 2, AlphaGrid{11}), a, 1e-12));
  EXPECT_NEAR(max_endpoint_gap(from_singleton(0), from_singleton(1e-7)), 1e-7, 1e-20);
}

TEST(FuzzyJson, ParsesAllKinds) {
  auto s = fuzzy_from_json_text(R"({"kind":"singleton","value":1})");
  EXPECT_TRUE(s.is_singleton());
  auto t = fuzzy_from_json_text(R"({"kind":"triangular","a":0,"b":0.5,"c":1})");
  expect_cut(t.cut(AlphaLevel(0.5)), 0.25, 0.75);
  auto g = fuzzy_from_json_text(R"({"kind":"general","levels":[[0.5,[0,4]],[1.0,[2,2]]]})");
  EXPECT_EQ(g.base(), Interval(0, 4));
  auto small = fuzzy_from_json_text(R"({"kind":"singleton","value":1})", AlphaGrid{5});
  EXPECT_EQ(small.levels().size(), 4u);
}

TEST(FuzzyJson, Errors) {
  EXPECT_THROW(fuzzy_from_json_text("{"), InvalidValue);
  EXPECT_THROW(fuzzy_from_json_text(R"({"kind":"blob"})"), InvalidValue);
  EXPECT_THROW(fuzzy_from_json_text(R"({"kind":"singleton"})"), InvalidValue);
  EXPECT_THROW(fuzzy_from_json_text(R"({"kind":"triangular","a":1,"b":0,"c":2})"), InvalidShape);
  EXPECT_THROW(fuzzy_from_json_text(R"({"kind":"general","levels":[[0.5,[0,1]],[1.0,[2,3]]]})"),
               InconsistentCuts);
  EXPECT_THROW(fuzzy_from_json_text(R"({"kind":"general","levels":[[0.5,[0]]]})"), InvalidValue);
}

TEST(FuzzyJson, RoundTripKeepsFifteenDigits) {
  for (const auto& f : {from_singleton(0.1), from_triangular(1.0 / 3, 0.5, 2.0 / 3),
                        reconstruct({{0.5, Interval(0.1, 0.7)}, {1.0, Interval(0.3, 0.3)}})}) {
    auto j = fuzzy_to_json(f);
    auto back = fuzzy_from_json_text(j.dump());
    EXPECT_TRUE(approx_equal(f, back, 1e-15)) << j.dump();
  }
}
