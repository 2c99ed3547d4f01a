#pragma once

// Fuzzy numbers stored as finite stacks of alpha-cuts.
//
// A fuzzy number is kept as its decomposition {(alpha, cut(alpha))} over a
// finite grid of levels in (0, 1]. Level 1 (the core) is always present and
// cuts are nested: lo is nondecreasing and hi nonincreasing in alpha.
// Membership is recovered as the sup over stored levels of
// alpha AND chi_cut(alpha)(x).

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "fuzzylimit/interval.hpp"

namespace fuzzylimit {

/// A membership level in (0, 1].
class AlphaLevel {
 public:
  explicit AlphaLevel(double value);
  constexpr double value() const noexcept { return value_; }

 private:
  double value_;
};

/// Uniform alpha grid. `levels` counts grid points on [0, 1] including 0;
/// level 0 (the support) is never stored, so the stored levels are
/// k / (levels - 1) for k = 1 .. levels - 1. The default of 101 gives
/// {0.01, 0.02, ..., 1.0}.
struct AlphaGrid {
  int levels = 101;

  std::vector<double> alphas() const;
  std::size_t stored_levels() const { return static_cast<std::size_t>(levels - 1); }
};

struct AlphaCut {
  double alpha;
  Interval cut;
};

struct Singleton {
  double value;
};
struct Triangular {
  double a, b, c;
};
struct General {};
using Shape = std::variant<Singleton, Triangular, General>;

struct MembershipSample {
  double x;
  double grade;
};

/// (d1, d2) with 0 <= d1 <= d2.
struct DistancePair {
  DistancePair(double d1, double d2);
  double d1;
  double d2;
};

/// Two adjacent stored levels (alpha < beta) whose cuts are not nested.
struct NestViolation {
  double alpha;
  double beta;
  double amount;
};

class FuzzyNumber {
 public:
  const std::vector<AlphaCut>& levels() const noexcept { return levels_; }
  const Shape& shape() const noexcept { return shape_; }
  bool is_singleton() const noexcept { return std::holds_alternative<Singleton>(shape_); }

  std::vector<double> alphas() const;
  Interval cut(AlphaLevel alpha) const;
  Interval core() const { return levels_.back().cut; }
  /// Cut at the lowest stored level; stands in for the support.
  Interval base() const { return levels_.front().cut; }
  double membership(double x) const;

  friend FuzzyNumber from_singleton(double r, const AlphaGrid& grid);
  friend FuzzyNumber from_triangular(double a, double b, double c, const AlphaGrid& grid);
  friend FuzzyNumber reconstruct(std::vector<AlphaCut> samples);

 private:
  FuzzyNumber(std::vector<AlphaCut> levels, Shape shape)
      : levels_(std::move(levels)), shape_(shape) {}

  std::vector<AlphaCut> levels_;
  Shape shape_;
};

FuzzyNumber from_singleton(double r, const AlphaGrid& grid = {});
FuzzyNumber from_triangular(double a, double b, double c, const AlphaGrid& grid = {});

/// Resolution-principle reconstruction from (alpha, cut) samples. Samples
/// are sorted by alpha; they must be nested and include alpha = 1.
FuzzyNumber reconstruct(std::vector<AlphaCut> samples);
std::vector<AlphaCut> decompose(const FuzzyNumber& f);

/// Nestedness violations between consecutive levels (sorted by alpha)
/// exceeding `slack`.
std::vector<NestViolation> nest_violations(std::span<const AlphaCut> levels, double slack = 0.0);
/// Makes a level stack nested by intersecting each cut with the one below it.
void hull_repair(std::vector<AlphaCut>& levels);

Interval alpha_cut(const FuzzyNumber& f, double alpha);
double membership(const FuzzyNumber& f, double x);

/// min / max over the four endpoint distances |a_i - b_j|.
DistancePair distance_pair(const Interval& a, const Interval& b);
/// Endpoint-matched pair: sorted (|a.lo - b.lo|, |a.hi - b.hi|). Agrees with
/// distance_pair whenever b is degenerate.
DistancePair matched_distance_pair(const Interval& a, const Interval& b);
double pair_norm(const DistancePair& p);

/// Union of the stored alpha levels of both operands.
std::vector<double> merged_alphas(const FuzzyNumber& f, const FuzzyNumber& g);

/// Componentwise order per alpha-cut: lo(F) <= lo(G) and hi(F) <= hi(G) at
/// every level of the merged grid.
bool fuzzy_leq(const FuzzyNumber& f, const FuzzyNumber& g, double slack = 0.0);

/// sup over the merged grid of max(|lo_F - lo_G|, |hi_F - hi_G|).
double max_endpoint_gap(const FuzzyNumber& f, const FuzzyNumber& g);
bool approx_equal(const FuzzyNumber& f, const FuzzyNumber& g, double tau = 1e-9);

inline constexpr double kExactTolerance = 1e-9;
inline constexpr double kLimitTolerance = 1e-6;

}  // namespace fuzzylimit
