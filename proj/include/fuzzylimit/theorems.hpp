#pragma once

// Executable checks of the algebraic and order properties of fuzzy limits.
// Each check reports Holds, Fails, or Inapplicable when its hypotheses are
// not met; precondition failures never count as violations.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fuzzylimit/limit.hpp"

namespace fuzzylimit {

enum class Theorem {
  Uniqueness,
  SumRule,
  ScalarRule,
  ProductRule,
  QuotientRule,
  Composition,
  Agreement,
  Comparison,
  Squeeze,
  OneSidedEquiv,
};
enum class Status { Holds, Fails, Inapplicable };

const char* theorem_name(Theorem t);
const char* status_name(Status s);

struct TheoremReport {
  Theorem theorem;
  Status status = Status::Inapplicable;
  std::optional<FuzzyNumber> lhs{};
  std::optional<FuzzyNumber> rhs{};
  double max_alpha_gap = 0.0;
  std::string notes{};
  /// Level with the largest gap (always set for Fails).
  std::optional<double> witness_alpha{};
  /// Gap attributed to repeated-operand overestimation of the arithmetic.
  bool known_dependency = false;
};

/// Both sides of every identity carry truncation error.
inline double suite_tolerance(const LimitConfig& cfg) { return 2.0 * cfg.tol; }

/// Sum, scalar (A * f), product and quotient rules at p.
std::vector<TheoremReport> check_limit_algebra(const Expr& f, const Expr& g, const FuzzyNumber& a,
                                               const FuzzyNumber& p, const LimitConfig& cfg = {},
                                               const EvalMode& mode = EvalMode::paper());

/// lim f(g(x)) against f(lim g) when f is continuous at lim g.
TheoremReport check_composition(const Expr& f, const Expr& g, const FuzzyNumber& p, const LimitConfig& cfg = {},
                                const EvalMode& mode = EvalMode::paper(), Side side = Side::Both);

/// Functions agreeing on every probe box around p share their limit.
TheoremReport check_agreement(const Expr& f, const Expr& g, const FuzzyNumber& p, const LimitConfig& cfg = {},
                              const EvalMode& mode = EvalMode::paper());

/// Comparison (f <= g) and, when h is given, squeeze (f <= h <= g).
std::vector<TheoremReport> check_order_theorems(const Expr& f, const Expr& g, const std::optional<Expr>& h,
                                                const FuzzyNumber& p, const LimitConfig& cfg = {},
                                                const EvalMode& mode = EvalMode::paper());

/// Schedule independence and two-sided / one-sided equivalence.
std::vector<TheoremReport> check_uniqueness_and_sides(const Expr& e, const ApproachSpec& approach,
                                                      const LimitConfig& cfg = {},
                                                      const EvalMode& mode = EvalMode::paper());

struct CampaignCase {
  std::string f, g;
  double point;
  std::vector<TheoremReport> reports;
};

struct CampaignSummary {
  int cases = 0;
  int holds = 0, fails = 0, inapplicable = 0;
  std::vector<CampaignCase> failures;            // any Fails report
  std::vector<CampaignCase> dependency_cases;    // known dependency gaps
};

/// Random polynomial pairs (degree <= 4, triangular coefficients) at random
/// crisp points. Sum and scalar rules run in `mode`; product and quotient
/// rules run in `product_mode` and additionally in PaperVertex, whose gaps
/// are collected as dependency cases.
CampaignSummary run_algebra_campaign(std::uint64_t seed, int n_cases, const LimitConfig& cfg,
                                     const EvalMode& mode = EvalMode::paper(),
                                     const EvalMode& product_mode = EvalMode::rigorous(2));

}  // namespace fuzzylimit
