#pragma once

// Evaluation of expressions over alpha-cut boxes and fuzzy numbers.

#include <string>
#include <vector>

#include "fuzzylimit/expr.hpp"

namespace fuzzylimit {

struct EvalMode {
  enum class Kind { PaperVertex, NaturalInterval, RigorousSubdivide };
  Kind kind = Kind::PaperVertex;
  int depth = 0;  // RigorousSubdivide only

  static EvalMode paper() { return {Kind::PaperVertex, 0}; }
  static EvalMode natural() { return {Kind::NaturalInterval, 0}; }
  /// Throws ConfigError unless depth >= 1.
  static EvalMode rigorous(int depth);

  std::string name() const;  // "paper", "natural", "rigorous:<d>"
  friend bool operator==(const EvalMode&, const EvalMode&) = default;
};

/// Parses "paper", "natural" or "rigorous:<depth>"; throws ConfigError.
EvalMode parse_mode(const std::string& text);

/// One choice of box endpoint (0 = lo, 1 = hi) per variable slot.
struct EndpointAssignment {
  std::vector<int> slots;
  double value;
};

struct VertexReport {
  Interval result;
  /// PaperVertex: the assignments attaining result.lo and result.hi.
  std::vector<EndpointAssignment> attained_at;
  EvalMode mode;
};

/// Upper bound on variable slots enumerated by PaperVertex (2^cap cases).
inline constexpr unsigned kMaxVertexSlots = 20;

/// Evaluate e over the box. Constants contribute their cut at `alpha`.
/// Throws DivisionByZeroInterval / DomainError naming the subexpression.
VertexReport vertex_eval(const Expr& e, const Interval& box, const EvalMode& mode = EvalMode::paper(),
                         double alpha = 1.0);

struct EvalOptions {
  /// Replace non-nested output cuts by their intersection with the cut
  /// below instead of throwing InconsistentCuts.
  bool hull_repair = false;
};

/// Level-wise evaluation over the stored levels of x; levels run in
/// parallel. Evaluation failures surface as LevelError for the lowest
/// failing alpha. PaperVertex output that is not nested throws
/// InconsistentCuts unless hull_repair is set; the enclosure modes always
/// intersect each cut with the one below, which keeps them enclosures.
FuzzyNumber eval_fuzzy(const Expr& e, const FuzzyNumber& x, const EvalMode& mode = EvalMode::paper(),
                       const EvalOptions& opts = {});
/// Single-threaded reference for eval_fuzzy; identical results.
FuzzyNumber eval_fuzzy_serial(const Expr& e, const FuzzyNumber& x, const EvalMode& mode = EvalMode::paper(),
                              const EvalOptions& opts = {});

/// Crisp evaluation; constants collapse to their core midpoint.
double eval_scalar(const Expr& e, double x);

}  // namespace fuzzylimit
