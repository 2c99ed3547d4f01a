#pragma once

// Numerical fuzzy limits with epsilon-delta / epsilon-K certificates.
//
// For every alpha level the target cut is approached along a geometric
// schedule h_k = h0 * ratio^k of boxes; each box is evaluated with
// vertex_eval and the resulting intervals are watched for convergence or
// blow-up.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fuzzylimit/eval.hpp"

namespace fuzzylimit {

enum class Side { Both, Left, Right };
const char* side_name(Side s);

struct ApproachSpec {
  enum class Target { Point, PlusInfinity, MinusInfinity };
  Target target = Target::Point;
  std::optional<FuzzyNumber> point;
  Side side = Side::Both;

  static ApproachSpec at(FuzzyNumber p, Side side = Side::Both);
  static ApproachSpec plus_infinity();
  static ApproachSpec minus_infinity();

  bool infinite() const { return target != Target::Point; }
  /// Throws ConfigError for a missing point or a one-sided infinite target.
  void validate() const;
};

struct LimitConfig {
  double h0 = 0.1;
  double ratio = 0.5;
  int max_steps = 60;
  double tol = 1e-6;
  double blowup = 1e12;
  AlphaGrid grid{};

  /// Throws ConfigError on out-of-range values.
  void validate() const;
  /// Non-fatal remarks, e.g. a schedule whose final step underflows.
  std::vector<std::string> warnings() const;
};

struct Converged {
  FuzzyNumber value;
};
struct DivergesPlus {};
struct DivergesMinus {};
enum class NoLimitReason { OneSidedMismatch, Oscillation, NonNested };
struct NoLimit {
  NoLimitReason reason;
  std::string detail;
};
struct Undetermined {
  std::string detail;
};
using Outcome = std::variant<Converged, DivergesPlus, DivergesMinus, NoLimit, Undetermined>;

std::string outcome_name(const Outcome& o);  // "Converged", "DivergesPlus", ...
const char* reason_name(NoLimitReason r);

struct Witness {
  double eps;
  std::optional<double> witness;  // delta, or K for infinite targets
  bool certified;
};

struct AlphaEvidence {
  double alpha;
  std::vector<Witness> witnesses;
  /// Residual pair norms of consecutive schedule values, per side.
  std::vector<double> residuals_left;
  std::vector<double> residuals_right;
};

struct CertificateFailure {
  double alpha;
  double eps;
};

struct Certificate {
  enum class Kind { None, Delta, K };
  Kind kind = Kind::None;
  std::vector<double> eps_grid;
  std::vector<AlphaEvidence> levels;
  std::vector<CertificateFailure> failures;

  bool certified() const { return kind != Kind::None && failures.empty(); }
};

struct LimitResult {
  Outcome outcome;
  Certificate certificate;
  /// Per-side outcomes assembled across alpha (two-sided finite targets).
  std::optional<Outcome> left;
  std::optional<Outcome> right;

  bool converged() const { return std::holds_alternative<Converged>(outcome); }
  /// Throws PreconditionError unless converged.
  const FuzzyNumber& value() const;
};

LimitResult fuzzy_limit(const Expr& e, const ApproachSpec& approach, const EvalMode& mode = EvalMode::paper(),
                        const LimitConfig& cfg = {});
/// Single-threaded reference for fuzzy_limit; identical results.
LimitResult fuzzy_limit_serial(const Expr& e, const ApproachSpec& approach,
                               const EvalMode& mode = EvalMode::paper(), const LimitConfig& cfg = {});

inline const std::vector<double> kDefaultEpsGrid = {1e-1, 1e-2, 1e-3, 1e-4};

/// Search the schedule for the largest delta (smallest K) at which every
/// probe box inside the witness region stays within eps of the limit cut.
/// Probes use 32 log-spaced offsets t, each checking the schedule-shaped box
/// and the cut shifted by the whole of t. Unreachable eps values are recorded as
/// failures. Throws PreconditionError unless `limit` converged and
/// ConfigError unless eps_grid is strictly decreasing and positive.
Certificate certify(const Expr& e, const ApproachSpec& approach, const LimitResult& limit,
                    const std::vector<double>& eps_grid = kDefaultEpsGrid, const LimitConfig& cfg = {},
                    const EvalMode& mode = EvalMode::paper());

struct SequenceViolation {
  int index;
  int direction;  // +1 from the right, -1 from the left
  double alpha;
  double gap;
  std::string detail;
};

struct SequentialReport {
  int n_seqs = 0;
  int n_final = 0;
  std::vector<SequenceViolation> violations;
  bool passed() const { return violations.empty(); }
};

/// Random fuzzy sequences p_n -> p (p_n != p); checks f(p_n) -> L within tol.
SequentialReport sequential_check(const Expr& e, const FuzzyNumber& p, const FuzzyNumber& limit, int n_seqs,
                                  const LimitConfig& cfg = {}, const EvalMode& mode = EvalMode::paper(),
                                  std::uint64_t seed = 42);

}  // namespace fuzzylimit
