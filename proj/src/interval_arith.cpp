#include "fuzzylimit/interval_arith.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fuzzylimit {

namespace {

Interval min_max(std::initializer_list<double> xs) {
  auto [mn, mx] = std::minmax(xs);
  return {mn, mx};
}

// sin over [lo, hi]: endpoint values plus any interior extremum.
Interval sin_range(const Interval& a) {
  if (a.width() >= 2.0 * std::numbers::pi) return {-1.0, 1.0};
  double lo = std::min(std::sin(a.lo()), std::sin(a.hi()));
  double hi = std::max(std::sin(a.lo()), std::sin(a.hi()));
  // maxima at pi/2 + 2k pi, minima at -pi/2 + 2k pi
  const double two_pi = 2.0 * std::numbers::pi;
  double k_max = std::ceil((a.lo() - std::numbers::pi / 2) / two_pi);
  if (std::numbers::pi / 2 + k_max * two_pi <= a.hi()) hi = 1.0;
  double k_min = std::ceil((a.lo() + std::numbers::pi / 2) / two_pi);
  if (-std::numbers::pi / 2 + k_min * two_pi <= a.hi()) lo = -1.0;
  return {lo, hi};
}

template <class Op>
FuzzyNumber levelwise(const FuzzyNumber& f, const FuzzyNumber& g, Op op) {
  std::vector<AlphaCut> cuts;
  for (double a : merged_alphas(f, g)) {
    AlphaLevel level(a);
    cuts.push_back({a, op(f.cut(level), g.cut(level))});
  }
  return reconstruct(std::move(cuts));
}

}  // namespace

bool contains_zero(const Interval& b, double tol) {
  const double slack = tol * std::max(std::abs(b.lo()), std::abs(b.hi()));
  return b.lo() <= slack && b.hi() >= -slack;
}

Interval iv_add(const Interval& a, const Interval& b) { return {a.lo() + b.lo(), a.hi() + b.hi()}; }
Interval iv_sub(const Interval& a, const Interval& b) { return {a.lo() - b.hi(), a.hi() - b.lo()}; }
Interval iv_neg(const Interval& a) { return {-a.hi(), -a.lo()}; }

Interval iv_mul(const Interval& a, const Interval& b) {
  if (a.degenerate() && b.degenerate()) return Interval::point(a.lo() * b.lo());
  return min_max({a.lo() * b.lo(), a.lo() * b.hi(), a.hi() * b.lo(), a.hi() * b.hi()});
}

Interval iv_div(const Interval& a, const Interval& b) {
  if (contains_zero(b)) throw DivisionByZeroInterval("", "division by an interval containing zero");
  if (a.degenerate() && b.degenerate()) return Interval::point(a.lo() / b.lo());
  return min_max({a.lo() / b.lo(), a.lo() / b.hi(), a.hi() / b.lo(), a.hi() / b.hi()});
}

Interval iv_pow_int(const Interval& a, unsigned n, Semantics sem) {
  if (n == 0) return Interval::point(1.0);
  if (a.degenerate()) {
    double p = a.lo();
    for (unsigned i = 1; i < n; ++i) p *= a.lo();
    return Interval::point(p);
  }
  if (sem == Semantics::Vertex) {
    // products of n endpoint choices depend only on how many pick hi
    double lo = INFINITY, hi = -INFINITY;
    for (unsigned k = 0; k <= n; ++k) {
      double p = 1.0;
      for (unsigned i = 0; i < n; ++i) p *= (i < k ? a.hi() : a.lo());
      lo = std::min(lo, p);
      hi = std::max(hi, p);
    }
    return {lo, hi};
  }
  double pl = std::pow(a.lo(), static_cast<double>(n));
  double ph = std::pow(a.hi(), static_cast<double>(n));
  if (n % 2 == 1) return {pl, ph};
  if (a.lo() >= 0.0) return {pl, ph};
  if (a.hi() <= 0.0) return {ph, pl};
  return {0.0, std::max(pl, ph)};
}

double apply_unary(UnaryFn fn, double x) {
  switch (fn) {
    case UnaryFn::Exp: return std::exp(x);
    case UnaryFn::Sin: return std::sin(x);
    case UnaryFn::Abs: return std::abs(x);
    case UnaryFn::Sqrt:
      if (x < 0.0) throw DomainError("sqrt of a negative number");
      return std::sqrt(x);
  }
  return x;
}

const char* unary_name(UnaryFn fn) {
  switch (fn) {
    case UnaryFn::Exp: return "exp";
    case UnaryFn::Sin: return "sin";
    case UnaryFn::Abs: return "abs";
    case UnaryFn::Sqrt: return "sqrt";
  }
  return "?";
}

Interval iv_monotone_unary(UnaryFn fn, const Interval& a) {
  switch (fn) {
    case UnaryFn::Exp: return {std::exp(a.lo()), std::exp(a.hi())};
    case UnaryFn::Sqrt:
      if (a.lo() < 0.0) throw DomainError("sqrt of an interval reaching below zero");
      return {std::sqrt(a.lo()), std::sqrt(a.hi())};
    default: throw DomainError(std::string(unary_name(fn)) + " is not monotone");
  }
}

Interval iv_unary(UnaryFn fn, const Interval& a, Semantics sem) {
  if (fn == UnaryFn::Exp || fn == UnaryFn::Sqrt) return iv_monotone_unary(fn, a);
  if (a.degenerate()) return Interval::point(apply_unary(fn, a.lo()));
  if (sem == Semantics::Vertex) return min_max({apply_unary(fn, a.lo()), apply_unary(fn, a.hi())});
  if (fn == UnaryFn::Sin) return sin_range(a);
  // abs
  if (a.lo() >= 0.0) return a;
  if (a.hi() <= 0.0) return iv_neg(a);
  return {0.0, std::max(-a.lo(), a.hi())};
}

FuzzyNumber fuzzy_add(const FuzzyNumber& f, const FuzzyNumber& g) { return levelwise(f, g, iv_add); }
FuzzyNumber fuzzy_sub(const FuzzyNumber& f, const FuzzyNumber& g) { return levelwise(f, g, iv_sub); }
FuzzyNumber fuzzy_mul(const FuzzyNumber& f, const FuzzyNumber& g) { return levelwise(f, g, iv_mul); }
FuzzyNumber fuzzy_div(const FuzzyNumber& f, const FuzzyNumber& g) { return levelwise(f, g, iv_div); }

}  // namespace fuzzylimit
