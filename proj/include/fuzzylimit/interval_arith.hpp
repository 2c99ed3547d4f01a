#pragma once

// Interval operations on alpha-cuts and their level-wise lift to fuzzy numbers.

#include "fuzzylimit/fuzzy_number.hpp"
#include "fuzzylimit/interval.hpp"

namespace fuzzylimit {

enum class UnaryFn { Exp, Sin, Abs, Sqrt };

/// How powers and non-monotone functions of an interval are formed.
/// Vertex: min/max over endpoint choices (x^2 over [-1,2] is [-2,4]).
/// Range:  the true image of the interval (x^2 over [-1,2] is [0,4]).
enum class Semantics { Vertex, Range };

/// Divisors reaching within this fraction of their own magnitude of zero
/// count as containing zero.
inline constexpr double kZeroDivisorTol = 1e-12;

bool contains_zero(const Interval& b, double tol = kZeroDivisorTol);

Interval iv_add(const Interval& a, const Interval& b);
Interval iv_sub(const Interval& a, const Interval& b);
Interval iv_neg(const Interval& a);
Interval iv_mul(const Interval& a, const Interval& b);
/// Throws DivisionByZeroInterval when b contains zero.
Interval iv_div(const Interval& a, const Interval& b);
Interval iv_pow_int(const Interval& a, unsigned n, Semantics sem = Semantics::Vertex);
/// Image of a monotone function; throws DomainError for sqrt below zero.
Interval iv_monotone_unary(UnaryFn fn, const Interval& a);
Interval iv_unary(UnaryFn fn, const Interval& a, Semantics sem = Semantics::Vertex);

double apply_unary(UnaryFn fn, double x);
const char* unary_name(UnaryFn fn);

// Level-wise arithmetic on the merged grid of both operands.
FuzzyNumber fuzzy_add(const FuzzyNumber& f, const FuzzyNumber& g);
FuzzyNumber fuzzy_sub(const FuzzyNumber& f, const FuzzyNumber& g);
FuzzyNumber fuzzy_mul(const FuzzyNumber& f, const FuzzyNumber& g);
FuzzyNumber fuzzy_div(const FuzzyNumber& f, const FuzzyNumber& g);

}  // namespace fuzzylimit
