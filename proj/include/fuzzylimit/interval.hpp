#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>

#include "fuzzylimit/errors.hpp"

namespace fuzzylimit {

/// Closed real interval [lo, hi]. Degenerate intervals (lo == hi) are allowed.
class Interval {
 public:
  constexpr Interval() = default;
  Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (std::isnan(lo) || std::isnan(hi)) throw InvalidValue("interval endpoint is NaN");
    if (lo > hi) throw InvalidShape("interval with lo > hi");
  }
  static Interval point(double v) { return Interval(v, v); }

  constexpr double lo() const noexcept { return lo_; }
  constexpr double hi() const noexcept { return hi_; }
  constexpr double width() const noexcept { return hi_ - lo_; }
  constexpr double mid() const noexcept { return 0.5 * (lo_ + hi_); }
  constexpr bool degenerate() const noexcept { return lo_ == hi_; }

  constexpr bool contains(double x) const noexcept { return lo_ <= x && x <= hi_; }
  constexpr bool contains(const Interval& o) const noexcept { return lo_ <= o.lo_ && o.hi_ <= hi_; }
  // Inclusion with a little absolute slack on both ends.
  constexpr bool contains(const Interval& o, double slack) const noexcept {
    return lo_ - slack <= o.lo_ && o.hi_ <= hi_ + slack;
  }

  Interval hull(const Interval& o) const { return {std::min(lo_, o.lo_), std::max(hi_, o.hi_)}; }

  friend constexpr bool operator==(const Interval& a, const Interval& b) noexcept {
    return a.lo_ == b.lo_ && a.hi_ == b.hi_;
  }

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
};

inline std::ostream& operator<<(std::ostream& os, const Interval& iv) {
  return os << '[' << iv.lo() << ", " << iv.hi() << ']';
}

}  // namespace fuzzylimit
