#include "fuzzylimit/fuzzy_number.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fuzzylimit {

namespace {

// Level values closer than this are the same level.
constexpr double kAlphaEps = 1e-12;

Interval triangular_cut(double a, double b, double c, double alpha) {
  if (alpha == 1.0) return Interval::point(b);
  double lo = a + alpha * (b - a);
  double hi = c - alpha * (c - b);
  return {std::min(lo, b), std::max(hi, b)};
}

Interval lerp(const Interval& below, const Interval& above, double t) {
  double lo = below.lo() + t * (above.lo() - below.lo());
  double hi = below.hi() + t * (above.hi() - below.hi());
  // keep inside the bracketing cuts despite rounding
  lo = std::clamp(lo, below.lo(), above.lo());
  hi = std::clamp(hi, above.hi(), below.hi());
  return {lo, hi};
}

}  // namespace

AlphaLevel::AlphaLevel(double value) : value_(value) {
  if (!(value > 0.0 && value <= 1.0))
    throw DomainError("alpha level " + std::to_string(value) + " outside (0, 1]");
}

std::vector<double> AlphaGrid::alphas() const {
  if (levels < 3) throw InvalidShape("alpha grid needs at least 3 points (2 stored levels)");
  std::vector<double> out;
  out.reserve(stored_levels());
  const double n = static_cast<double>(levels - 1);
  for (int k = 1; k < levels; ++k) out.push_back(static_cast<double>(k) / n);
  out.back() = 1.0;
  return out;
}

DistancePair::DistancePair(double d1_, double d2_) : d1(d1_), d2(d2_) {
  if (!(d1 >= 0.0) || !(d2 >= d1)) throw InvalidValue("distance pair requires 0 <= d1 <= d2");
}

FuzzyNumber from_singleton(double r, const AlphaGrid& grid) {
  if (!std::isfinite(r)) throw InvalidValue("singleton value must be finite");
  std::vector<AlphaCut> levels;
  for (double a : grid.alphas()) levels.push_back({a, Interval::point(r)});
  return FuzzyNumber(std::move(levels), Singleton{r});
}

FuzzyNumber from_triangular(double a, double b, double c, const AlphaGrid& grid) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c))
    throw InvalidValue("triangular points must be finite");
  if (a > b || b > c) throw InvalidShape("triangular number requires a <= b <= c");
  std::vector<AlphaCut> levels;
  for (double al : grid.alphas()) levels.push_back({al, triangular_cut(a, b, c, al)});
  return FuzzyNumber(std::move(levels), Triangular{a, b, c});
}

std::vector<NestViolation> nest_violations(std::span<const AlphaCut> levels, double slack) {
  std::vector<NestViolation> out;
  for (std::size_t i = 1; i < levels.size(); ++i) {
    const Interval& lower = levels[i - 1].cut;
    const Interval& upper = levels[i].cut;
    double amount = std::max(upper.hi() - lower.hi(), lower.lo() - upper.lo());
    if (amount > slack) out.push_back({levels[i - 1].alpha, levels[i].alpha, amount});
  }
  return out;
}

void hull_repair(std::vector<AlphaCut>& levels) {
  for (std::size_t i = 1; i < levels.size(); ++i) {
    const Interval& lower = levels[i - 1].cut;
    const Interval& upper = levels[i].cut;
    double lo = std::max(upper.lo(), lower.lo());
    double hi = std::min(upper.hi(), lower.hi());
    // disjoint cuts collapse onto the nearest point of the cut below
    if (lo > hi) lo = hi = std::clamp(upper.mid(), lower.lo(), lower.hi());
    levels[i].cut = Interval(lo, hi);
  }
}

FuzzyNumber reconstruct(std::vector<AlphaCut> samples) {
  if (samples.empty()) throw InconsistentCuts("no alpha-cut samples");
  std::sort(samples.begin(), samples.end(),
            [](const AlphaCut& x, const AlphaCut& y) { return x.alpha < y.alpha; });
  for (std::size_t i = 0; i < samples.size(); ++i) {
    AlphaLevel checked(samples[i].alpha);
    (void)checked;
    if (i > 0 && samples[i].alpha - samples[i - 1].alpha < kAlphaEps)
      throw InconsistentCuts("duplicate alpha level " + std::to_string(samples[i].alpha));
  }
  if (std::abs(samples.back().alpha - 1.0) > kAlphaEps)
    throw InconsistentCuts("alpha-cut samples lack the core level alpha = 1");
  samples.back().alpha = 1.0;
  if (auto v = nest_violations(samples); !v.empty())
    throw InconsistentCuts("alpha-cuts not nested between alpha=" + std::to_string(v.front().alpha) +
                           " and alpha=" + std::to_string(v.front().beta));

  const double r = samples.front().cut.lo();
  bool crisp = std::all_of(samples.begin(), samples.end(), [r](const AlphaCut& s) {
    return s.cut.lo() == r && s.cut.hi() == r;
  });
  Shape shape = crisp ? Shape{Singleton{r}} : Shape{General{}};
  return FuzzyNumber(std::move(samples), shape);
}

std::vector<AlphaCut> decompose(const FuzzyNumber& f) { return f.levels(); }

std::vector<double> FuzzyNumber::alphas() const {
  std::vector<double> out;
  out.reserve(levels_.size());
  for (const auto& l : levels_) out.push_back(l.alpha);
  return out;
}

Interval FuzzyNumber::cut(AlphaLevel level) const {
  const double alpha = level.value();
  if (const auto* s = std::get_if<Singleton>(&shape_)) return Interval::point(s->value);
  if (const auto* t = std::get_if<Triangular>(&shape_)) return triangular_cut(t->a, t->b, t->c, alpha);

  auto it = std::lower_bound(levels_.begin(), levels_.end(), alpha,
                             [](const AlphaCut& c, double a) { return c.alpha < a - kAlphaEps; });
  if (it == levels_.end()) return levels_.back().cut;
  if (std::abs(it->alpha - alpha) <= kAlphaEps) return it->cut;
  // below the lowest stored level the lowest cut is kept
  if (it == levels_.begin()) return it->cut;
  const AlphaCut& below = *(it - 1);
  const double t = (alpha - below.alpha) / (it->alpha - below.alpha);
  return lerp(below.cut, it->cut, t);
}

double FuzzyNumber::membership(double x) const {
  for (auto it = levels_.rbegin(); it != levels_.rend(); ++it)
    if (it->cut.contains(x)) return it->alpha;
  return 0.0;
}

Interval alpha_cut(const FuzzyNumber& f, double alpha) { return f.cut(AlphaLevel(alpha)); }
double membership(const FuzzyNumber& f, double x) { return f.membership(x); }

DistancePair distance_pair(const Interval& a, const Interval& b) {
  const double d[4] = {std::abs(a.lo() - b.lo()), std::abs(a.lo() - b.hi()),
                       std::abs(a.hi() - b.lo()), std::abs(a.hi() - b.hi())};
  auto [mn, mx] = std::minmax_element(std::begin(d), std::end(d));
  return {*mn, *mx};
}

DistancePair matched_distance_pair(const Interval& a, const Interval& b) {
  double lo = std::abs(a.lo() - b.lo());
  double hi = std::abs(a.hi() - b.hi());
  if (std::isnan(lo)) lo = INFINITY;
  if (std::isnan(hi)) hi = INFINITY;
  return {std::min(lo, hi), std::max(lo, hi)};
}

double pair_norm(const DistancePair& p) { return std::hypot(p.d1, p.d2); }

std::vector<double> merged_alphas(const FuzzyNumber& f, const FuzzyNumber& g) {
  std::vector<double> out = f.alphas();
  for (double a : g.alphas()) out.push_back(a);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double x, double y) { return std::abs(x - y) <= kAlphaEps; }),
            out.end());
  return out;
}

bool fuzzy_leq(const FuzzyNumber& f, const FuzzyNumber& g, double slack) {
  for (double a : merged_alphas(f, g)) {
    AlphaLevel level(a);
    Interval x = f.cut(level), y = g.cut(level);
    if (x.lo() > y.lo() + slack || x.hi() > y.hi() + slack) return false;
  }
  return true;
}

double max_endpoint_gap(const FuzzyNumber& f, const FuzzyNumber& g) {
  double gap = 0.0;
  for (double a : merged_alphas(f, g)) {
    AlphaLevel level(a);
    Interval x = f.cut(level), y = g.cut(level);
    gap = std::max({gap, std::abs(x.lo() - y.lo()), std::abs(x.hi() - y.hi())});
  }
  return gap;
}

bool approx_equal(const FuzzyNumber& f, const FuzzyNumber& g, double tau) {
  return max_endpoint_gap(f, g) <= tau;
}

}  // namespace fuzzylimit
