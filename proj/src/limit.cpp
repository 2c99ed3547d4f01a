#include "fuzzylimit/limit.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

namespace fuzzylimit {

namespace {

constexpr int kTrendWindow = 3;      // residuals below tol needed to converge
constexpr int kBlowupWindow = 5;     // monotone steps beyond blowup
constexpr int kOscillationWindow = 8;
constexpr int kProbes = 32;
constexpr double kProbeDecades = 3.0;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double step_h(const LimitConfig& cfg, int k) { return cfg.h0 * std::pow(cfg.ratio, k); }

// Box at offset h approaching the cut from one side; nullopt once the box
// can no longer be told apart from the target in floating point.
std::optional<Interval> side_box(const Interval& p, Side side, double ratio, double h) {
  if (side == Side::Right) {
    double lo = p.lo() + ratio * h, hi = p.hi() + h;
    if (!(lo > p.lo()) || !(hi > p.hi())) return std::nullopt;
    return Interval(lo, hi);
  }
  double lo = p.lo() - h, hi = p.hi() - ratio * h;
  if (!(lo < p.lo()) || !(hi < p.hi())) return std::nullopt;
  return Interval(lo, hi);
}

std::optional<Interval> infinity_box(ApproachSpec::Target t, double m) {
  if (!std::isfinite(2.0 * m)) return std::nullopt;
  return t == ApproachSpec::Target::PlusInfinity ? Interval(m, 2.0 * m) : Interval(-2.0 * m, -m);
}

// One schedule for one alpha and one side.
struct SideRun {
  enum Kind { Conv, DivPlus, DivMinus, Osc, Undet } kind = Undet;
  Interval value;
  std::vector<double> residuals;
  std::string detail;
};

double aitken(double x0, double x1, double x2) {
  const double d1 = x1 - x0, d2 = x2 - x1;
  const double denom = d2 - d1;
  if (d2 == 0.0 || !std::isfinite(denom) || std::abs(denom) < DBL_MIN) return x2;
  const double corr = d2 * d2 / denom;
  if (!std::isfinite(corr) || std::abs(corr) > 10.0 * std::abs(d2)) return x2;
  return x2 - corr;
}

Interval extrapolate(const std::vector<Interval>& v) {
  const std::size_t m = v.size();
  double lo = aitken(v[m - 3].lo(), v[m - 2].lo(), v[m - 1].lo());
  double hi = aitken(v[m - 3].hi(), v[m - 2].hi(), v[m - 1].hi());
  if (lo > hi) lo = hi = 0.5 * (lo + hi);
  return {lo, hi};
}

using BoxAt = std::function<std::optional<Interval>(int)>;

SideRun run_schedule(const Expr& e, const BoxAt& box_at, const EvalMode& mode, const LimitConfig& cfg,
                     double alpha) {
  SideRun run;
  std::vector<Interval> vals;    // contiguous successful steps
  std::vector<double> recent;    // residuals between contiguous steps
  std::optional<std::string> first_error;
  bool any_ok = false;
  const double floor = 1e-3 * cfg.tol;

  for (int k = 0; k < cfg.max_steps; ++k) {
    auto box = box_at(k);
    if (!box) break;
    Interval v;
    try {
      v = vertex_eval(e, *box, mode, alpha).result;
    } catch (const Error& err) {
      if (!first_error) first_error = "step " + std::to_string(k) + ": " + err.what();
      vals.clear();
      recent.clear();
      continue;
    }
    any_ok = true;
    if (!vals.empty()) {
      double r = pair_norm(matched_distance_pair(v, vals.back()));
      run.residuals.push_back(r);
      recent.push_back(r);
    }
    vals.push_back(v);

    if (vals.size() >= kBlowupWindow) {
      const auto first = vals.end() - kBlowupWindow;
      bool up = true, down = true, split = true;
      for (auto it = first; it != vals.end(); ++it) {
        up = up && it->lo() > cfg.blowup;
        down = down && it->hi() < -cfg.blowup;
        split = split && it->lo() < -cfg.blowup && it->hi() > cfg.blowup;
        if (it != first) {
          const Interval& prev = *(it - 1);
          up = up && it->lo() >= prev.lo() && it->hi() >= prev.hi();
          down = down && it->lo() <= prev.lo() && it->hi() <= prev.hi();
        }
      }
      if (up || down) {
        run.kind = up ? SideRun::DivPlus : SideRun::DivMinus;
        run.detail = "bounds beyond " + fmt(cfg.blowup) + " for " + std::to_string(kBlowupWindow) + " steps";
        return run;
      }
      if (split) {
        run.kind = SideRun::Osc;
        run.detail = "lower bound diverges to -inf while upper bound diverges to +inf";
        return run;
      }
    }

    if (recent.size() >= kTrendWindow) {
      const std::size_t m = recent.size();
      bool small = true, settled = true;
      for (std::size_t i = m - kTrendWindow; i < m; ++i) {
        small = small && recent[i] < cfg.tol;
        if (i > m - kTrendWindow) settled = settled && recent[i] <= recent[i - 1] + floor;
      }
      if (small && settled) {
        run.kind = SideRun::Conv;
        run.value = extrapolate(vals);
        return run;
      }
    }
  }

  if (!any_ok) {
    run.kind = SideRun::Undet;
    run.detail = "every schedule step failed; first error at " + first_error.value_or("?");
    return run;
  }
  // oscillation: the residual trend keeps reversing direction
  const std::size_t m = run.residuals.size();
  const std::size_t from = m > kOscillationWindow ? m - kOscillationWindow : 0;
  int reversals = 0, last_dir = 0;
  for (std::size_t i = from + 1; i < m; ++i) {
    const double d = run.residuals[i] - run.residuals[i - 1];
    const int dir = d > 0 ? 1 : (d < 0 ? -1 : 0);
    if (dir != 0 && last_dir != 0 && dir != last_dir) ++reversals;
    if (dir != 0) last_dir = dir;
  }
  if (reversals >= 3) {
    run.kind = SideRun::Osc;
    run.detail = "residual trend reversed " + std::to_string(reversals) + " times in the last " +
                 std::to_string(m - from) + " steps";
  } else {
    run.kind = SideRun::Undet;
    run.detail = "no classification within the schedule";
    if (m) run.detail += "; last residual " + fmt(run.residuals.back());
    if (first_error) run.detail += "; " + *first_error;
  }
  return run;
}

// Classification of one alpha level after combining sides.
struct LevelOutcome {
  enum Kind { Conv, DivPlus, DivMinus, Mismatch, Osc, Undet } kind;
  Interval value;
  std::string detail;
};

LevelOutcome from_run(const SideRun& r) {
  static constexpr LevelOutcome::Kind map[] = {LevelOutcome::Conv, LevelOutcome::DivPlus, LevelOutcome::DivMinus,
                                               LevelOutcome::Osc, LevelOutcome::Undet};
  return {map[r.kind], r.value, r.detail};
}

LevelOutcome combine_sides(const SideRun& left, const SideRun& right, double tol) {
  if (left.kind == SideRun::Undet || right.kind == SideRun::Undet) {
    const SideRun& u = left.kind == SideRun::Undet ? left : right;
    return {LevelOutcome::Undet, {}, std::string(&u == &left ? "left: " : "right: ") + u.detail};
  }
  if (left.kind == SideRun::Osc || right.kind == SideRun::Osc) {
    const SideRun& o = left.kind == SideRun::Osc ? left : right;
    return {LevelOutcome::Osc, {}, std::string(&o == &left ? "left: " : "right: ") + o.detail};
  }
  if (left.kind == SideRun::Conv && right.kind == SideRun::Conv) {
    double gap = std::max(std::abs(left.value.lo() - right.value.lo()), std::abs(left.value.hi() - right.value.hi()));
    if (gap <= tol) {
      double lo = 0.5 * (left.value.lo() + right.value.lo());
      double hi = 0.5 * (left.value.hi() + right.value.hi());
      return {LevelOutcome::Conv, Interval(lo, std::max(lo, hi)), {}};
    }
    std::ostringstream os;
    os.precision(12);
    os << "left limit " << left.value << " differs from right limit " << right.value;
    return {LevelOutcome::Mismatch, {}, os.str()};
  }
  if (left.kind == right.kind) return from_run(left);
  static constexpr const char* names[] = {"converges", "diverges to +inf", "diverges to -inf", "oscillates",
                                          "undetermined"};
  return {LevelOutcome::Mismatch, {},
          std::string("left side ") + names[left.kind] + ", right side " + names[right.kind]};
}

Outcome assemble(const std::vector<double>& alphas, const std::vector<LevelOutcome>& lv, double tol,
                 bool enclosure) {
  auto first_of = [&](LevelOutcome::Kind k) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < lv.size(); ++i)
      if (lv[i].kind == k) return i;
    return std::nullopt;
  };
  auto at = [&](std::size_t i) { return "alpha=" + fmt(alphas[i]) + ": " + lv[i].detail; };

  if (auto i = first_of(LevelOutcome::Mismatch)) return NoLimit{NoLimitReason::OneSidedMismatch, at(*i)};
  if (auto i = first_of(LevelOutcome::Undet)) return Undetermined{at(*i)};
  if (auto i = first_of(LevelOutcome::Osc)) return NoLimit{NoLimitReason::Oscillation, at(*i)};

  const auto count = [&](LevelOutcome::Kind k) {
    return std::count_if(lv.begin(), lv.end(), [k](const LevelOutcome& o) { return o.kind == k; });
  };
  const auto n = static_cast<long>(lv.size());
  if (count(LevelOutcome::DivPlus) == n) return DivergesPlus{};
  if (count(LevelOutcome::DivMinus) == n) return DivergesMinus{};
  if (count(LevelOutcome::Conv) != n) {
    if (count(LevelOutcome::DivPlus) && count(LevelOutcome::DivMinus))
      return NoLimit{NoLimitReason::Oscillation, "alpha levels diverge with opposite signs"};
    return Undetermined{"alpha levels disagree between convergence and divergence"};
  }

  std::vector<AlphaCut> cuts;
  for (std::size_t i = 0; i < lv.size(); ++i) cuts.push_back({alphas[i], lv[i].value});
  // enclosure modes only lose nesting through misaligned subdivisions, and
  // intersecting with the cut below keeps an enclosure
  auto bad = nest_violations(cuts, tol);
  if (!bad.empty() && !enclosure) {
    std::ostringstream os;
    os << "limit cuts not nested between alpha=" << bad.front().alpha << " and alpha=" << bad.front().beta
       << " (by " << bad.front().amount << ")";
    if (bad.size() > 1) os << " and " << bad.size() - 1 << " more pairs";
    return NoLimit{NoLimitReason::NonNested, os.str()};
  }
  hull_repair(cuts);
  return Converged{reconstruct(std::move(cuts))};
}

struct LevelWork {
  SideRun left, right;  // right doubles as the only run for one-sided / infinite targets
};

BoxAt point_schedule(const Interval& p, Side side, const LimitConfig& cfg) {
  return [p, side, cfg](int k) { return side_box(p, side, cfg.ratio, step_h(cfg, k)); };
}

BoxAt infinity_schedule(ApproachSpec::Target t, const LimitConfig& cfg) {
  return [t, cfg](int k) { return infinity_box(t, 1.0 / step_h(cfg, k)); };
}

LevelWork run_level(const Expr& e, const ApproachSpec& ap, const EvalMode& mode, const LimitConfig& cfg,
                    double alpha) {
  LevelWork w;
  if (ap.infinite()) {
    w.right = run_schedule(e, infinity_schedule(ap.target, cfg), mode, cfg, alpha);
    return w;
  }
  const Interval p = ap.point->cut(AlphaLevel(alpha));
  if (ap.side != Side::Right) w.left = run_schedule(e, point_schedule(p, Side::Left, cfg), mode, cfg, alpha);
  if (ap.side != Side::Left) w.right = run_schedule(e, point_schedule(p, Side::Right, cfg), mode, cfg, alpha);
  return w;
}

template <bool Parallel>
LimitResult limit_impl(const Expr& e, const ApproachSpec& ap, const EvalMode& mode, const LimitConfig& cfg) {
  ap.validate();
  cfg.validate();
  const std::vector<double> alphas = cfg.grid.alphas();
  const long n = static_cast<long>(alphas.size());
  std::vector<LevelWork> work(alphas.size());
  if constexpr (Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) work[i] = run_level(e, ap, mode, cfg, alphas[i]);
  } else {
    for (long i = 0; i < n; ++i) work[i] = run_level(e, ap, mode, cfg, alphas[i]);
  }

  LimitResult res{Undetermined{}, {}, std::nullopt, std::nullopt};
  res.certificate.kind = Certificate::Kind::None;
  std::vector<LevelOutcome> combined, lefts, rights;
  for (long i = 0; i < n; ++i) {
    const LevelWork& w = work[i];
    res.certificate.levels.push_back({alphas[i], {}, w.left.residuals, w.right.residuals});
    if (!ap.infinite() && ap.side == Side::Both) {
      combined.push_back(combine_sides(w.left, w.right, cfg.tol));
      lefts.push_back(from_run(w.left));
      rights.push_back(from_run(w.right));
    } else {
      combined.push_back(from_run(ap.side == Side::Left && !ap.infinite() ? w.left : w.right));
    }
  }
  const bool enclosure = mode.kind != EvalMode::Kind::PaperVertex;
  res.outcome = assemble(alphas, combined, cfg.tol, enclosure);
  if (!lefts.empty()) {
    res.left = assemble(alphas, lefts, cfg.tol, enclosure);
    res.right = assemble(alphas, rights, cfg.tol, enclosure);
  }
  return res;
}

// ---- certification -------------------------------------------------------

struct ProbeSetup {
  const Expr& e;
  const ApproachSpec& ap;
  const EvalMode& mode;
  const LimitConfig& cfg;
};

double gauge(const ProbeSetup& s, const Interval& box, double alpha, const Interval& target) {
  try {
    Interval v = vertex_eval(s.e, box, s.mode, alpha).result;
    return pair_norm(matched_distance_pair(v, target));
  } catch (const Error&) {
    return INFINITY;
  }
}

// Every probe inside the region of witness index k stays within eps.
bool region_passes(const ProbeSetup& s, int k, double alpha, const Interval& p, const Interval& lcut, double eps) {
  const double h = step_h(s.cfg, k);
  for (int j = 0; j < kProbes; ++j) {
    const double f = std::pow(10.0, -kProbeDecades * j / (kProbes - 1));
    if (s.ap.infinite()) {
      const double m = (1.0 / h) / f;
      auto box = infinity_box(s.ap.target, m);
      if (!box || !(gauge(s, *box, alpha, lcut) < eps)) return false;
      // the near end on its own as well
      const double near = s.ap.target == ApproachSpec::Target::PlusInfinity ? m : -m;
      if (!(gauge(s, Interval::point(near), alpha, lcut) < eps)) return false;
      continue;
    }
    for (Side side : {Side::Left, Side::Right}) {
      if (s.ap.side != Side::Both && s.ap.side != side) continue;
      // schedule-shaped box, then the cut shifted by the whole offset so
      // both endpoints sit at the edge of the witness region
      auto box = side_box(p, side, s.cfg.ratio, h * f);
      if (!box || !(gauge(s, *box, alpha, lcut) < eps)) return false;
      auto shifted = side_box(p, side, 1.0, h * f);
      if (!shifted || !(gauge(s, *shifted, alpha, lcut) < eps)) return false;
    }
  }
  return true;
}

AlphaEvidence certify_level(const ProbeSetup& s, const std::vector<double>& eps_grid, double alpha,
                            const Interval& lcut) {
  AlphaEvidence ev{alpha, {}, {}, {}};
  const Interval p = s.ap.infinite() ? Interval() : s.ap.point->cut(AlphaLevel(alpha));
  int start = 0;
  for (double eps : eps_grid) {
    std::optional<int> found;
    for (int k = start; k < s.cfg.max_steps; ++k) {
      if (region_passes(s, k, alpha, p, lcut, eps)) {
        found = k;
        break;
      }
    }
    if (found) {
      start = *found;
      const double h = step_h(s.cfg, *found);
      ev.witnesses.push_back({eps, s.ap.infinite() ? 1.0 / h : h, true});
    } else {
      ev.witnesses.push_back({eps, std::nullopt, false});
    }
  }
  return ev;
}

}  // namespace

const char* side_name(Side s) {
  switch (s) {
    case Side::Both: return "both";
    case Side::Left: return "left";
    case Side::Right: return "right";
  }
  return "?";
}

ApproachSpec ApproachSpec::at(FuzzyNumber p, Side side) { return {Target::Point, std::move(p), side}; }
ApproachSpec ApproachSpec::plus_infinity() { return {Target::PlusInfinity, std::nullopt, Side::Both}; }
ApproachSpec ApproachSpec::minus_infinity() { return {Target::MinusInfinity, std::nullopt, Side::Both}; }

void ApproachSpec::validate() const {
  if (target == Target::Point && !point) throw ConfigError("finite approach target needs a fuzzy point");
  if (infinite() && side != Side::Both) throw ConfigError("limits at infinity are two-sided only");
}

void LimitConfig::validate() const {
  if (!(h0 > 0.0) || !std::isfinite(h0)) throw ConfigError("h0 must be positive");
  if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigError("ratio must lie in (0, 1)");
  if (max_steps < 1) throw ConfigError("max_steps must be positive");
  if (!(tol > 0.0) || !std::isfinite(tol)) throw ConfigError("tol must be positive");
  if (!(blowup > 0.0)) throw ConfigError("blowup must be positive");
  if (grid.levels < 3) throw ConfigError("grid needs at least 3 points");
}

std::vector<std::string> LimitConfig::warnings() const {
  std::vector<std::string> w;
  const double last = h0 * std::pow(ratio, max_steps);
  if (last < DBL_EPSILON)
    w.push_back("final schedule offset " + fmt(last) +
                " is below machine epsilon; late steps stop once boxes stop resolving");
  return w;
}

const char* reason_name(NoLimitReason r) {
  switch (r) {
    case NoLimitReason::OneSidedMismatch: return "OneSidedMismatch";
    case NoLimitReason::Oscillation: return "Oscillation";
    case NoLimitReason::NonNested: return "NonNested";
  }
  return "?";
}

std::string outcome_name(const Outcome& o) {
  static constexpr const char* names[] = {"Converged", "DivergesPlus", "DivergesMinus", "NoLimit", "Undetermined"};
  return names[o.index()];
}

const FuzzyNumber& LimitResult::value() const {
  if (const auto* c = std::get_if<Converged>(&outcome)) return c->value;
  throw PreconditionError("limit did not converge (" + outcome_name(outcome) + ")");
}

LimitResult fuzzy_limit(const Expr& e, const ApproachSpec& approach, const EvalMode& mode, const LimitConfig& cfg) {
  return limit_impl<true>(e, approach, mode, cfg);
}

LimitResult fuzzy_limit_serial(const Expr& e, const ApproachSpec& approach, const EvalMode& mode,
                               const LimitConfig& cfg) {
  return limit_impl<false>(e, approach, mode, cfg);
}

Certificate certify(const Expr& e, const ApproachSpec& approach, const LimitResult& limit,
                    const std::vector<double>& eps_grid, const LimitConfig& cfg, const EvalMode& mode) {
  const FuzzyNumber& value = limit.value();
  approach.validate();
  cfg.validate();
  if (eps_grid.empty()) throw ConfigError("empty epsilon grid");
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (!(eps_grid[i] > 0.0) || !std::isfinite(eps_grid[i])) throw ConfigError("epsilon values must be positive");
    if (i && !(eps_grid[i] < eps_grid[i - 1])) throw ConfigError("epsilon grid must be strictly decreasing");
  }

  const std::vector<double> alphas = value.alphas();
  const long n = static_cast<long>(alphas.size());
  std::vector<AlphaEvidence> levels(alphas.size());
  const ProbeSetup setup{e, approach, mode, cfg};
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i)
    levels[i] = certify_level(setup, eps_grid, alphas[i], value.cut(AlphaLevel(alphas[i])));

  Certificate cert;
  cert.kind = approach.infinite() ? Certificate::Kind::K : Certificate::Kind::Delta;
  cert.eps_grid = eps_grid;
  for (long i = 0; i < n; ++i) {
    for (const auto& src : limit.certificate.levels) {
      if (src.alpha == alphas[i]) {
        levels[i].residuals_left = src.residuals_left;
        levels[i].residuals_right = src.residuals_right;
      }
    }
    for (const auto& w : levels[i].witnesses)
      if (!w.certified) cert.failures.push_back({alphas[i], w.eps});
  }
  cert.levels = std::move(levels);
  return cert;
}

SequentialReport sequential_check(const Expr& e, const FuzzyNumber& p, const FuzzyNumber& limit, int n_seqs,
                                  const LimitConfig& cfg, const EvalMode& mode, std::uint64_t seed) {
  cfg.validate();
  SequentialReport rep;
  rep.n_seqs = n_seqs;

  const double ends[] = {p.base().lo(), p.base().hi(), p.core().lo(), p.core().hi()};
  auto resolvable = [&](int n) {
    const double off = 0.5 * step_h(cfg, n);
    return std::all_of(std::begin(ends), std::end(ends), [off](double x) { return x + off != x && x - off != x; });
  };
  int n_final = 0;
  for (int n = 0; n <= cfg.max_steps; ++n)
    if (resolvable(n)) n_final = n;
  rep.n_final = n_final;
  const double h = step_h(cfg, n_final);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.5, 1.0);
  for (int s = 0; s < n_seqs; ++s) {
    const int dir = (rng() & 1u) ? 1 : -1;
    const double u1 = u(rng), u2 = u(rng);
    const double small = std::min(u1, u2), large = std::max(u1, u2);
    const double a = dir > 0 ? h * small : -h * large;
    const double b = dir > 0 ? h * large : -h * small;

    std::vector<AlphaCut> shifted;
    for (const auto& l : p.levels()) shifted.push_back({l.alpha, Interval(l.cut.lo() + a, l.cut.hi() + b)});
    try {
      FuzzyNumber fx = eval_fuzzy(e, reconstruct(std::move(shifted)), mode);
      double worst = 0.0, worst_alpha = 1.0;
      for (double al : limit.alphas()) {
        Interval x = fx.cut(AlphaLevel(al)), y = limit.cut(AlphaLevel(al));
        double g = std::max(std::abs(x.lo() - y.lo()), std::abs(x.hi() - y.hi()));
        if (!(g <= worst)) {
          worst = g;
          worst_alpha = al;
        }
      }
      if (!(worst <= cfg.tol))
        rep.violations.push_back({s, dir, worst_alpha, worst, "f(p_n) stays " + fmt(worst) + " away from the limit"});
    } catch (const Error& err) {
      rep.violations.push_back({s, dir, 1.0, INFINITY, err.what()});
    }
  }
  return rep;
}

}  // namespace fuzzylimit
