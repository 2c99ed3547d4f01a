#include "fuzzylimit/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "fuzzylimit/interval_arith.hpp"

namespace fuzzylimit {

namespace {

constexpr double kAgreementRelTol = 1e-12;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

struct Gap {
  double value = 0.0;
  double alpha = 1.0;
};

Gap gap_of(const FuzzyNumber& f, const FuzzyNumber& g) {
  Gap out;
  bool first = true;
  for (double a : merged_alphas(f, g)) {
    AlphaLevel level(a);
    Interval x = f.cut(level), y = g.cut(level);
    double d = std::max(std::abs(x.lo() - y.lo()), std::abs(x.hi() - y.hi()));
    if (std::isnan(d)) d = INFINITY;
    if (first || d > out.value) {
      out = {d, a};
      first = false;
    }
  }
  return out;
}

bool crisp(const FuzzyNumber& p) {
  return std::all_of(p.levels().begin(), p.levels().end(), [](const AlphaCut& c) { return c.cut.degenerate(); });
}

std::string describe(const LimitResult& r) {
  std::string s = outcome_name(r.outcome);
  if (const auto* n = std::get_if<NoLimit>(&r.outcome)) s += "(" + std::string(reason_name(n->reason)) + ")";
  if (const auto* u = std::get_if<Undetermined>(&r.outcome)) s += ": " + u->detail;
  return s;
}

TheoremReport inapplicable(Theorem t, std::string notes) {
  TheoremReport r{t};
  r.status = Status::Inapplicable;
  r.notes = std::move(notes);
  return r;
}

// Compares a computed limit against the value the theorem predicts.
TheoremReport compare(Theorem t, const LimitResult& lhs, const FuzzyNumber& rhs, const LimitConfig& cfg,
                      bool dependency_possible, const std::string& what) {
  TheoremReport r{t};
  r.rhs = rhs;
  if (std::holds_alternative<Undetermined>(lhs.outcome))
    return inapplicable(t, what + " could not be determined: " + describe(lhs));
  if (!lhs.converged()) {
    r.status = Status::Fails;
    r.max_alpha_gap = INFINITY;
    r.witness_alpha = 1.0;
    r.notes = what + " does not converge: " + describe(lhs);
    return r;
  }
  r.lhs = lhs.value();
  Gap g = gap_of(*r.lhs, rhs);
  r.max_alpha_gap = g.value;
  if (g.value <= suite_tolerance(cfg)) {
    r.status = Status::Holds;
    return r;
  }
  r.witness_alpha = g.alpha;
  if (dependency_possible) {
    r.status = Status::Inapplicable;
    r.known_dependency = true;
    r.notes = "dependency effect: repeated operands widen " + what + " by " + fmt(g.value) + " at alpha=" +
              fmt(g.alpha);
    return r;
  }
  r.status = Status::Fails;
  r.notes = what + " differs from the predicted value by " + fmt(g.value) + " at alpha=" + fmt(g.alpha);
  return r;
}

std::vector<double> probe_alphas(const LimitConfig& cfg) { return cfg.grid.alphas(); }

// Boxes approaching p from both sides at every level, as used by the
// limit schedule.
template <class Visit>
void for_each_probe_box(const FuzzyNumber& p, const LimitConfig& cfg, Visit visit) {
  for (double a : probe_alphas(cfg)) {
    const Interval c = p.cut(AlphaLevel(a));
    for (int k = 0; k < cfg.max_steps; ++k) {
      const double h = cfg.h0 * std::pow(cfg.ratio, k);
      const double rl = c.lo() + cfg.ratio * h, rh = c.hi() + h;
      const double ll = c.lo() - h, lh = c.hi() - cfg.ratio * h;
      bool any = false;
      if (rl > c.lo() && rh > c.hi()) {
        any = true;
        if (!visit(a, Interval(rl, rh))) return;
      }
      if (ll < c.lo() && lh < c.hi()) {
        any = true;
        if (!visit(a, Interval(ll, lh))) return;
      }
      if (!any) break;
    }
  }
}

std::optional<Interval> try_eval(const Expr& e, const Interval& box, const EvalMode& mode, double alpha) {
  try {
    return vertex_eval(e, box, mode, alpha).result;
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::string box_note(double alpha, const Interval& box) {
  std::ostringstream os;
  os.precision(12);
  os << "alpha=" << alpha << " box " << box;
  return os.str();
}

// f <= g componentwise on every probe box; returns the first violation.
std::optional<std::string> leq_on_probes(const Expr& f, const Expr& g, const FuzzyNumber& p, const LimitConfig& cfg,
                                         const EvalMode& mode) {
  std::optional<std::string> bad;
  for_each_probe_box(p, cfg, [&](double a, const Interval& box) {
    auto vf = try_eval(f, box, mode, a);
    auto vg = try_eval(g, box, mode, a);
    if (!vf || !vg) return true;
    const double slack = 1e-12 * std::max({1.0, std::abs(vf->lo()), std::abs(vg->hi())});
    if (vf->lo() > vg->lo() + slack || vf->hi() > vg->hi() + slack) {
      bad = box_note(a, box) + ": " + print(f) + " exceeds " + print(g);
      return false;
    }
    return true;
  });
  return bad;
}

bool same_class(const Outcome& a, const Outcome& b) {
  if (a.index() != b.index()) return false;
  if (const auto* x = std::get_if<NoLimit>(&a)) return x->reason == std::get<NoLimit>(b).reason;
  return true;
}

}  // namespace

const char* theorem_name(Theorem t) {
  switch (t) {
    case Theorem::Uniqueness: return "Uniqueness";
    case Theorem::SumRule: return "SumRule";
    case Theorem::ScalarRule: return "ScalarRule";
    case Theorem::ProductRule: return "ProductRule";
    case Theorem::QuotientRule: return "QuotientRule";
    case Theorem::Composition: return "Composition";
    case Theorem::Agreement: return "Agreement";
    case Theorem::Comparison: return "Comparison";
    case Theorem::Squeeze: return "Squeeze";
    case Theorem::OneSidedEquiv: return "OneSidedEquiv";
  }
  return "?";
}

const char* status_name(Status s) {
  switch (s) {
    case Status::Holds: return "Holds";
    case Status::Fails: return "Fails";
    case Status::Inapplicable: return "Inapplicable";
  }
  return "?";
}

std::vector<TheoremReport> check_limit_algebra(const Expr& f, const Expr& g, const FuzzyNumber& a,
                                               const FuzzyNumber& p, const LimitConfig& cfg, const EvalMode& mode) {
  const ApproachSpec ap = ApproachSpec::at(p);
  const Theorem all[] = {Theorem::SumRule, Theorem::ScalarRule, Theorem::ProductRule, Theorem::QuotientRule};
  const LimitResult lf = fuzzy_limit(f, ap, mode, cfg);
  const LimitResult lg = fuzzy_limit(g, ap, mode, cfg);
  if (!lf.converged() || !lg.converged()) {
    std::vector<TheoremReport> out;
    const std::string why = !lf.converged() ? "lim f is " + describe(lf) : "lim g is " + describe(lg);
    for (Theorem t : all) out.push_back(inapplicable(t, why));
    return out;
  }
  const FuzzyNumber& F = lf.value();
  const FuzzyNumber& G = lg.value();
  const bool dep = !crisp(p);

  std::vector<TheoremReport> out;
  out.push_back(compare(Theorem::SumRule, fuzzy_limit(f + g, ap, mode, cfg), fuzzy_add(F, G), cfg, dep, "lim(f + g)"));
  out.push_back(compare(Theorem::ScalarRule, fuzzy_limit(constant(a) * f, ap, mode, cfg), fuzzy_mul(a, F), cfg, dep,
                        "lim(A*f)"));
  out.push_back(compare(Theorem::ProductRule, fuzzy_limit(f * g, ap, mode, cfg), fuzzy_mul(F, G), cfg, dep,
                        "lim(f*g)"));
  for (const auto& l : G.levels()) {
    const double t = suite_tolerance(cfg);
    if (l.cut.lo() <= t && l.cut.hi() >= -t) {
      out.push_back(inapplicable(Theorem::QuotientRule, "lim g contains 0 in its cut at alpha=" + fmt(l.alpha)));
      return out;
    }
  }
  out.push_back(compare(Theorem::QuotientRule, fuzzy_limit(f / g, ap, mode, cfg), fuzzy_div(F, G), cfg, dep,
                        "lim(f/g)"));
  return out;
}

TheoremReport check_composition(const Expr& f, const Expr& g, const FuzzyNumber& p, const LimitConfig& cfg,
                                const EvalMode& mode, Side side) {
  const Theorem t = Theorem::Composition;
  std::optional<Expr> fg;
  try {
    fg = substitute(f, g);
  } catch (const Error& e) {
    return inapplicable(t, std::string("substitution failed: ") + e.what());
  }
  if (slot_width(*fg) > kMaxVertexSlots && mode.kind == EvalMode::Kind::PaperVertex)
    return inapplicable(t, "composed expression exceeds the vertex slot cap");

  const ApproachSpec ap = ApproachSpec::at(p, side);
  const LimitResult lg = fuzzy_limit(g, ap, mode, cfg);
  if (!lg.converged()) return inapplicable(t, "lim g is " + describe(lg));
  const FuzzyNumber& L = lg.value();

  // continuity of f at L: its limit there equals its value there
  std::optional<FuzzyNumber> fl;
  try {
    fl = eval_fuzzy(f, L, mode);
  } catch (const Error& e) {
    return inapplicable(t, std::string("f cannot be evaluated at lim g: ") + e.what());
  }
  const LimitResult lf_at = fuzzy_limit(f, ApproachSpec::at(L), mode, cfg);
  if (!lf_at.converged()) return inapplicable(t, "f has no limit at lim g: " + describe(lf_at));
  if (gap_of(lf_at.value(), *fl).value > suite_tolerance(cfg))
    return inapplicable(t, "f is not continuous at lim g");

  return compare(t, fuzzy_limit(*fg, ap, mode, cfg), *fl, cfg, !crisp(p), "lim f(g(x))");
}

TheoremReport check_agreement(const Expr& f, const Expr& g, const FuzzyNumber& p, const LimitConfig& cfg,
                              const EvalMode& mode) {
  const Theorem t = Theorem::Agreement;
  std::optional<std::string> witness;
  for_each_probe_box(p, cfg, [&](double a, const Interval& box) {
    auto vf = try_eval(f, box, mode, a);
    auto vg = try_eval(g, box, mode, a);
    if (!vf && !vg) return true;
    bool same = vf && vg;
    if (same) {
      auto close = [](double x, double y) {
        return std::abs(x - y) <= kAgreementRelTol * std::max({1.0, std::abs(x), std::abs(y)});
      };
      same = close(vf->lo(), vg->lo()) && close(vf->hi(), vg->hi());
    }
    if (!same) {
      std::ostringstream os;
      os.precision(12);
      os << "functions differ on " << box_note(a, box) << ": ";
      if (vf) os << *vf; else os << "undefined";
      os << " vs ";
      if (vg) os << *vg; else os << "undefined";
      witness = os.str();
      return false;
    }
    return true;
  });
  if (witness) return inapplicable(t, *witness);

  const ApproachSpec ap = ApproachSpec::at(p);
  const LimitResult lf = fuzzy_limit(f, ap, mode, cfg);
  const LimitResult lg = fuzzy_limit(g, ap, mode, cfg);
  if (!lg.converged()) {
    TheoremReport r{t};
    r.status = same_class(lf.outcome, lg.outcome) ? Status::Holds : Status::Fails;
    if (r.status == Status::Fails) {
      r.witness_alpha = 1.0;
      r.max_alpha_gap = INFINITY;
    }
    r.notes = "limits: " + describe(lf) + " and " + describe(lg);
    return r;
  }
  return compare(t, lf, lg.value(), cfg, false, "lim f");
}

std::vector<TheoremReport> check_order_theorems(const Expr& f, const Expr& g, const std::optional<Expr>& h,
                                                const FuzzyNumber& p, const LimitConfig& cfg,
                                                const EvalMode& mode) {
  std::vector<TheoremReport> out;
  const ApproachSpec ap = ApproachSpec::at(p);
  const LimitResult lf = fuzzy_limit(f, ap, mode, cfg);
  const LimitResult lg = fuzzy_limit(g, ap, mode, cfg);
  const auto fg_violation = leq_on_probes(f, g, p, cfg, mode);

  {
    TheoremReport r{Theorem::Comparison};
    if (fg_violation) {
      r = inapplicable(Theorem::Comparison, "hypothesis f <= g fails at " + *fg_violation);
    } else if (!lf.converged() || !lg.converged()) {
      r = inapplicable(Theorem::Comparison, "limits: " + describe(lf) + " and " + describe(lg));
    } else {
      r.lhs = lf.value();
      r.rhs = lg.value();
      // size of the order violation, zero when lim f <= lim g
      Gap worst;
      for (double a : merged_alphas(*r.lhs, *r.rhs)) {
        Interval x = r.lhs->cut(AlphaLevel(a)), y = r.rhs->cut(AlphaLevel(a));
        double v = std::max({0.0, x.lo() - y.lo(), x.hi() - y.hi()});
        if (v > worst.value) worst = {v, a};
      }
      r.max_alpha_gap = worst.value;
      if (worst.value <= suite_tolerance(cfg)) {
        r.status = Status::Holds;
      } else {
        r.status = Status::Fails;
        r.witness_alpha = worst.alpha;
        r.notes = "lim f exceeds lim g by " + fmt(worst.value);
      }
    }
    out.push_back(std::move(r));
  }

  if (!h) return out;
  const Theorem t = Theorem::Squeeze;
  if (fg_violation) {
    out.push_back(inapplicable(t, "hypothesis f <= g fails at " + *fg_violation));
  } else if (auto v = leq_on_probes(f, *h, p, cfg, mode)) {
    out.push_back(inapplicable(t, "hypothesis f <= h fails at " + *v));
  } else if (auto w = leq_on_probes(*h, g, p, cfg, mode)) {
    out.push_back(inapplicable(t, "hypothesis h <= g fails at " + *w));
  } else if (!lf.converged() || !lg.converged()) {
    out.push_back(inapplicable(t, "limits: " + describe(lf) + " and " + describe(lg)));
  } else if (gap_of(lf.value(), lg.value()).value > suite_tolerance(cfg)) {
    out.push_back(inapplicable(t, "lim f and lim g differ"));
  } else {
    TheoremReport r = compare(t, fuzzy_limit(*h, ap, mode, cfg), lf.value(), cfg, false, "lim h");
    if (r.status == Status::Holds) r.notes = "common limit reached by h";
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<TheoremReport> check_uniqueness_and_sides(const Expr& e, const ApproachSpec& approach,
                                                      const LimitConfig& cfg, const EvalMode& mode) {
  std::vector<TheoremReport> out;

  {
    LimitConfig a = cfg, b = cfg;
    a.h0 = 0.1;
    a.ratio = 0.5;
    b.h0 = 0.05;
    b.ratio = 0.7;
    // the slower schedule needs more steps to reach the same offsets
    b.max_steps = static_cast<int>(std::ceil(cfg.max_steps * std::log(0.5) / std::log(0.7)));
    const LimitResult ra = fuzzy_limit(e, approach, mode, a);
    const LimitResult rb = fuzzy_limit(e, approach, mode, b);
    TheoremReport r{Theorem::Uniqueness};
    if (std::holds_alternative<Undetermined>(ra.outcome) || std::holds_alternative<Undetermined>(rb.outcome)) {
      r = inapplicable(Theorem::Uniqueness, "schedules: " + describe(ra) + " / " + describe(rb));
    } else if (ra.converged() && rb.converged()) {
      r = compare(Theorem::Uniqueness, ra, rb.value(), cfg, false, "limit under (0.1, 0.5)");
    } else if (same_class(ra.outcome, rb.outcome)) {
      r.status = Status::Holds;
      r.notes = "both schedules give " + describe(ra);
    } else {
      r.status = Status::Fails;
      r.witness_alpha = 1.0;
      r.max_alpha_gap = INFINITY;
      r.notes = "schedules disagree: " + describe(ra) + " vs " + describe(rb);
    }
    out.push_back(std::move(r));
  }

  const Theorem t = Theorem::OneSidedEquiv;
  if (approach.infinite()) {
    out.push_back(inapplicable(t, "one-sided limits are not defined at infinity"));
    return out;
  }
  const FuzzyNumber& p = *approach.point;
  const LimitResult both = fuzzy_limit(e, ApproachSpec::at(p, Side::Both), mode, cfg);
  const LimitResult left = fuzzy_limit(e, ApproachSpec::at(p, Side::Left), mode, cfg);
  const LimitResult right = fuzzy_limit(e, ApproachSpec::at(p, Side::Right), mode, cfg);
  TheoremReport r{t};
  if (std::holds_alternative<Undetermined>(left.outcome) || std::holds_alternative<Undetermined>(right.outcome)) {
    out.push_back(inapplicable(t, "one-sided limits: " + describe(left) + " / " + describe(right)));
    return out;
  }
  const bool sides_agree_conv = left.converged() && right.converged() &&
                                gap_of(left.value(), right.value()).value <= cfg.tol;
  const bool sides_disagree = !same_class(left.outcome, right.outcome) ||
                              (left.converged() && right.converged() && !sides_agree_conv);
  const auto* nl = std::get_if<NoLimit>(&both.outcome);
  const bool both_mismatch = nl && nl->reason == NoLimitReason::OneSidedMismatch;
  const bool ok = (both.converged() == sides_agree_conv) && (both_mismatch == sides_disagree);
  if (both.converged()) {
    r.lhs = both.value();
    if (left.converged()) {
      r.rhs = left.value();
      Gap g1 = gap_of(both.value(), left.value());
      Gap g2 = right.converged() ? gap_of(both.value(), right.value()) : Gap{};
      r.max_alpha_gap = std::max(g1.value, g2.value);
      r.witness_alpha = g1.value >= g2.value ? g1.alpha : g2.alpha;
    }
  }
  if (ok && r.max_alpha_gap <= suite_tolerance(cfg)) {
    r.status = Status::Holds;
    r.notes = "two-sided " + describe(both) + "; left " + describe(left) + "; right " + describe(right);
    r.witness_alpha.reset();
  } else {
    r.status = Status::Fails;
    if (!r.witness_alpha) r.witness_alpha = 1.0;
    r.notes = "two-sided " + describe(both) + " inconsistent with left " + describe(left) + " and right " +
              describe(right);
  }
  out.push_back(std::move(r));
  return out;
}

CampaignSummary run_algebra_campaign(std::uint64_t seed, int n_cases, const LimitConfig& cfg, const EvalMode& mode,
                                     const EvalMode& product_mode) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> centre(-3.0, 3.0), spread(0.0, 0.5), point(-2.0, 2.0);
  std::uniform_int_distribution<int> degree(0, 4);

  auto coeff = [&] {
    double b = std::round(centre(rng) * 8.0) / 8.0;
    double l = std::round(spread(rng) * 8.0) / 8.0, r = std::round(spread(rng) * 8.0) / 8.0;
    return from_triangular(b - l, b, b + r, cfg.grid);
  };
  auto poly = [&] {
    const int d = degree(rng);
    std::optional<Expr> acc;
    for (int k = 0; k <= d; ++k) {
      Expr term = k == 0 ? constant(coeff()) : constant(coeff()) * (k == 1 ? var() : pow(var(), k));
      acc = acc ? *acc + term : term;
    }
    return *acc;
  };

  CampaignSummary sum;
  for (int c = 0; c < n_cases; ++c) {
    const Expr f = poly(), g = poly();
    const FuzzyNumber a = coeff();
    const double x0 = std::round(point(rng) * 16.0) / 16.0;
    const FuzzyNumber p = from_singleton(x0, cfg.grid);

    CampaignCase cc{print(f), print(g), x0, {}};
    auto base = check_limit_algebra(f, g, a, p, cfg, mode);
    auto rig = check_limit_algebra(f, g, a, p, cfg, product_mode);
    cc.reports = {base[0], base[1], rig[2], rig[3]};
    for (const auto& r : cc.reports) {
      if (r.status == Status::Holds) ++sum.holds;
      if (r.status == Status::Fails) ++sum.fails;
      if (r.status == Status::Inapplicable) ++sum.inapplicable;
    }
    ++sum.cases;
    if (std::any_of(cc.reports.begin(), cc.reports.end(), [](const TheoremReport& r) { return r.status == Status::Fails; }))
      sum.failures.push_back(cc);

    if (!(mode == EvalMode::paper())) base = check_limit_algebra(f, g, a, p, cfg, EvalMode::paper());
    std::vector<TheoremReport> dep;
    for (int i : {2, 3})
      if (base[i].status == Status::Fails || base[i].known_dependency) dep.push_back(base[i]);
    if (!dep.empty()) sum.dependency_cases.push_back({cc.f, cc.g, x0, dep});
  }
  return sum;
}

}  // namespace fuzzylimit
