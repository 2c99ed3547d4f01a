#include "fuzzylimit/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "fuzzylimit/fuzzy_json.hpp"
#include "fuzzylimit/parser.hpp"
#include "fuzzylimit/report_json.hpp"

namespace fuzzylimit {

namespace {

constexpr int kSchemaVersion = 1;
constexpr int kDefaultLevels = 101;
constexpr int kCampaignLevels = 11;

// Signals an input problem already reported on stderr.
struct UsageFailure {};

struct Common {
  std::string mode = "paper";
  std::optional<int> levels;
  std::string format = "json";
};

struct LimitArgs {
  std::string expr, at, side = "both";
  double tol = 1e-6, h0 = 0.1, ratio = 0.5;
  int max_steps = 60;
  std::string certify;
  std::uint64_t seed = 42;
  int sequential = 0;
  bool verbose = false;
};

struct EvalArgs {
  std::string expr, x;
  bool hull_repair = false;
};

struct MembershipArgs {
  std::string number;
  double from = 0, to = 1;
  int points = 10;
};

struct VerifyArgs {
  std::string suite = "all";
  std::optional<std::string> f, g, h, at, a;
  std::uint64_t seed = 42;
  int cases = 100;
  double tol = 1e-6;
};

std::string fixed12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

class Runner {
 public:
  Runner(std::istream& in, std::ostream& out, std::ostream& err) : in_(in), out_(out), err_(err) {}

  AlphaGrid grid(const Common& c) const {
    int levels = kDefaultLevels;
    if (c.levels) {
      levels = *c.levels;
    } else if (const char* env = std::getenv("FUZZY_LIMIT_LEVELS")) {
      char* end = nullptr;
      long v = std::strtol(env, &end, 10);
      if (end == env || *end != '\0' || v < 3 || v > 100001) fail("FUZZY_LIMIT_LEVELS must be an integer >= 3");
      levels = static_cast<int>(v);
    }
    if (levels < 3) fail("--levels must be at least 3");
    return AlphaGrid{levels};
  }

  EvalMode mode(const Common& c) const {
    try {
      return parse_mode(c.mode);
    } catch (const Error& e) {
      fail(e.what());
    }
  }

  std::string read_expr_text(const std::string& text) const {
    if (text != "-") return text;
    std::string all((std::istreambuf_iterator<char>(in_)), std::istreambuf_iterator<char>());
    while (!all.empty() && (all.back() == '\n' || all.back() == '\r')) all.pop_back();
    return all;
  }

  Expr expression(const std::string& text) const {
    try {
      return parse(text);
    } catch (const LexError& e) {
      caret(text, e.offset(), e.what());
    } catch (const SyntaxError& e) {
      std::string msg = e.what();
      if (!e.expected().empty()) {
        msg += " (expected";
        for (const auto& x : e.expected()) msg += " '" + x + "'";
        msg += ")";
      }
      caret(text, e.position(), msg);
    }
    throw UsageFailure{};
  }

  FuzzyNumber fuzzy(const std::string& text, const AlphaGrid& g, const char* flag) const {
    try {
      // a bare number stands for a singleton
      double v = 0;
      std::istringstream is(text);
      if (is >> v && is.eof() && std::isfinite(v)) return from_singleton(v, g);
      return fuzzy_from_json_text(text, g);
    } catch (const Error& e) {
      fail(std::string(flag) + ": " + e.what());
    }
  }

  [[noreturn]] void fail(const std::string& msg) const {
    err_ << "error: " << msg << "\n";
    throw UsageFailure{};
  }

  void caret(const std::string& text, std::size_t pos, const std::string& msg) const {
    err_ << "error: " << msg << "\n  " << text << "\n  " << std::string(std::min(pos, text.size()), ' ') << "^\n";
  }

  void emit_json(const ojson& j) const { out_ << j.dump(2) << "\n"; }

  void emit_csv(const FuzzyNumber* f) const {
    out_ << "alpha,lo,hi\n";
    if (!f) return;
    for (const auto& l : f->levels())
      out_ << fixed12(l.alpha) << ',' << fixed12(l.cut.lo()) << ',' << fixed12(l.cut.hi()) << "\n";
  }

  static double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    auto d = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return std::round(d * 1000.0) / 1000.0;
  }

  static std::string target_text(const ApproachSpec& ap) {
    if (ap.target == ApproachSpec::Target::PlusInfinity) return "+inf";
    if (ap.target == ApproachSpec::Target::MinusInfinity) return "-inf";
    return print_constant(*ap.point);
  }

  int limit(const LimitArgs& a, const Common& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const Expr e = expression(read_expr_text(a.expr));
    const AlphaGrid g = grid(c);
    const EvalMode m = mode(c);

    Side side = Side::Both;
    if (a.side == "left") side = Side::Left;
    else if (a.side == "right") side = Side::Right;
    else if (a.side != "both") fail("--side must be both, left or right");

    ApproachSpec ap;
    if (a.at == "inf" || a.at == "+inf") ap = ApproachSpec::plus_infinity();
    else if (a.at == "-inf") ap = ApproachSpec::minus_infinity();
    else ap = ApproachSpec::at(fuzzy(a.at, g, "--at"), side);
    if (ap.infinite()) ap.side = side;

    LimitConfig cfg;
    cfg.h0 = a.h0;
    cfg.ratio = a.ratio;
    cfg.max_steps = a.max_steps;
    cfg.tol = a.tol;
    cfg.grid = g;
    std::vector<double> eps;
    try {
      ap.validate();
      cfg.validate();
      if (!a.certify.empty()) {
        std::stringstream ss(a.certify);
        std::string item;
        while (std::getline(ss, item, ',')) {
          std::size_t used = 0;
          double v = std::stod(item, &used);
          if (used != item.size()) throw ConfigError("bad epsilon '" + item + "'");
          eps.push_back(v);
        }
        for (std::size_t i = 0; i < eps.size(); ++i)
          if (!(eps[i] > 0) || (i && !(eps[i] < eps[i - 1])))
            throw ConfigError("--certify needs strictly decreasing positive epsilons");
      }
    } catch (const Error& ex) {
      fail(ex.what());
    } catch (const std::logic_error&) {
      fail("--certify expects comma-separated numbers");
    }
    if (a.verbose)
      for (const auto& w : cfg.warnings()) err_ << "warning: " << w << "\n";

    const LimitResult r = fuzzy_limit(e, ap, m, cfg);
    const FuzzyNumber* value = r.converged() ? &r.value() : nullptr;

    ojson rec;
    rec["schema_version"] = kSchemaVersion;
    rec["query"] = "lim " + print(e) + " as x -> " + target_text(ap) + " (" + side_name(ap.side) + ")";
    rec["mode"] = m.name();
    rec["result"] = limit_result_json(r);
    rec["alpha_table"] = value ? alpha_table_json(*value) : ojson::array();
    if (!eps.empty()) {
      if (value) {
        rec["certificate"] = certificate_json(certify(e, ap, r, eps, cfg, m));
      } else {
        rec["certificate"] = nullptr;
        err_ << "note: certificate skipped, the limit did not converge\n";
      }
    }
    if (a.sequential > 0 && value && !ap.infinite())
      rec["sequential"] = sequential_json(sequential_check(e, *ap.point, *value, a.sequential, cfg, m, a.seed));
    rec["timing_ms"] = elapsed_ms(t0);

    if (c.format == "csv") emit_csv(value);
    else emit_json(rec);

    return std::visit(
        [](const auto& o) {
          using T = std::decay_t<decltype(o)>;
          if constexpr (std::is_same_v<T, Converged>) return exit_code::ok;
          else if constexpr (std::is_same_v<T, DivergesPlus> || std::is_same_v<T, DivergesMinus>) return exit_code::diverges;
          else if constexpr (std::is_same_v<T, NoLimit>) return exit_code::no_limit;
          else return exit_code::undetermined;
        },
        r.outcome);
  }

  int eval(const EvalArgs& a, const Common& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const Expr e = expression(read_expr_text(a.expr));
    const AlphaGrid g = grid(c);
    const EvalMode m = mode(c);
    const FuzzyNumber x = fuzzy(a.x, g, "--x");

    ojson rec;
    rec["schema_version"] = kSchemaVersion;
    rec["query"] = "eval " + print(e) + " at x = " + print_constant(x);
    rec["mode"] = m.name();
    try {
      FuzzyNumber y = eval_fuzzy(e, x, m, EvalOptions{a.hull_repair});
      rec["result"] = {{"outcome", "Evaluated"}, {"core", interval_json(y.core())}, {"base", interval_json(y.base())}};
      rec["alpha_table"] = alpha_table_json(y);
      rec["timing_ms"] = elapsed_ms(t0);
      if (c.format == "csv") emit_csv(&y);
      else emit_json(rec);
      return exit_code::ok;
    } catch (const LevelError& ex) {
      err_ << "error: evaluation failed at " << ex.what() << "\n";
      rec["result"] = {{"outcome", "DomainError"}, {"alpha", ex.alpha()}, {"detail", ex.what()}};
    } catch (const Error& ex) {
      err_ << "error: " << ex.what() << "\n";
      rec["result"] = {{"outcome", "DomainError"}, {"detail", ex.what()}};
    }
    rec["alpha_table"] = ojson::array();
    rec["timing_ms"] = elapsed_ms(t0);
    if (c.format == "csv") emit_csv(nullptr);
    else emit_json(rec);
    return exit_code::domain;
  }

  int membership(const MembershipArgs& a, const Common& c) {
    const FuzzyNumber f = fuzzy(a.number, grid(c), "--number");
    if (!(a.from < a.to)) fail("--from must be less than --to");
    if (a.points < 1) fail("--points must be at least 1");
    out_ << "x,grade\n";
    for (int i = 0; i <= a.points; ++i) {
      double x = i == a.points ? a.to : a.from + (a.to - a.from) * i / a.points;
      out_ << fixed12(x) << ',' << fixed12(f.membership(x)) << "\n";
    }
    return exit_code::ok;
  }

  int verify(const VerifyArgs& a, const Common& c) {
    static const std::vector<std::string> suites = {"all", "algebra", "order", "composition",
                                                    "uniqueness", "agreement", "campaign"};
    if (std::find(suites.begin(), suites.end(), a.suite) == suites.end())
      fail("unknown suite '" + a.suite + "'");
    const AlphaGrid g = grid(c);
    const EvalMode m = mode(c);
    LimitConfig cfg;
    cfg.grid = g;
    cfg.tol = a.tol;
    try {
      cfg.validate();
    } catch (const Error& ex) {
      fail(ex.what());
    }
    const bool custom = a.f || a.g || a.h || a.at || a.a;
    auto ex = [&](const std::optional<std::string>& s, const char* fallback) { return expression(s ? *s : fallback); };
    auto pt = [&](const char* fallback) { return fuzzy(a.at ? *a.at : fallback, g, "--at"); };
    const FuzzyNumber scalar = fuzzy(a.a ? *a.a : R"({"kind":"triangular","a":1,"b":2,"c":3})", g, "--a");

    bool failed = false;
    auto emit = [&](const char* suite, const TheoremReport& r, ojson extra = ojson::object()) {
      ojson j = theorem_report_json(r);
      j["suite"] = suite;
      for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
      out_ << j.dump() << "\n";
      failed = failed || r.status == Status::Fails;
    };
    auto want = [&](const char* s) { return a.suite == "all" || a.suite == s; };

    if (want("algebra")) {
      if (custom) {
        for (const auto& r : check_limit_algebra(ex(a.f, "x^2"), ex(a.g, "x"), scalar, pt("1"), cfg, m)) emit("algebra", r);
      } else {
        for (const auto& r : check_limit_algebra(expression("x^2"), expression("x"), scalar, pt("1"), cfg, m))
          emit("algebra", r);
        for (const auto& r : check_limit_algebra(expression("x"), expression("x - 1"), scalar, pt("1"), cfg, m))
          emit("algebra", r);
        const FuzzyNumber tri = fuzzy(R"({"kind":"triangular","a":1,"b":2,"c":3})", g, "--at");
        for (const auto& r : check_limit_algebra(expression("x"), expression("x + 1"), scalar, tri, cfg, m))
          emit("algebra", r);
        for (const auto& r : check_limit_algebra(expression("x^2 + 1"), expression("x + 2"), scalar, pt("1"), cfg,
                                                 EvalMode::rigorous(4)))
          emit("algebra", r, {{"mode", "rigorous:4"}});
      }
    }
    if (want("order")) {
      if (custom) {
        std::optional<Expr> h;
        if (a.h) h = expression(*a.h);
        for (const auto& r : check_order_theorems(ex(a.f, "x"), ex(a.g, "x + 1"), h, pt("0"), cfg, m)) emit("order", r);
      } else {
        for (const auto& r : check_order_theorems(expression("x"), expression("x + 1"), std::nullopt, pt("0"), cfg, m))
          emit("order", r);
        for (const auto& r : check_order_theorems(expression("-x^2"), expression("x^2"), expression("x^2*sin(1/x)"),
                                                  pt("0"), cfg, m))
          emit("order", r);
        for (const auto& r :
             check_order_theorems(expression("x^2"), expression("x^2"), expression("x^2"), pt("1"), cfg, m))
          emit("order", r);
      }
    }
    if (want("composition")) {
      if (custom) {
        emit("composition", check_composition(ex(a.f, "x^2"), ex(a.g, "x + 1"), pt("1"), cfg, m));
      } else {
        emit("composition", check_composition(expression("x^2"), expression("x + 1"), pt("1"), cfg, m));
        emit("composition", check_composition(expression("exp(x)"), expression("1/x"), pt("0"), cfg, m, Side::Left));
        emit("composition", check_composition(expression("x"), expression("x^2 + x - 3"), pt("1"), cfg, m));
      }
    }
    if (want("uniqueness")) {
      if (custom) {
        for (const auto& r : check_uniqueness_and_sides(ex(a.f, "x^2 + x - 3"), ApproachSpec::at(pt("1")), cfg, m))
          emit("uniqueness", r);
      } else {
        for (const auto& r : check_uniqueness_and_sides(expression("x^2 + x - 3"), ApproachSpec::at(pt("1")), cfg, m))
          emit("uniqueness", r);
        for (const auto& r :
             check_uniqueness_and_sides(expression("abs(sin(x))/sin(x)"), ApproachSpec::at(pt("0")), cfg, m))
          emit("uniqueness", r);
        for (const auto& r : check_uniqueness_and_sides(expression("5"), ApproachSpec::at(pt("2")), cfg, m))
          emit("uniqueness", r);
        for (const auto& r : check_uniqueness_and_sides(expression("1/x"), ApproachSpec::plus_infinity(), cfg, m))
          emit("uniqueness", r);
      }
    }
    if (want("agreement")) {
      if (custom) {
        emit("agreement", check_agreement(ex(a.f, "(x^2 - x)/x"), ex(a.g, "x - 1"), pt("0"), cfg, m));
      } else {
        emit("agreement", check_agreement(expression("(x^2 - x)/x"), expression("x - 1"), pt("0"), cfg, m));
        emit("agreement", check_agreement(expression("x^2"), expression("x^2"), pt("1"), cfg, m));
        emit("agreement", check_agreement(expression("x"), expression("x + 0.001"), pt("0"), cfg, m));
        emit("agreement", check_agreement(expression("(x^2 - 1)/(x - 1)"), expression("x + 1"), pt("1"), cfg, m));
      }
    }
    if (want("campaign")) {
      LimitConfig cc = cfg;
      if (!c.levels && !std::getenv("FUZZY_LIMIT_LEVELS")) cc.grid = AlphaGrid{kCampaignLevels};
      const CampaignSummary s = run_algebra_campaign(a.seed, a.cases, cc, m);
      for (const auto& k : s.failures)
        for (const auto& r : k.reports) emit("campaign", r, {{"f", k.f}, {"g", k.g}, {"point", k.point}});
      for (const auto& k : s.dependency_cases)
        for (const auto& r : k.reports)
          emit("campaign", r, {{"f", k.f}, {"g", k.g}, {"point", k.point}, {"mode", "paper"}});
      ojson summary = {{"suite", "campaign"}, {"cases", s.cases}, {"holds", s.holds}, {"fails", s.fails},
                       {"inapplicable", s.inapplicable}, {"dependency_cases", s.dependency_cases.size()},
                       {"seed", a.seed}};
      out_ << summary.dump() << "\n";
      failed = failed || s.fails > 0;
    }
    return failed ? exit_code::no_limit : exit_code::ok;
  }

 private:
  std::istream& in_;
  std::ostream& out_;
  std::ostream& err_;
};

void add_common(CLI::App* sub, Common& c, bool with_format) {
  sub->add_option("--mode", c.mode, "paper | natural | rigorous:<depth>");
  sub->add_option("--levels", c.levels, "alpha grid points on [0,1] (overrides FUZZY_LIMIT_LEVELS)");
  if (with_format) sub->add_option("--format", c.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fuzzy limits of expression-defined fuzzy functions", "fuzzylimit"};
  app.require_subcommand(1);

  Common common;
  LimitArgs la;
  auto* lim = app.add_subcommand("limit", "compute (and optionally certify) a fuzzy limit");
  lim->add_option("--expr", la.expr, "expression, or - for stdin")->required();
  lim->add_option("--at", la.at, "fuzzy-number JSON, a number, inf or -inf")->required();
  lim->add_option("--side", la.side, "both | left | right");
  lim->add_option("--tol", la.tol, "convergence tolerance");
  lim->add_option("--h0", la.h0, "initial schedule offset");
  lim->add_option("--ratio", la.ratio, "schedule ratio in (0,1)");
  lim->add_option("--max-steps", la.max_steps, "schedule length");
  lim->add_option("--certify", la.certify, "comma-separated decreasing epsilons");
  lim->add_option("--seed", la.seed, "seed for --sequential");
  lim->add_option("--sequential", la.sequential, "number of random approaching sequences to check");
  lim->add_flag("--verbose", la.verbose, "print configuration warnings");
  add_common(lim, common, true);

  EvalArgs ea;
  auto* ev = app.add_subcommand("eval", "evaluate an expression on a fuzzy number");
  ev->add_option("--expr", ea.expr, "expression, or - for stdin")->required();
  ev->add_option("--x", ea.x, "fuzzy-number JSON or a number")->required();
  ev->add_flag("--hull-repair", ea.hull_repair, "repair non-nested output cuts");
  add_common(ev, common, true);

  MembershipArgs ma;
  auto* mem = app.add_subcommand("membership", "sample a membership function as CSV");
  mem->add_option("--number", ma.number, "fuzzy-number JSON")->required();
  mem->add_option("--from", ma.from, "left end")->required();
  mem->add_option("--to", ma.to, "right end")->required();
  mem->add_option("--points", ma.points, "number of intervals (n + 1 samples)")->required();
  mem->add_option("--levels", common.levels, "alpha grid points on [0,1]");

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "run the limit theorem suite");
  // -h would clash with --h
  ver->set_help_flag("--help", "Print this help message and exit");
  ver->add_option("--suite", va.suite, "all | algebra | order | composition | uniqueness | agreement | campaign");
  ver->add_option("--f", va.f, "first expression");
  ver->add_option("--g", va.g, "second expression");
  ver->add_option("--h", va.h, "squeezed expression");
  ver->add_option("--at", va.at, "approach point (fuzzy-number JSON or number)");
  ver->add_option("--a", va.a, "scalar fuzzy constant for the scalar rule");
  ver->add_option("--seed", va.seed, "campaign seed");
  ver->add_option("--cases", va.cases, "campaign size");
  ver->add_option("--tol", va.tol, "limit tolerance");
  add_common(ver, common, false);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? exit_code::ok : exit_code::usage;
  }

  Runner run(in, out, err);
  try {
    if (*lim) return run.limit(la, common);
    if (*ev) return run.eval(ea, common);
    if (*mem) return run.membership(ma, common);
    return run.verify(va, common);
  } catch (const UsageFailure&) {
    return exit_code::usage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::usage;
  }
}

}  // namespace fuzzylimit
