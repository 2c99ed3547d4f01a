#include "fuzzylimit/eval.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <optional>
#include <sstream>

namespace fuzzylimit {

namespace {

constexpr double kGuardTol = 1e-12;

// Flattened expression with constants and guard bounds resolved at one alpha.
struct CNode {
  enum Kind { Var, Const, Neg, Add, Sub, Mul, Div, Pow, Fn, Piece } kind = Var;
  unsigned width = 0;
  int a = -1, b = -1;
  unsigned n = 0;
  UnaryFn fn = UnaryFn::Exp;
  Interval cut;
  std::vector<std::pair<GuardOp, Interval>> guards;
  std::vector<int> branches;
  const Expr* src = nullptr;
};

struct Program {
  std::vector<CNode> nodes;
  int root = -1;
};

int compile(const Expr& e, double alpha, Program& p) {
  CNode c;
  c.kind = CNode::Var;
  c.src = &e;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, node::Var>) {
          c.kind = CNode::Var;
          c.width = 1;
        } else if constexpr (std::is_same_v<T, node::Const>) {
          c.kind = CNode::Const;
          c.cut = n.value.cut(AlphaLevel(alpha));
        } else if constexpr (std::is_same_v<T, node::Neg>) {
          c.kind = CNode::Neg;
          c.a = compile(*n.arg, alpha, p);
          c.width = p.nodes[c.a].width;
        } else if constexpr (std::is_same_v<T, node::Binary>) {
          static constexpr CNode::Kind kinds[] = {CNode::Add, CNode::Sub, CNode::Mul, CNode::Div};
          c.kind = kinds[static_cast<int>(n.op)];
          c.a = compile(*n.lhs, alpha, p);
          c.b = compile(*n.rhs, alpha, p);
          unsigned wa = p.nodes[c.a].width, wb = p.nodes[c.b].width;
          c.width = n.op == BinOp::Mul ? wa + wb : std::max(wa, wb);
        } else if constexpr (std::is_same_v<T, node::PowInt>) {
          c.kind = CNode::Pow;
          c.a = compile(*n.base, alpha, p);
          c.n = n.exponent;
          c.width = n.exponent * p.nodes[c.a].width;
        } else if constexpr (std::is_same_v<T, node::Unary>) {
          c.kind = CNode::Fn;
          c.fn = n.fn;
          c.a = compile(*n.arg, alpha, p);
          c.width = p.nodes[c.a].width;
        } else {
          c.kind = CNode::Piece;
          for (const auto& br : n.branches) {
            c.guards.emplace_back(br.guard.op, br.guard.bound.cut(AlphaLevel(alpha)));
            int idx = compile(*br.value, alpha, p);
            c.branches.push_back(idx);
            c.width = std::max(c.width, p.nodes[idx].width);
          }
        }
      },
      e.node());
  p.nodes.push_back(std::move(c));
  return static_cast<int>(p.nodes.size()) - 1;
}

Program compile(const Expr& e, double alpha) {
  Program p;
  p.root = compile(e, alpha, p);
  return p;
}

std::string box_text(const Interval& b) {
  std::ostringstream os;
  os.precision(17);
  os << b;
  return os.str();
}

int select_branch(const CNode& c, const Interval& box) {
  for (std::size_t i = 0; i < c.guards.size(); ++i) {
    const auto& [op, bound] = c.guards[i];
    bool holds = false;
    switch (op) {
      case GuardOp::LT: holds = box.hi() < bound.lo(); break;
      case GuardOp::GT: holds = box.lo() > bound.hi(); break;
      case GuardOp::EQ:
        holds = std::abs(box.lo() - bound.lo()) <= kGuardTol && std::abs(box.hi() - bound.hi()) <= kGuardTol;
        break;
    }
    if (holds) return c.branches[i];
  }
  throw DomainError("box " + box_text(box) + " straddles a piecewise boundary in '" + print(*c.src) + "'");
}

[[noreturn]] void zero_divisor(const CNode& div, const Program& p) {
  std::string sub = print(*p.nodes[div.b].src);
  throw DivisionByZeroInterval(sub, "division by an interval containing zero in '" + sub + "'");
}

Interval unary_checked(const CNode& c, const Interval& arg, Semantics sem) {
  try {
    return iv_unary(c.fn, arg, sem);
  } catch (const DomainError& e) {
    throw DomainError(std::string(e.what()) + " in '" + print(*c.src) + "'");
  }
}

// PaperVertex: one endpoint choice per slot, fixed by the mask.
struct VertexRun {
  const Program& p;
  const Interval& box;
  std::uint32_t mask;
  std::vector<std::optional<Interval>>& div_hulls;

  Interval eval(int i, unsigned off) const {
    const CNode& c = p.nodes[i];
    switch (c.kind) {
      case CNode::Var: return Interval::point((mask >> off) & 1u ? box.hi() : box.lo());
      case CNode::Const: return c.cut;
      case CNode::Neg: return iv_neg(eval(c.a, off));
      case CNode::Add: return iv_add(eval(c.a, off), eval(c.b, off));
      case CNode::Sub: return iv_sub(eval(c.a, off), eval(c.b, off));
      case CNode::Mul: return iv_mul(eval(c.a, off), eval(c.b, off + p.nodes[c.a].width));
      case CNode::Div: {
        Interval num = eval(c.a, off);
        Interval den = eval(c.b, off);
        auto& h = div_hulls[i];
        h = h ? h->hull(den) : den;
        if (contains_zero(den)) zero_divisor(c, p);
        return iv_div(num, den);
      }
      case CNode::Pow: {
        if (c.n == 0) return Interval::point(1.0);
        const unsigned wb = p.nodes[c.a].width;
        if (wb == 0) return iv_pow_int(eval(c.a, off), c.n, Semantics::Vertex);
        Interval acc = eval(c.a, off);
        for (unsigned k = 1; k < c.n; ++k) acc = iv_mul(acc, eval(c.a, off + k * wb));
        return acc;
      }
      case CNode::Fn: return unary_checked(c, eval(c.a, off), Semantics::Vertex);
      case CNode::Piece: return eval(select_branch(c, box), off);
    }
    return c.cut;
  }
};

Interval natural_eval(const Program& p, int i, const Interval& box) {
  const CNode& c = p.nodes[i];
  switch (c.kind) {
    case CNode::Var: return box;
    case CNode::Const: return c.cut;
    case CNode::Neg: return iv_neg(natural_eval(p, c.a, box));
    case CNode::Add: return iv_add(natural_eval(p, c.a, box), natural_eval(p, c.b, box));
    case CNode::Sub: return iv_sub(natural_eval(p, c.a, box), natural_eval(p, c.b, box));
    case CNode::Mul: return iv_mul(natural_eval(p, c.a, box), natural_eval(p, c.b, box));
    case CNode::Div: {
      Interval num = natural_eval(p, c.a, box);
      Interval den = natural_eval(p, c.b, box);
      if (contains_zero(den)) zero_divisor(c, p);
      return iv_div(num, den);
    }
    case CNode::Pow: return iv_pow_int(natural_eval(p, c.a, box), c.n, Semantics::Range);
    case CNode::Fn: return unary_checked(c, natural_eval(p, c.a, box), Semantics::Range);
    case CNode::Piece: return natural_eval(p, select_branch(c, box), box);
  }
  return c.cut;
}

std::vector<int> slots_of(std::uint32_t mask, unsigned width) {
  std::vector<int> s(width);
  for (unsigned k = 0; k < width; ++k) s[k] = static_cast<int>((mask >> k) & 1u);
  return s;
}

VertexReport paper_vertex(const Program& p, const Interval& box, const EvalMode& mode) {
  const unsigned w = p.nodes[p.root].width;
  if (w > kMaxVertexSlots)
    throw ConfigError("expression needs " + std::to_string(w) + " vertex slots; the cap is " +
                      std::to_string(kMaxVertexSlots));
  std::vector<std::optional<Interval>> div_hulls(p.nodes.size());
  // a degenerate box makes every mask equal
  const std::uint32_t cases = box.degenerate() ? 1u : (1u << w);
  double lo = INFINITY, hi = -INFINITY;
  std::uint32_t lo_mask = 0, hi_mask = 0;
  for (std::uint32_t m = 0; m < cases; ++m) {
    Interval v = VertexRun{p, box, m, div_hulls}.eval(p.root, 0);
    if (v.lo() < lo) {
      lo = v.lo();
      lo_mask = m;
    }
    if (v.hi() > hi) {
      hi = v.hi();
      hi_mask = m;
    }
  }
  for (std::size_t i = 0; i < div_hulls.size(); ++i)
    if (div_hulls[i] && contains_zero(*div_hulls[i])) zero_divisor(p.nodes[i], p);
  if (std::isnan(lo) || std::isnan(hi) || lo > hi) throw DomainError("evaluation produced NaN");
  return {Interval(lo, hi), {{slots_of(lo_mask, w), lo}, {slots_of(hi_mask, w), hi}}, mode};
}

void check_result(const Interval& r) {
  if (std::isnan(r.lo()) || std::isnan(r.hi())) throw DomainError("evaluation produced NaN");
}

FuzzyNumber assemble(const std::vector<double>& alphas, std::vector<Interval> cuts, const EvalMode& mode,
                     const EvalOptions& opts) {
  std::vector<AlphaCut> levels;
  levels.reserve(alphas.size());
  for (std::size_t i = 0; i < alphas.size(); ++i) levels.push_back({alphas[i], cuts[i]});
  // Enclosure modes: cut(beta) and cut(alpha) both enclose the range over the
  // smaller box, so their intersection does too. Subdivision grids of nested
  // boxes do not line up, which is the only way these modes lose nesting.
  const bool enclosure = mode.kind != EvalMode::Kind::PaperVertex;
  auto bad = nest_violations(levels, kGuardTol);
  if (!bad.empty() && !opts.hull_repair && !enclosure) {
    std::ostringstream os;
    os << "evaluated alpha-cuts are not nested at alpha pairs";
    for (std::size_t i = 0; i < bad.size() && i < 8; ++i) os << " (" << bad[i].alpha << ", " << bad[i].beta << ")";
    if (bad.size() > 8) os << " and " << bad.size() - 8 << " more";
    throw InconsistentCuts(os.str());
  }
  hull_repair(levels);
  return reconstruct(std::move(levels));
}

template <bool Parallel>
FuzzyNumber eval_fuzzy_impl(const Expr& e, const FuzzyNumber& x, const EvalMode& mode, const EvalOptions& opts) {
  const std::vector<double> alphas = x.alphas();
  const long n = static_cast<long>(alphas.size());
  std::vector<Interval> cuts(alphas.size());
  std::vector<std::string> errors(alphas.size());
  std::vector<char> failed(alphas.size(), 0);

  auto one = [&](long i) {
    try {
      cuts[i] = vertex_eval(e, x.cut(AlphaLevel(alphas[i])), mode, alphas[i]).result;
    } catch (const std::exception& ex) {
      failed[i] = 1;
      errors[i] = ex.what();
    }
  };
  if constexpr (Parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) one(i);
  } else {
    for (long i = 0; i < n; ++i) one(i);
  }
  for (long i = 0; i < n; ++i)
    if (failed[i]) throw LevelError(alphas[i], errors[i]);
  return assemble(alphas, std::move(cuts), mode, opts);
}

double scalar(const Expr& e, double x) {
  return std::visit(
      [&](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, node::Var>) {
          return x;
        } else if constexpr (std::is_same_v<T, node::Const>) {
          return n.value.core().mid();
        } else if constexpr (std::is_same_v<T, node::Neg>) {
          return -scalar(*n.arg, x);
        } else if constexpr (std::is_same_v<T, node::Binary>) {
          double a = scalar(*n.lhs, x), b = scalar(*n.rhs, x);
          switch (n.op) {
            case BinOp::Add: return a + b;
            case BinOp::Sub: return a - b;
            case BinOp::Mul: return a * b;
            case BinOp::Div:
              if (b == 0.0) {
                std::string sub = print(*n.rhs);
                throw DivisionByZeroInterval(sub, "division by zero in '" + sub + "'");
              }
              return a / b;
          }
          return 0.0;
        } else if constexpr (std::is_same_v<T, node::PowInt>) {
          double b = scalar(*n.base, x), acc = 1.0;
          for (unsigned k = 0; k < n.exponent; ++k) acc *= b;
          return acc;
        } else if constexpr (std::is_same_v<T, node::Unary>) {
          try {
            return apply_unary(n.fn, scalar(*n.arg, x));
          } catch (const DomainError& err) {
            throw DomainError(std::string(err.what()) + " in '" + print(e) + "'");
          }
        } else {
          for (const auto& br : n.branches) {
            const double m = br.guard.bound.core().mid();
            bool holds = br.guard.op == GuardOp::LT   ? x < m
                         : br.guard.op == GuardOp::GT ? x > m
                                                      : std::abs(x - m) <= kGuardTol;
            if (holds) return scalar(*br.value, x);
          }
          throw DomainError("no piecewise branch applies at x = " + std::to_string(x));
        }
      },
      e.node());
}

}  // namespace

EvalMode EvalMode::rigorous(int depth) {
  if (depth < 1) throw ConfigError("rigorous mode needs depth >= 1");
  return {Kind::RigorousSubdivide, depth};
}

std::string EvalMode::name() const {
  switch (kind) {
    case Kind::PaperVertex: return "paper";
    case Kind::NaturalInterval: return "natural";
    case Kind::RigorousSubdivide: return "rigorous:" + std::to_string(depth);
  }
  return "?";
}

EvalMode parse_mode(const std::string& text) {
  if (text == "paper") return EvalMode::paper();
  if (text == "natural") return EvalMode::natural();
  if (text.rfind("rigorous:", 0) == 0) {
    const std::string d = text.substr(9);
    if (d.empty() || d.size() > 2 || !std::all_of(d.begin(), d.end(), ::isdigit))
      throw ConfigError("bad rigorous depth '" + d + "'");
    return EvalMode::rigorous(std::stoi(d));
  }
  throw ConfigError("unknown mode '" + text + "' (paper, natural, rigorous:<depth>)");
}

VertexReport vertex_eval(const Expr& e, const Interval& box, const EvalMode& mode, double alpha) {
  const Program p = compile(e, alpha);
  switch (mode.kind) {
    case EvalMode::Kind::PaperVertex: return paper_vertex(p, box, mode);
    case EvalMode::Kind::NaturalInterval: {
      Interval r = natural_eval(p, p.root, box);
      check_result(r);
      return {r, {}, mode};
    }
    case EvalMode::Kind::RigorousSubdivide: {
      if (mode.depth < 1 || mode.depth > 24) throw ConfigError("rigorous depth must be in 1..24");
      const long parts = box.degenerate() ? 1 : (1L << mode.depth);
      const double step = box.width() / static_cast<double>(parts);
      std::optional<Interval> acc;
      for (long k = 0; k < parts; ++k) {
        double lo = box.lo() + static_cast<double>(k) * step;
        double hi = k + 1 == parts ? box.hi() : box.lo() + static_cast<double>(k + 1) * step;
        Interval r = natural_eval(p, p.root, Interval(lo, std::max(lo, hi)));
        acc = acc ? acc->hull(r) : r;
      }
      check_result(*acc);
      return {*acc, {}, mode};
    }
  }
  throw ConfigError("unknown evaluation mode");
}

FuzzyNumber eval_fuzzy(const Expr& e, const FuzzyNumber& x, const EvalMode& mode, const EvalOptions& opts) {
  return eval_fuzzy_impl<true>(e, x, mode, opts);
}

FuzzyNumber eval_fuzzy_serial(const Expr& e, const FuzzyNumber& x, const EvalMode& mode, const EvalOptions& opts) {
  return eval_fuzzy_impl<false>(e, x, mode, opts);
}

double eval_scalar(const Expr& e, double x) { return scalar(e, x); }

}  // namespace fuzzylimit
