#include "fuzzylimit/expr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace fuzzylimit {

namespace {

std::shared_ptr<const Expr> box(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

// Precedence used by the printer; higher binds tighter.
int precedence(const Expr& e) {
  if (const auto* b = e.as<node::Binary>()) return (b->op == BinOp::Add || b->op == BinOp::Sub) ? 1 : 2;
  if (e.as<node::Neg>()) return 3;
  if (e.as<node::PowInt>()) return 4;
  return 5;
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

bool same_constant(const FuzzyNumber& a, const FuzzyNumber& b) {
  auto as_tri = [](const FuzzyNumber& f) -> std::optional<Triangular> {
    if (const auto* s = std::get_if<Singleton>(&f.shape())) return Triangular{s->value, s->value, s->value};
    if (const auto* t = std::get_if<Triangular>(&f.shape())) return *t;
    return std::nullopt;
  };
  auto ta = as_tri(a), tb = as_tri(b);
  if (ta && tb) return ta->a == tb->a && ta->b == tb->b && ta->c == tb->c;
  if (ta || tb) return false;
  const auto& la = a.levels();
  const auto& lb = b.levels();
  if (la.size() != lb.size()) return false;
  for (std::size_t i = 0; i < la.size(); ++i)
    if (la[i].alpha != lb[i].alpha || !(la[i].cut == lb[i].cut)) return false;
  return true;
}

const char* guard_symbol(GuardOp op) {
  switch (op) {
    case GuardOp::LT: return "<";
    case GuardOp::GT: return ">";
    case GuardOp::EQ: return "==";
  }
  return "?";
}

void print_into(const Expr& e, std::string& out);

void print_child(const Expr& child, bool parens, std::string& out) {
  if (parens) out += '(';
  print_into(child, out);
  if (parens) out += ')';
}

void print_into(const Expr& e, std::string& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, node::Var>) {
          out += 'x';
        } else if constexpr (std::is_same_v<T, node::Const>) {
          out += print_constant(n.value);
        } else if constexpr (std::is_same_v<T, node::Neg>) {
          out += '-';
          print_child(*n.arg, precedence(*n.arg) < 3, out);
        } else if constexpr (std::is_same_v<T, node::Binary>) {
          int p = precedence(e);
          print_child(*n.lhs, precedence(*n.lhs) < p, out);
          static constexpr const char* ops[] = {" + ", " - ", "*", "/"};
          out += ops[static_cast<int>(n.op)];
          print_child(*n.rhs, precedence(*n.rhs) <= p, out);
        } else if constexpr (std::is_same_v<T, node::PowInt>) {
          print_child(*n.base, precedence(*n.base) < 5, out);
          out += '^';
          out += std::to_string(n.exponent);
        } else if constexpr (std::is_same_v<T, node::Unary>) {
          out += unary_name(n.fn);
          out += '(';
          print_into(*n.arg, out);
          out += ')';
        } else {
          out += "{ ";
          for (std::size_t i = 0; i < n.branches.size(); ++i) {
            if (i) out += " ; ";
            print_into(*n.branches[i].value, out);
            out += " if x ";
            out += guard_symbol(n.branches[i].guard.op);
            out += ' ';
            out += print_constant(n.branches[i].guard.bound);
          }
          out += " }";
        }
      },
      e.node());
}

}  // namespace

Expr var() { return Expr(node::Var{}); }
Expr constant(FuzzyNumber value) { return Expr(node::Const{std::move(value)}); }
Expr num(double v) { return constant(from_singleton(v)); }
Expr neg(Expr a) { return Expr(node::Neg{box(std::move(a))}); }
Expr binary(BinOp op, Expr a, Expr b) { return Expr(node::Binary{op, box(std::move(a)), box(std::move(b))}); }
Expr pow(Expr base, unsigned n) { return Expr(node::PowInt{box(std::move(base)), n}); }
Expr unary(UnaryFn fn, Expr a) { return Expr(node::Unary{fn, box(std::move(a))}); }

Expr piecewise(std::vector<std::pair<Guard, Expr>> branches) {
  node::Piecewise p;
  for (auto& [g, e] : branches) p.branches.push_back({std::move(g), box(std::move(e))});
  return Expr(std::move(p));
}

Expr operator+(Expr a, Expr b) { return binary(BinOp::Add, std::move(a), std::move(b)); }
Expr operator-(Expr a, Expr b) { return binary(BinOp::Sub, std::move(a), std::move(b)); }
Expr operator*(Expr a, Expr b) { return binary(BinOp::Mul, std::move(a), std::move(b)); }
Expr operator/(Expr a, Expr b) { return binary(BinOp::Div, std::move(a), std::move(b)); }
Expr operator-(Expr a) { return neg(std::move(a)); }

bool operator==(const Expr& a, const Expr& b) {
  if (a.id() == b.id()) return true;
  if (a.node().index() != b.node().index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = *b.as<T>();
        if constexpr (std::is_same_v<T, node::Var>) {
          return true;
        } else if constexpr (std::is_same_v<T, node::Const>) {
          return same_constant(x.value, y.value);
        } else if constexpr (std::is_same_v<T, node::Neg>) {
          return *x.arg == *y.arg;
        } else if constexpr (std::is_same_v<T, node::Binary>) {
          return x.op == y.op && *x.lhs == *y.lhs && *x.rhs == *y.rhs;
        } else if constexpr (std::is_same_v<T, node::PowInt>) {
          return x.exponent == y.exponent && *x.base == *y.base;
        } else if constexpr (std::is_same_v<T, node::Unary>) {
          return x.fn == y.fn && *x.arg == *y.arg;
        } else {
          if (x.branches.size() != y.branches.size()) return false;
          for (std::size_t i = 0; i < x.branches.size(); ++i) {
            const auto& bx = x.branches[i];
            const auto& by = y.branches[i];
            if (bx.guard.op != by.guard.op || !same_constant(bx.guard.bound, by.guard.bound) ||
                !(*bx.value == *by.value))
              return false;
          }
          return true;
        }
      },
      a.node());
}

std::string print_constant(const FuzzyNumber& f) {
  if (const auto* s = std::get_if<Singleton>(&f.shape())) {
    if (s->value >= 0.0 && !std::signbit(s->value)) return format_number(s->value);
    std::string v = format_number(s->value);
    return "(" + v + ", " + v + ", " + v + ")";
  }
  if (const auto* t = std::get_if<Triangular>(&f.shape()))
    return "(" + format_number(t->a) + ", " + format_number(t->b) + ", " + format_number(t->c) + ")";
  // general stacks have no literal; print their base / core outline
  Interval base = f.base(), core = f.core();
  return "(" + format_number(base.lo()) + ", " + format_number(core.mid()) + ", " +
         format_number(base.hi()) + ")";
}

std::string print(const Expr& e) {
  std::string out;
  print_into(e, out);
  return out;
}

Expr substitute(const Expr& f, const Expr& g) {
  return std::visit(
      [&](const auto& n) -> Expr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, node::Var>) {
          return g;
        } else if constexpr (std::is_same_v<T, node::Const>) {
          return f;
        } else if constexpr (std::is_same_v<T, node::Neg>) {
          return neg(substitute(*n.arg, g));
        } else if constexpr (std::is_same_v<T, node::Binary>) {
          return binary(n.op, substitute(*n.lhs, g), substitute(*n.rhs, g));
        } else if constexpr (std::is_same_v<T, node::PowInt>) {
          return pow(substitute(*n.base, g), n.exponent);
        } else if constexpr (std::is_same_v<T, node::Unary>) {
          return unary(n.fn, substitute(*n.arg, g));
        } else {
          // guards test the inner value, so they stay attached to g
          std::vector<std::pair<Guard, Expr>> branches;
          for (const auto& b : n.branches) branches.emplace_back(b.guard, substitute(*b.value, g));
          if (g.as<node::Var>()) return piecewise(std::move(branches));
          throw PreconditionError("cannot substitute into a piecewise expression");
        }
      },
      f.node());
}

unsigned slot_width(const Expr& e) {
  return std::visit(
      [](const auto& n) -> unsigned {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, node::Var>) {
          return 1;
        } else if constexpr (std::is_same_v<T, node::Const>) {
          return 0;
        } else if constexpr (std::is_same_v<T, node::Neg> || std::is_same_v<T, node::Unary>) {
          return slot_width(*n.arg);
        } else if constexpr (std::is_same_v<T, node::Binary>) {
          unsigned l = slot_width(*n.lhs), r = slot_width(*n.rhs);
          return n.op == BinOp::Mul ? l + r : std::max(l, r);
        } else if constexpr (std::is_same_v<T, node::PowInt>) {
          return n.exponent * slot_width(*n.base);
        } else {
          unsigned w = 0;
          for (const auto& b : n.branches) w = std::max(w, slot_width(*b.value));
          return w;
        }
      },
      e.node());
}

std::size_t occurrences(const Expr& e) {
  return std::visit(
      [](const auto& n) -> std::size_t {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, node::Var>) {
          return 1;
        } else if constexpr (std::is_same_v<T, node::Const>) {
          return 0;
        } else if constexpr (std::is_same_v<T, node::Neg> || std::is_same_v<T, node::Unary>) {
          return occurrences(*n.arg);
        } else if constexpr (std::is_same_v<T, node::Binary>) {
          return occurrences(*n.lhs) + occurrences(*n.rhs);
        } else if constexpr (std::is_same_v<T, node::PowInt>) {
          return occurrences(*n.base);
        } else {
          std::size_t c = 0;
          for (const auto& b : n.branches) c += occurrences(*b.value);
          return c;
        }
      },
      e.node());
}

bool has_piecewise(const Expr& e) {
  return std::visit(
      [](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, node::Piecewise>) {
          return true;
        } else if constexpr (std::is_same_v<T, node::Neg> || std::is_same_v<T, node::Unary>) {
          return has_piecewise(*n.arg);
        } else if constexpr (std::is_same_v<T, node::Binary>) {
          return has_piecewise(*n.lhs) || has_piecewise(*n.rhs);
        } else if constexpr (std::is_same_v<T, node::PowInt>) {
          return has_piecewise(*n.base);
        } else {
          return false;
        }
      },
      e.node());
}

}  // namespace fuzzylimit
