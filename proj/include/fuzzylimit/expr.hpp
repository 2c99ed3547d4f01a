#pragma once

// Univariate expression trees with fuzzy-number constants.

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "fuzzylimit/fuzzy_number.hpp"
#include "fuzzylimit/interval_arith.hpp"

namespace fuzzylimit {

enum class BinOp { Add, Sub, Mul, Div };
enum class GuardOp { LT, GT, EQ };

struct Guard {
  GuardOp op;
  FuzzyNumber bound;
};

class Expr;

namespace node {
struct Var {};
struct Const {
  FuzzyNumber value;
};
struct Neg {
  std::shared_ptr<const Expr> arg;
};
struct Binary {
  BinOp op;
  std::shared_ptr<const Expr> lhs, rhs;
};
struct PowInt {
  std::shared_ptr<const Expr> base;
  unsigned exponent;
};
struct Unary {
  UnaryFn fn;
  std::shared_ptr<const Expr> arg;
};
struct Branch {
  Guard guard;
  std::shared_ptr<const Expr> value;
};
struct Piecewise {
  std::vector<Branch> branches;
};
}  // namespace node

/// Immutable expression node. Copies share subtrees.
class Expr {
 public:
  using Node = std::variant<node::Var, node::Const, node::Neg, node::Binary, node::PowInt, node::Unary,
                            node::Piecewise>;

  explicit Expr(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}

  const Node& node() const noexcept { return *node_; }
  /// Stable identity of this node, used to key per-node bookkeeping.
  const void* id() const noexcept { return node_.get(); }

  template <class T>
  const T* as() const noexcept {
    return std::get_if<T>(node_.get());
  }

 private:
  std::shared_ptr<const Node> node_;
};

Expr var();
Expr constant(FuzzyNumber value);
Expr num(double v);
Expr neg(Expr a);
Expr binary(BinOp op, Expr a, Expr b);
Expr pow(Expr base, unsigned n);
Expr unary(UnaryFn fn, Expr a);
Expr piecewise(std::vector<std::pair<Guard, Expr>> branches);

Expr operator+(Expr a, Expr b);
Expr operator-(Expr a, Expr b);
Expr operator*(Expr a, Expr b);
Expr operator/(Expr a, Expr b);
Expr operator-(Expr a);

/// Structural equality. Constants compare by shape; a singleton r equals
/// the triangular (r, r, r).
bool operator==(const Expr& a, const Expr& b);

/// Canonical text with minimal parentheses; parse(print(e)) == e.
std::string print(const Expr& e);
std::string print_constant(const FuzzyNumber& f);

/// Replace every occurrence of the variable in f by g.
Expr substitute(const Expr& f, const Expr& g);

/// Number of endpoint slots used by vertex evaluation. Products and powers
/// give each factor its own slots; sums, quotients and function arguments
/// share them.
unsigned slot_width(const Expr& e);
std::size_t occurrences(const Expr& e);
bool has_piecewise(const Expr& e);

}  // namespace fuzzylimit
