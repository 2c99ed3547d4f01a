#include "fuzzylimit/parser.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>

namespace fuzzylimit {

namespace {

bool is_function(std::string_view s) { return s == "exp" || s == "sin" || s == "abs" || s == "sqrt"; }

UnaryFn function_of(std::string_view s) {
  if (s == "exp") return UnaryFn::Exp;
  if (s == "sin") return UnaryFn::Sin;
  if (s == "abs") return UnaryFn::Abs;
  return UnaryFn::Sqrt;
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_ws();
      if (pos_ >= src_.size()) break;
      const std::size_t start = pos_;
      const char c = src_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && digit_at(pos_ + 1))) {
        Token t{TokenKind::Number, start, {}};
        t.value = scan_number();
        t.text = std::string(src_.substr(start, pos_ - start));
        out.push_back(std::move(t));
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          ++pos_;
        out.push_back({TokenKind::Ident, start, std::string(src_.substr(start, pos_ - start))});
      } else if (c == '(') {
        if (auto t = try_tuple()) {
          out.push_back(std::move(*t));
        } else {
          ++pos_;
          out.push_back({TokenKind::LParen, start, "("});
        }
      } else if (c == '=') {
        if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') {
          pos_ += 2;
          out.push_back({TokenKind::EqualEqual, start, "=="});
        } else {
          throw LexError(start, "unexpected character '='");
        }
      } else {
        TokenKind k;
        switch (c) {
          case '+': k = TokenKind::Plus; break;
          case '-': k = TokenKind::Minus; break;
          case '*': k = TokenKind::Star; break;
          case '/': k = TokenKind::Slash; break;
          case '^': k = TokenKind::Caret; break;
          case ')': k = TokenKind::RParen; break;
          case ',': k = TokenKind::Comma; break;
          case '{': k = TokenKind::LBrace; break;
          case '}': k = TokenKind::RBrace; break;
          case ';': k = TokenKind::Semicolon; break;
          case '<': k = TokenKind::Less; break;
          case '>': k = TokenKind::Greater; break;
          default: throw LexError(start, std::string("unexpected character '") + c + "'");
        }
        ++pos_;
        out.push_back({k, start, std::string(1, c)});
      }
    }
    return out;
  }

 private:
  bool digit_at(std::size_t i) const {
    return i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i]));
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  // digits [. digits] [(e|E) [+-] digits]
  double scan_number() {
    const std::size_t start = pos_;
    while (digit_at(pos_)) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (digit_at(pos_)) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (digit_at(p)) {
        pos_ = p;
        while (digit_at(pos_)) ++pos_;
      }
    }
    double v = 0.0;
    auto res = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (res.ec != std::errc() || !std::isfinite(v)) throw LexError(start, "malformed number");
    return v;
  }

  // ['-'] number ['/' number]
  std::optional<double> tuple_entry() {
    skip_ws();
    bool negative = false;
    if (pos_ < src_.size() && src_[pos_] == '-') {
      negative = true;
      ++pos_;
      skip_ws();
    }
    if (!(digit_at(pos_) || (pos_ < src_.size() && src_[pos_] == '.' && digit_at(pos_ + 1))))
      return std::nullopt;
    double v = scan_number();
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == '/') {
      const std::size_t slash = pos_;
      ++pos_;
      skip_ws();
      if (!digit_at(pos_)) return std::nullopt;
      double q = scan_number();
      if (q == 0.0) throw LexError(slash, "zero denominator in rational literal");
      v = v / q;
      skip_ws();
    }
    return negative ? -v : v;
  }

  std::optional<Token> try_tuple() {
    const std::size_t start = pos_;
    ++pos_;
    Token t{TokenKind::Tuple, start, {}};
    for (int i = 0; i < 3; ++i) {
      auto v = tuple_entry();
      const char want = i < 2 ? ',' : ')';
      if (!v || pos_ >= src_.size() || src_[pos_] != want) {
        pos_ = start;
        return std::nullopt;
      }
      t.tuple[i] = *v;
      ++pos_;
    }
    t.text = std::string(src_.substr(start, pos_ - start));
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

const std::vector<std::string> kOperand = {"number", "identifier", "(", "-", "{", "tuple"};

class Parser {
 public:
  Parser(const std::vector<Token>& toks, std::size_t src_length) : toks_(toks) {
    std::size_t end = src_length;
    if (end == 0 && !toks.empty()) end = toks.back().offset + toks.back().text.size();
    end_ = end > 0 ? end - 1 : 0;
  }

  Expr run() {
    Expr e = expr();
    if (i_ < toks_.size())
      throw SyntaxError(pos(), {"operator", "end of input"},
                        "unexpected token '" + toks_[i_].text + "'");
    return e;
  }

 private:
  std::size_t pos() const { return i_ < toks_.size() ? toks_[i_].offset : end_; }
  bool at(TokenKind k) const { return i_ < toks_.size() && toks_[i_].kind == k; }
  bool at_ident(std::string_view s) const { return at(TokenKind::Ident) && toks_[i_].text == s; }

  const Token& expect(TokenKind k, const char* what) {
    if (!at(k)) throw SyntaxError(pos(), {what}, std::string("expected '") + what + "'");
    return toks_[i_++];
  }

  void use_variable(const Token& t) {
    if (var_name_.empty()) {
      var_name_ = t.text;
    } else if (var_name_ != t.text) {
      throw SyntaxError(t.offset, {var_name_},
                        "second variable '" + t.text + "' (only '" + var_name_ + "' allowed)");
    }
  }

  Expr expr() {
    Expr lhs = term();
    while (at(TokenKind::Plus) || at(TokenKind::Minus)) {
      BinOp op = at(TokenKind::Plus) ? BinOp::Add : BinOp::Sub;
      ++i_;
      lhs = binary(op, std::move(lhs), term());
    }
    return lhs;
  }

  Expr term() {
    Expr lhs = unary_expr();
    while (at(TokenKind::Star) || at(TokenKind::Slash)) {
      BinOp op = at(TokenKind::Star) ? BinOp::Mul : BinOp::Div;
      ++i_;
      lhs = binary(op, std::move(lhs), unary_expr());
    }
    return lhs;
  }

  Expr unary_expr() {
    if (at(TokenKind::Minus)) {
      ++i_;
      return neg(unary_expr());
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    std::vector<unsigned> exps;
    while (at(TokenKind::Caret)) {
      ++i_;
      if (!at(TokenKind::Number))
        throw SyntaxError(pos(), {"integer exponent"}, "exponent must be a nonnegative integer literal");
      double v = toks_[i_].value;
      if (v != std::floor(v) || v > 64)
        throw SyntaxError(pos(), {"integer exponent"}, "exponent must be an integer in 0..64");
      exps.push_back(static_cast<unsigned>(v));
      ++i_;
    }
    if (exps.empty()) return base;
    double folded = exps.back();
    for (std::size_t k = exps.size() - 1; k-- > 0;) folded = std::pow(exps[k], folded);
    if (folded > 64) throw SyntaxError(pos(), {}, "folded exponent exceeds 64");
    return pow(std::move(base), static_cast<unsigned>(folded));
  }

  FuzzyNumber tuple_constant(const Token& t) {
    try {
      return from_triangular(t.tuple[0], t.tuple[1], t.tuple[2]);
    } catch (const Error& e) {
      throw SyntaxError(t.offset, {}, std::string("bad triangular literal: ") + e.what());
    }
  }

  Expr primary() {
    if (i_ >= toks_.size()) throw SyntaxError(pos(), kOperand, "expected operand");
    const Token& t = toks_[i_];
    switch (t.kind) {
      case TokenKind::Number: ++i_; return num(t.value);
      case TokenKind::Tuple: ++i_; return constant(tuple_constant(t));
      case TokenKind::LParen: {
        ++i_;
        Expr e = expr();
        expect(TokenKind::RParen, ")");
        return e;
      }
      case TokenKind::LBrace: return piecewise_block();
      case TokenKind::Ident: {
        if (t.text == "if") throw SyntaxError(t.offset, kOperand, "expected operand");
        ++i_;
        if (is_function(t.text)) {
          expect(TokenKind::LParen, "(");
          Expr arg = expr();
          expect(TokenKind::RParen, ")");
          return unary(function_of(t.text), std::move(arg));
        }
        use_variable(t);
        return var();
      }
      default: throw SyntaxError(t.offset, kOperand, "expected operand");
    }
  }

  FuzzyNumber bound() {
    if (at(TokenKind::Tuple)) return tuple_constant(toks_[i_++]);
    bool negative = false;
    if (at(TokenKind::Minus)) {
      negative = true;
      ++i_;
    }
    if (!at(TokenKind::Number)) throw SyntaxError(pos(), {"number", "tuple"}, "expected guard bound");
    double v = toks_[i_++].value;
    return from_singleton(negative ? -v : v);
  }

  Expr piecewise_block() {
    const std::size_t open = toks_[i_].offset;
    ++i_;
    std::vector<std::pair<Guard, Expr>> branches;
    while (true) {
      Expr value = expr();
      if (!at_ident("if")) throw SyntaxError(pos(), {"if"}, "expected 'if'");
      ++i_;
      if (!at(TokenKind::Ident) || is_function(toks_[i_].text) || toks_[i_].text == "if")
        throw SyntaxError(pos(), {"identifier"}, "expected the variable in a guard");
      use_variable(toks_[i_++]);
      GuardOp op;
      if (at(TokenKind::Less)) {
        op = GuardOp::LT;
      } else if (at(TokenKind::Greater)) {
        op = GuardOp::GT;
      } else if (at(TokenKind::EqualEqual)) {
        op = GuardOp::EQ;
      } else {
        throw SyntaxError(pos(), {"<", ">", "=="}, "expected comparison");
      }
      ++i_;
      branches.emplace_back(Guard{op, bound()}, std::move(value));
      if (at(TokenKind::Semicolon)) {
        ++i_;
        continue;
      }
      expect(TokenKind::RBrace, "}");
      break;
    }
    check_disjoint(branches, open);
    return piecewise(std::move(branches));
  }

  // Disjointness judged on the core midpoints of the bounds.
  static void check_disjoint(const std::vector<std::pair<Guard, Expr>>& branches, std::size_t at) {
    auto disjoint = [](const Guard& g, const Guard& h) {
      const double a = g.bound.core().mid(), b = h.bound.core().mid();
      using enum GuardOp;
      if (g.op == LT && h.op == LT) return false;
      if (g.op == GT && h.op == GT) return false;
      if (g.op == EQ && h.op == EQ) return a != b;
      if (g.op == LT && h.op == GT) return a <= b;
      if (g.op == GT && h.op == LT) return b <= a;
      if (g.op == EQ) return h.op == LT ? a >= b : a <= b;
      return g.op == LT ? b >= a : b <= a;
    };
    for (std::size_t i = 0; i < branches.size(); ++i)
      for (std::size_t j = i + 1; j < branches.size(); ++j)
        if (!disjoint(branches[i].first, branches[j].first))
          throw SyntaxError(at, {}, "piecewise guards overlap");
  }

  const std::vector<Token>& toks_;
  std::size_t i_ = 0;
  std::size_t end_ = 0;
  std::string var_name_;
};

}  // namespace

const char* token_name(TokenKind k) {
  switch (k) {
    case TokenKind::Number: return "Number";
    case TokenKind::Ident: return "Ident";
    case TokenKind::Plus: return "Plus";
    case TokenKind::Minus: return "Minus";
    case TokenKind::Star: return "Star";
    case TokenKind::Slash: return "Slash";
    case TokenKind::Caret: return "Caret";
    case TokenKind::LParen: return "LParen";
    case TokenKind::RParen: return "RParen";
    case TokenKind::Comma: return "Comma";
    case TokenKind::LBrace: return "LBrace";
    case TokenKind::RBrace: return "RBrace";
    case TokenKind::Semicolon: return "Semicolon";
    case TokenKind::Less: return "Less";
    case TokenKind::Greater: return "Greater";
    case TokenKind::EqualEqual: return "EqualEqual";
    case TokenKind::Tuple: return "Tuple";
  }
  return "?";
}

std::vector<Token> tokenize(std::string_view src) { return Lexer(src).run(); }

Expr parse(const std::vector<Token>& tokens, std::size_t src_length) {
  return Parser(tokens, src_length).run();
}

Expr parse(std::string_view src) { return parse(tokenize(src), src.size()); }

}  // namespace fuzzylimit
