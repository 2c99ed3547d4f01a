#pragma once

// Expression language:
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' INT)*          right-associative, folded
//   primary := NUMBER | TUPLE | IDENT | FUNC '(' expr ')' | '(' expr ')'
//            | '{' branch (';' branch)* '}'
//   branch  := expr 'if' IDENT ('<' | '>' | '==') bound
//   bound   := NUMBER | '-' NUMBER | TUPLE
//
// A bare number is a singleton constant and a tuple "(a, b, c)" with
// numeric (possibly rational "p/q") entries is a triangular constant.
// Any identifier other than exp/sin/abs/sqrt/if names the variable.

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzylimit/expr.hpp"

namespace fuzzylimit {

enum class TokenKind {
  Number,
  Ident,
  Plus,
  Minus,
  Star,
  Slash,
  Caret,
  LParen,
  RParen,
  Comma,
  LBrace,
  RBrace,
  Semicolon,
  Less,
  Greater,
  EqualEqual,
  Tuple,
};

struct Token {
  TokenKind kind;
  std::size_t offset;
  std::string text;
  double value = 0.0;                 // Number
  std::array<double, 3> tuple{};      // Tuple
};

const char* token_name(TokenKind k);

/// Throws LexError carrying the byte offset of the offending character.
std::vector<Token> tokenize(std::string_view src);

/// Throws SyntaxError with the expected-token set and position.
Expr parse(const std::vector<Token>& tokens, std::size_t src_length = 0);
Expr parse(std::string_view src);

}  // namespace fuzzylimit
