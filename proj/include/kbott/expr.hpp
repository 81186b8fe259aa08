#pragma once

#include <cctype>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "kbott/error.hpp"
#include "kbott/laurent.hpp"
#include "kbott/tower.hpp"

namespace kbott {

// Abstract syntax for the expression language
//   expr   := ['-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ('^' int)?
//   atom   := int | 'y' '[' int ',' int ']' | '(' expr ')'
// The leading unary minus is accepted so that every canonically printed
// polynomial parses back to itself.
struct ExprNode {
  enum class Kind { literal, variable, negate, add, sub, mul, pow };

  Kind kind;
  std::size_t pos = 0;  // 1-based character position, for diagnostics

  Int literal;                    // Kind::literal
  VarId var;                      // Kind::variable
  std::unique_ptr<ExprNode> lhs;  // unary operand or left side
  std::unique_ptr<ExprNode> rhs;  // right side of binary nodes
  std::int64_t exponent = 0;      // Kind::pow
};

using ExprPtr = std::unique_ptr<ExprNode>;

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(const std::string& text) : text_(text) {}

  ExprPtr parse() {
    ExprPtr out = parse_expr();
    skip_space();
    if (pos_ < text_.size())
      fail(pos_ + 1, "unexpected character '" + std::string(1, text_[pos_]) +
                         "'");
    return out;
  }

 private:
  [[noreturn]] void fail(std::size_t pos, const std::string& message) {
    throw_validation("expression error at position " + std::to_string(pos) +
                     ": " + message);
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool eat(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, const std::string& what) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != c)
      fail(pos_ + 1, "expected '" + std::string(1, c) + "' " + what);
    ++pos_;
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  std::string read_digits() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (pos_ == start) fail(start + 1, "expected a number");
    return text_.substr(start, pos_ - start);
  }

  std::int64_t read_small_int(const std::string& what) {
    skip_space();
    const std::size_t start = pos_;
    const bool negative = eat('-');
    const std::string digits = read_digits();
    try {
      const std::int64_t value = std::stoll(digits);
      return negative ? -value : value;
    } catch (const std::out_of_range&) {
      fail(start + 1, what + " out of range");
    }
  }

  ExprPtr make(ExprNode::Kind kind, std::size_t pos) {
    auto node = std::make_unique<ExprNode>();
    node->kind = kind;
    node->pos = pos;
    return node;
  }

  ExprPtr parse_expr() {
    skip_space();
    const std::size_t start = pos_ + 1;
    ExprPtr left;
    if (eat('-')) {
      ExprPtr node = make(ExprNode::Kind::negate, start);
      node->lhs = parse_term();
      left = std::move(node);
    } else {
      left = parse_term();
    }
    while (true) {
      skip_space();
      const std::size_t op_pos = pos_ + 1;
      if (eat('+')) {
        ExprPtr node = make(ExprNode::Kind::add, op_pos);
        node->lhs = std::move(left);
        node->rhs = parse_term();
        left = std::move(node);
      } else if (eat('-')) {
        ExprPtr node = make(ExprNode::Kind::sub, op_pos);
        node->lhs = std::move(left);
        node->rhs = parse_term();
        left = std::move(node);
      } else {
        return left;
      }
    }
  }

  ExprPtr parse_term() {
    ExprPtr left = parse_factor();
    while (true) {
      const std::size_t op_pos = pos_ + 1;
      if (!eat('*')) return left;
      ExprPtr node = make(ExprNode::Kind::mul, op_pos);
      node->lhs = std::move(left);
      node->rhs = parse_factor();
      left = std::move(node);
    }
  }

  ExprPtr parse_factor() {
    ExprPtr base = parse_atom();
    skip_space();
    const std::size_t op_pos = pos_ + 1;
    if (!eat('^')) return base;
    ExprPtr node = make(ExprNode::Kind::pow, op_pos);
    node->lhs = std::move(base);
    node->exponent = read_small_int("exponent");
    return node;
  }

  ExprPtr parse_atom() {
    skip_space();
    const std::size_t start = pos_ + 1;
    const char c = peek();
    if (c == '(') {
      ++pos_;
      ExprPtr inner = parse_expr();
      expect(')', "to close the parenthesis opened at position " +
                      std::to_string(start));
      return inner;
    }
    if (c == 'y') {
      ++pos_;
      expect('[', "after 'y'");
      ExprPtr node = make(ExprNode::Kind::variable, start);
      const std::int64_t j = read_small_int("stage index");
      expect(',', "between the variable indices");
      const std::int64_t k = read_small_int("slot index");
      expect(']', "to close the variable reference");
      if (j < 1 || k < 1)
        fail(start, "variable indices must be positive");
      node->var = VarId{static_cast<int>(j), static_cast<int>(k)};
      return node;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      ExprPtr node = make(ExprNode::Kind::literal, start);
      node->literal = Int(read_digits());
      return node;
    }
    if (c == '\0') fail(pos_ + 1, "unexpected end of input");
    fail(pos_ + 1, std::string("unexpected character '") + c + "'");
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline ExprPtr parse_expr_ast(const std::string& text) {
  return detail::ExprParser(text).parse();
}

// Evaluates an AST to a Laurent polynomial. When a spec is supplied, every
// variable reference is range-checked against it.
inline LaurentPolynomial evaluate_expr(const ExprNode& node,
                                       const TowerSpec* spec) {
  switch (node.kind) {
    case ExprNode::Kind::literal:
      return LaurentPolynomial(node.literal);
    case ExprNode::Kind::variable: {
      if (spec != nullptr) {
        const VarId v = node.var;
        if (v.j > spec->stages() || v.k > spec->n(v.j) + 1)
          throw_validation(
              "expression error at position " + std::to_string(node.pos) +
              ": variable " + v.expr_name() + " out of range (tower has " +
              std::to_string(spec->stages()) + " stages)");
      }
      return LaurentPolynomial::variable(node.var);
    }
    case ExprNode::Kind::negate:
      return -evaluate_expr(*node.lhs, spec);
    case ExprNode::Kind::add:
      return evaluate_expr(*node.lhs, spec) + evaluate_expr(*node.rhs, spec);
    case ExprNode::Kind::sub:
      return evaluate_expr(*node.lhs, spec) - evaluate_expr(*node.rhs, spec);
    case ExprNode::Kind::mul:
      return evaluate_expr(*node.lhs, spec) * evaluate_expr(*node.rhs, spec);
    case ExprNode::Kind::pow: {
      const LaurentPolynomial base = evaluate_expr(*node.lhs, spec);
      if (node.exponent < 0 && !base.is_unit_monomial())
        throw_validation(
            "expression error at position " + std::to_string(node.pos) +
            ": negative power of an expression that is not an invertible "
            "monomial");
      return base.pow(node.exponent);
    }
  }
  throw_internal("evaluate_expr: unhandled node kind");
}

// Parses and evaluates in one step, range-checking variables against spec.
inline LaurentPolynomial parse_expr(const std::string& text,
                                    const TowerSpec& spec) {
  return evaluate_expr(*parse_expr_ast(text), &spec);
}

}  // namespace kbott
