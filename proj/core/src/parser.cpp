#include <cctype>
#include <charconv>
#include <optional>

#include "solitonlab/error.hpp"
#include "solitonlab/expr.hpp"

namespace solitonlab {
namespace {

std::optional<Op> function_op(std::string_view name) {
  if (name == "exp") return Op::exp;
  if (name == "log") return Op::log;
  if (name == "sin") return Op::sin;
  if (name == "cos") return Op::cos;
  if (name == "sinh") return Op::sinh;
  if (name == "cosh") return Op::cosh;
  if (name == "sqrt") return Op::sqrt;
  return std::nullopt;
}

NodePtr make_unary(Op op, NodePtr child, std::size_t offset) {
  Node n;
  n.op = op;
  n.lhs = std::move(child);
  n.offset = offset;
  return std::make_shared<const Node>(std::move(n));
}

NodePtr make_binary(Op op, NodePtr a, NodePtr b, std::size_t offset) {
  Node n;
  n.op = op;
  n.lhs = std::move(a);
  n.rhs = std::move(b);
  n.offset = offset;
  return std::make_shared<const Node>(std::move(n));
}

class Parser {
 public:
  Parser(std::string_view text, const CoordinateNames& coords) : text_(text), coords_(coords) {}

  NodePtr parse_all() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError(0, "empty expression", "");
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ < text_.size())
      throw ParseError(pos_, "unexpected token", std::string(1, text_[pos_]));
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    while (true) {
      skip_ws();
      if (pos_ >= text_.size()) return lhs;
      const char c = text_[pos_];
      if (c != '+' && c != '-') return lhs;
      const std::size_t at = pos_++;
      NodePtr rhs = parse_term();
      lhs = make_binary(c == '+' ? Op::add : Op::sub, std::move(lhs), std::move(rhs), at);
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    while (true) {
      skip_ws();
      if (pos_ >= text_.size()) return lhs;
      const char c = text_[pos_];
      if (c != '*' && c != '/') return lhs;
      const std::size_t at = pos_++;
      NodePtr rhs = parse_unary();
      lhs = make_binary(c == '*' ? Op::mul : Op::div, std::move(lhs), std::move(rhs), at);
    }
  }

  NodePtr parse_unary() {
    skip_ws();
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
      const bool minus = text_[pos_] == '-';
      const std::size_t at = pos_++;
      NodePtr operand = parse_unary();
      if (!minus) return operand;
      if (operand->op == Op::constant) {
        Node folded = *operand;
        folded.value = -folded.value;
        folded.offset = at;
        return std::make_shared<const Node>(std::move(folded));
      }
      return make_unary(Op::neg, std::move(operand), at);
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '^') {
      const std::size_t at = pos_++;
      NodePtr exponent = parse_unary();  // right-associative
      return make_binary(Op::pow, std::move(base), std::move(exponent), at);
    }
    return base;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError(pos_, "expected expression", "");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      expect_close();
      return inner;
    }
    throw ParseError(pos_, "unexpected token", std::string(1, c));
  }

  void expect_close() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError(pos_, "expected ')'", "");
    if (text_[pos_] != ')') throw ParseError(pos_, "expected ')'", std::string(1, text_[pos_]));
    ++pos_;
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    auto is_digit = [&](std::size_t i) {
      return i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]));
    };
    while (is_digit(pos_)) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (is_digit(pos_)) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (is_digit(look)) {
        pos_ = look;
        while (is_digit(pos_)) ++pos_;
      }
    }
    const std::string_view tok = text_.substr(start, pos_ - start);
    double value = 0.0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
      throw ParseError(start, "malformed number", std::string(tok));
    Node n;
    n.op = Op::constant;
    n.value = value;
    n.offset = start;
    return std::make_shared<const Node>(std::move(n));
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);

    if (peek('(')) {
      ++pos_;
      NodePtr arg = parse_expr();
      expect_close();
      auto op = function_op(name);
      if (!op) throw ParseError(start, "unknown function", std::string(name));
      return make_unary(*op, std::move(arg), start);
    }
    if (function_op(name)) throw ParseError(pos_, "expected '(' after function name", std::string(name));

    for (std::size_t i = 0; i < coords_.size(); ++i) {
      if (coords_[i] == name) {
        Node n;
        n.op = Op::variable;
        n.var = static_cast<int>(i);
        n.offset = start;
        return std::make_shared<const Node>(std::move(n));
      }
    }
    throw ParseError(start, "unknown identifier", std::string(name));
  }

  std::string_view text_;
  const CoordinateNames& coords_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text, std::shared_ptr<const CoordinateNames> coords) {
  if (!coords) coords = std::make_shared<const CoordinateNames>();
  Parser p(text, *coords);
  NodePtr root = p.parse_all();
  return Expr(std::move(root), std::move(coords));
}

Expr parse(std::string_view text, const CoordinateNames& coords) {
  return parse(text, std::make_shared<const CoordinateNames>(coords));
}

}  // namespace solitonlab
