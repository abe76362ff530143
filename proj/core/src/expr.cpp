#include "solitonlab/expr.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

#include "solitonlab/error.hpp"

namespace solitonlab {

bool is_unary(Op op) noexcept {
  switch (op) {
    case Op::neg:
    case Op::exp:
    case Op::log:
    case Op::sin:
    case Op::cos:
    case Op::sinh:
    case Op::cosh:
    case Op::sqrt:
      return true;
    default:
      return false;
  }
}

bool is_binary(Op op) noexcept {
  switch (op) {
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div:
    case Op::pow:
      return true;
    default:
      return false;
  }
}

std::string_view op_name(Op op) noexcept {
  switch (op) {
    case Op::constant: return "constant";
    case Op::variable: return "variable";
    case Op::neg: return "neg";
    case Op::exp: return "exp";
    case Op::log: return "log";
    case Op::sin: return "sin";
    case Op::cos: return "cos";
    case Op::sinh: return "sinh";
    case Op::cosh: return "cosh";
    case Op::sqrt: return "sqrt";
    case Op::add: return "add";
    case Op::sub: return "sub";
    case Op::mul: return "mul";
    case Op::div: return "div";
    case Op::pow: return "pow";
  }
  return "?";
}

namespace {

std::shared_ptr<const CoordinateNames> empty_coords() {
  static const auto coords = std::make_shared<const CoordinateNames>();
  return coords;
}

double checked(double v, const Node& n, const char* what) {
  if (!std::isfinite(v)) throw DomainError(n.offset, what);
  return v;
}

double eval_node(const Node& n, std::span<const double> p) {
  switch (n.op) {
    case Op::constant:
      return n.value;
    case Op::variable:
      if (n.var < 0 || static_cast<std::size_t>(n.var) >= p.size())
        throw DomainError(n.offset, "no value supplied for coordinate");
      return p[static_cast<std::size_t>(n.var)];
    default:
      break;
  }

  const double a = eval_node(*n.lhs, p);
  switch (n.op) {
    case Op::neg: return -a;
    case Op::exp: return checked(std::exp(a), n, "exp overflow");
    case Op::log:
      if (!(a > 0.0)) throw DomainError(n.offset, "log of non-positive value");
      return std::log(a);
    case Op::sin: return std::sin(a);
    case Op::cos: return std::cos(a);
    case Op::sinh: return checked(std::sinh(a), n, "sinh overflow");
    case Op::cosh: return checked(std::cosh(a), n, "cosh overflow");
    case Op::sqrt:
      if (a < 0.0) throw DomainError(n.offset, "sqrt of negative value");
      return std::sqrt(a);
    default:
      break;
  }

  const double b = eval_node(*n.rhs, p);
  switch (n.op) {
    case Op::add: return checked(a + b, n, "overflow in addition");
    case Op::sub: return checked(a - b, n, "overflow in subtraction");
    case Op::mul: return checked(a * b, n, "overflow in multiplication");
    case Op::div:
      if (b == 0.0) throw DomainError(n.offset, "division by zero");
      return checked(a / b, n, "overflow in division");
    case Op::pow:
      if (a == 0.0 && b < 0.0) throw DomainError(n.offset, "zero raised to a negative power");
      if (a < 0.0 && b != std::trunc(b))
        throw DomainError(n.offset, "negative base with non-integer exponent");
      return checked(std::pow(a, b), n, "overflow in power");
    default:
      break;
  }
  throw DomainError(n.offset, "malformed expression node");
}

bool has_variable(const Node& n) noexcept {
  if (n.op == Op::variable) return true;
  if (n.lhs && has_variable(*n.lhs)) return true;
  if (n.rhs && has_variable(*n.rhs)) return true;
  return false;
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

char binary_symbol(Op op) {
  switch (op) {
    case Op::add: return '+';
    case Op::sub: return '-';
    case Op::mul: return '*';
    case Op::div: return '/';
    default: return '^';
  }
}

void print(const Node& n, const CoordinateNames& coords, std::string& out) {
  switch (n.op) {
    case Op::constant:
      if (std::signbit(n.value)) {
        out += "(-";
        out += format_number(-n.value);
        out += ')';
      } else {
        out += format_number(n.value);
      }
      return;
    case Op::variable:
      if (n.var >= 0 && static_cast<std::size_t>(n.var) < coords.size())
        out += coords[static_cast<std::size_t>(n.var)];
      else
        out += "?";
      return;
    case Op::neg:
      out += "(-";
      print(*n.lhs, coords, out);
      out += ')';
      return;
    default:
      break;
  }
  if (is_unary(n.op)) {
    out += op_name(n.op);
    out += '(';
    print(*n.lhs, coords, out);
    out += ')';
    return;
  }
  out += '(';
  print(*n.lhs, coords, out);
  out += ' ';
  out += binary_symbol(n.op);
  out += ' ';
  print(*n.rhs, coords, out);
  out += ')';
}

}  // namespace

Expr::Expr() : Expr(std::make_shared<const Node>(), empty_coords()) {}

Expr::Expr(NodePtr root, std::shared_ptr<const CoordinateNames> coords)
    : root_(std::move(root)), coords_(coords ? std::move(coords) : empty_coords()) {
  if (!root_) root_ = std::make_shared<const Node>();
}

Expr Expr::constant(double v, std::shared_ptr<const CoordinateNames> coords) {
  Node n;
  n.op = Op::constant;
  n.value = v;
  return Expr(std::make_shared<const Node>(n), std::move(coords));
}

double Expr::evaluate(std::span<const double> point) const { return eval_node(*root_, point); }

bool Expr::is_variable_free() const noexcept { return !has_variable(*root_); }

std::string Expr::to_string() const {
  std::string out;
  print(*root_, *coords_, out);
  return out;
}

bool structurally_equal(const Node& a, const Node& b) noexcept {
  if (a.op != b.op) return false;
  if (a.op == Op::constant) {
    // bitwise-equal doubles, so -0.0 and 0.0 differ
    return std::signbit(a.value) == std::signbit(b.value) && a.value == b.value;
  }
  if (a.op == Op::variable) return a.var == b.var;
  if (static_cast<bool>(a.lhs) != static_cast<bool>(b.lhs)) return false;
  if (static_cast<bool>(a.rhs) != static_cast<bool>(b.rhs)) return false;
  if (a.lhs && !structurally_equal(*a.lhs, *b.lhs)) return false;
  if (a.rhs && !structurally_equal(*a.rhs, *b.rhs)) return false;
  return true;
}

bool operator==(const Expr& a, const Expr& b) {
  return structurally_equal(*a.root_, *b.root_);
}

}  // namespace solitonlab
