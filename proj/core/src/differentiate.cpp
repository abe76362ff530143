#include <cmath>

#include "solitonlab/error.hpp"
#include "solitonlab/expr.hpp"

namespace solitonlab {
namespace {

bool is_const(const NodePtr& n, double v) { return n->op == Op::constant && n->value == v; }
bool is_const(const NodePtr& n) { return n->op == Op::constant; }

NodePtr c(double v) {
  Node n;
  n.op = Op::constant;
  n.value = v;
  return std::make_shared<const Node>(std::move(n));
}

NodePtr unary(Op op, NodePtr a) {
  Node n;
  n.op = op;
  n.lhs = std::move(a);
  return std::make_shared<const Node>(std::move(n));
}

NodePtr binary(Op op, NodePtr a, NodePtr b) {
  Node n;
  n.op = op;
  n.lhs = std::move(a);
  n.rhs = std::move(b);
  return std::make_shared<const Node>(std::move(n));
}

NodePtr neg(NodePtr a) {
  if (is_const(a)) return c(-a->value);
  if (a->op == Op::neg) return a->lhs;
  return unary(Op::neg, std::move(a));
}

NodePtr add(NodePtr a, NodePtr b) {
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  if (is_const(a) && is_const(b)) return c(a->value + b->value);
  return binary(Op::add, std::move(a), std::move(b));
}

NodePtr sub(NodePtr a, NodePtr b) {
  if (is_const(b, 0.0)) return a;
  if (is_const(a, 0.0)) return neg(std::move(b));
  if (is_const(a) && is_const(b)) return c(a->value - b->value);
  return binary(Op::sub, std::move(a), std::move(b));
}

NodePtr mul(NodePtr a, NodePtr b) {
  if (is_const(a, 0.0) || is_const(b, 0.0)) return c(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  if (is_const(a) && is_const(b)) return c(a->value * b->value);
  return binary(Op::mul, std::move(a), std::move(b));
}

NodePtr div(NodePtr a, NodePtr b) {
  if (is_const(a, 0.0)) return c(0.0);
  if (is_const(b, 1.0)) return a;
  if (is_const(a) && is_const(b) && b->value != 0.0) return c(a->value / b->value);
  return binary(Op::div, std::move(a), std::move(b));
}

NodePtr pow(NodePtr a, NodePtr b) {
  if (is_const(b, 1.0)) return a;
  if (is_const(b, 0.0)) return c(1.0);
  return binary(Op::pow, std::move(a), std::move(b));
}

bool depends_on(const Node& n, int var) {
  if (n.op == Op::variable) return n.var == var;
  if (n.lhs && depends_on(*n.lhs, var)) return true;
  if (n.rhs && depends_on(*n.rhs, var)) return true;
  return false;
}

bool variable_free(const Node& n) {
  if (n.op == Op::variable) return false;
  if (n.lhs && !variable_free(*n.lhs)) return false;
  if (n.rhs && !variable_free(*n.rhs)) return false;
  return true;
}

// Folds a variable-free subtree to a constant when it evaluates cleanly.
NodePtr fold(const NodePtr& n) {
  if (is_const(n) || !variable_free(*n)) return n;
  try {
    return c(Expr(n, nullptr).evaluate({}));
  } catch (const DomainError&) {
    return n;
  }
}

NodePtr d(const NodePtr& n, int var) {
  if (!depends_on(*n, var)) return c(0.0);
  switch (n->op) {
    case Op::constant:
      return c(0.0);
    case Op::variable:
      return c(1.0);
    default:
      break;
  }

  const NodePtr& u = n->lhs;
  switch (n->op) {
    case Op::neg: return neg(d(u, var));
    case Op::exp: return mul(d(u, var), n);
    case Op::log: return div(d(u, var), u);
    case Op::sin: return mul(d(u, var), unary(Op::cos, u));
    case Op::cos: return neg(mul(d(u, var), unary(Op::sin, u)));
    case Op::sinh: return mul(d(u, var), unary(Op::cosh, u));
    case Op::cosh: return mul(d(u, var), unary(Op::sinh, u));
    case Op::sqrt: return div(d(u, var), mul(c(2.0), n));
    default: break;
  }

  const NodePtr& v = n->rhs;
  switch (n->op) {
    case Op::add: return add(d(u, var), d(v, var));
    case Op::sub: return sub(d(u, var), d(v, var));
    case Op::mul: return add(mul(d(u, var), v), mul(u, d(v, var)));
    case Op::div:
      return div(sub(mul(d(u, var), v), mul(u, d(v, var))), pow(v, c(2.0)));
    case Op::pow:
      if (!depends_on(*v, var)) {
        NodePtr k = fold(v);
        return mul(mul(k, pow(u, fold(sub(k, c(1.0))))), d(u, var));
      }
      // d(u^v) = u^v (v' log u + v u'/u)
      return mul(n, add(mul(d(v, var), unary(Op::log, u)), div(mul(v, d(u, var)), u)));
    default:
      break;
  }
  throw Error("differentiate: malformed expression node");
}

}  // namespace

Expr differentiate(const Expr& e, int var_index) {
  return Expr(d(e.root_ptr(), var_index), e.coordinates_ptr());
}

Expr differentiate(const Expr& e, std::string_view var) {
  const auto& coords = e.coordinates();
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (coords[i] == var) return differentiate(e, static_cast<int>(i));
  throw PreconditionError("differentiate: '" + std::string(var) + "' is not a declared coordinate");
}

}  // namespace solitonlab
