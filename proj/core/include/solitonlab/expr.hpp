#pragma once

// Closed arithmetic expression language used for metric components, vector
// field components, scalar potentials and time-dependent parameters.
// Grammar reference: docs/expression-grammar.md

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace solitonlab {

enum class Op {
  constant,
  variable,
  neg,
  exp,
  log,
  sin,
  cos,
  sinh,
  cosh,
  sqrt,
  add,
  sub,
  mul,
  div,
  pow,
};

bool is_unary(Op op) noexcept;
bool is_binary(Op op) noexcept;
std::string_view op_name(Op op) noexcept;

struct Node {
  Op op = Op::constant;
  double value = 0.0;      // constant
  int var = -1;            // variable: index into the coordinate list
  std::size_t offset = 0;  // byte offset in the source text
  std::shared_ptr<const Node> lhs;  // sole child of unary nodes
  std::shared_ptr<const Node> rhs;
};

using NodePtr = std::shared_ptr<const Node>;
using CoordinateNames = std::vector<std::string>;

/// Immutable expression tree bound to a coordinate list. Copies share nodes.
class Expr {
 public:
  Expr();  // constant 0 over no coordinates

  Expr(NodePtr root, std::shared_ptr<const CoordinateNames> coords);

  static Expr constant(double v, std::shared_ptr<const CoordinateNames> coords);

  const Node& root() const noexcept { return *root_; }
  const NodePtr& root_ptr() const noexcept { return root_; }
  const CoordinateNames& coordinates() const noexcept { return *coords_; }
  const std::shared_ptr<const CoordinateNames>& coordinates_ptr() const noexcept {
    return coords_;
  }

  /// Throws DomainError for log/sqrt/pow outside their domain, division by
  /// zero and overflow to a non-finite value.
  double evaluate(std::span<const double> point) const;

  /// True when the tree is a single constant node.
  bool is_constant() const noexcept { return root_->op == Op::constant; }

  /// True when no variable node appears in the tree.
  bool is_variable_free() const noexcept;

  /// Re-parsable text; parse(to_string()) reproduces the same tree.
  std::string to_string() const;

  /// Structural equality (source offsets ignored).
  friend bool operator==(const Expr& a, const Expr& b);

 private:
  NodePtr root_;
  std::shared_ptr<const CoordinateNames> coords_;
};

bool structurally_equal(const Node& a, const Node& b) noexcept;

Expr parse(std::string_view text, const CoordinateNames& coords);
Expr parse(std::string_view text, std::shared_ptr<const CoordinateNames> coords);

/// Exact symbolic partial derivative. Constant arithmetic introduced by the
/// chain rule is folded and trivial 0/1 factors are dropped; the subtrees
/// copied from `e` are left as written.
Expr differentiate(const Expr& e, std::string_view var);
Expr differentiate(const Expr& e, int var_index);

}  // namespace solitonlab
