#pragma once

// A tiny expression language for transcribing displayed operator identities
// as data, e.g.
//
//   "alpha(u,v)A(u)B(v) = B(v)A(u) + (beta(u,v)A(v) - xi B(v))B(u)"
//
// Grammar:
//   relation := expr '=' expr
//   expr     := ['+'|'-'] term (('+'|'-') term)*
//   term     := power (['*'] power)*          juxtaposition multiplies
//   power    := primary ['^' ['-'] integer]
//   primary  := number | name [args] | '(' expr ')'
//   args     := '(' name (',' name)* ')'   with no space before '('
//
// A parenthesised group after a name that is not a plain list of names is a
// factor: "xi(A(u) - D(u))" multiplies. Products keep their written order.
// Names are resolved by the caller.

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "twistlab/tensor.hpp"

namespace twistlab {

/// A scalar (implicitly times the identity) or an operator.
struct Value {
  bool is_matrix = false;
  cplx scalar{0.0};
  ComplexMatrix matrix;

  static Value of(cplx s) { return Value{false, s, {}}; }
  static Value of(ComplexMatrix m) { return Value{true, 0.0, std::move(m)}; }

  ComplexMatrix to_matrix(Eigen::Index dim) const;
};

using Resolver = std::function<Value(const std::string& name, const std::vector<std::string>& args)>;

class Expression {
public:
  struct Node;

  /// Throws DomainError with the offending position on a syntax error.
  static Expression parse(std::string_view text);

  Value evaluate(const Resolver& resolve) const;
  const std::string& text() const { return text_; }

private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

struct Relation {
  std::string id;
  std::string text;
  Expression lhs;
  Expression rhs;

  static Relation parse(std::string id, std::string_view text);

  /// Relative residual of lhs − rhs as operators of dimension `dim`.
  double residual(const Resolver& resolve, Eigen::Index dim) const;
};

}  // namespace twistlab
