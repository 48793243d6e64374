#include "twistlab/expression.hpp"

#include <cctype>
#include <cstdlib>
#include <variant>

#include "twistlab/errors.hpp"

namespace twistlab {

ComplexMatrix Value::to_matrix(Eigen::Index dim) const {
  if (is_matrix) {
    if (matrix.rows() != dim || matrix.cols() != dim) {
      throw DomainError("expression: operator dimension mismatch");
    }
    return matrix;
  }
  return scalar * identity(dim);
}

struct Expression::Node {
  struct Number {
    double value;
  };
  struct Symbol {
    std::string name;
    std::vector<std::string> args;
  };
  struct Sum {
    std::vector<std::pair<int, std::shared_ptr<const Node>>> terms;  // sign, term
  };
  struct Product {
    std::vector<std::shared_ptr<const Node>> factors;
  };
  struct Power {
    std::shared_ptr<const Node> base;
    int exponent;
  };
  std::variant<Number, Symbol, Sum, Product, Power> body;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse_all() {
    NodePtr node = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return node;
  }

private:
  [[noreturn]] void fail(const std::string& what) const {
    throw DomainError("expression parse error at " + std::to_string(pos_) + " in '" +
                      std::string(text_) + "': " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool starts_primary() {
    const char c = peek();
    return std::isalnum(static_cast<unsigned char>(c)) || c == '(' || c == '.';
  }

  NodePtr expr() {
    Expression::Node::Sum sum;
    int sign = 1;
    if (peek() == '-' || peek() == '+') {
      sign = text_[pos_] == '-' ? -1 : 1;
      ++pos_;
    }
    sum.terms.emplace_back(sign, term());
    while (peek() == '+' || peek() == '-') {
      sign = text_[pos_] == '-' ? -1 : 1;
      ++pos_;
      sum.terms.emplace_back(sign, term());
    }
    if (sum.terms.size() == 1 && sum.terms.front().first == 1) return sum.terms.front().second;
    return std::make_shared<const Expression::Node>(Expression::Node{std::move(sum)});
  }

  NodePtr term() {
    Expression::Node::Product product;
    product.factors.push_back(power());
    while (true) {
      if (peek() == '*') {
        ++pos_;
        product.factors.push_back(power());
      } else if (starts_primary()) {
        product.factors.push_back(power());
      } else {
        break;
      }
    }
    if (product.factors.size() == 1) return product.factors.front();
    return std::make_shared<const Expression::Node>(Expression::Node{std::move(product)});
  }

  NodePtr power() {
    NodePtr base = primary();
    if (peek() != '^') return base;
    ++pos_;
    int sign = 1;
    if (peek() == '-') {
      sign = -1;
      ++pos_;
    }
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    const int exponent = sign * std::atoi(std::string(text_.substr(start, pos_ - start)).c_str());
    return std::make_shared<const Expression::Node>(
        Expression::Node{Expression::Node::Power{std::move(base), exponent}});
  }

  std::string name() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    if (start == pos_) fail("expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }

  NodePtr primary() {
    const char c = peek();
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::string rest(text_.substr(pos_));
      char* end = nullptr;
      const double value = std::strtod(rest.c_str(), &end);
      pos_ += static_cast<std::size_t>(end - rest.c_str());
      return std::make_shared<const Expression::Node>(
          Expression::Node{Expression::Node::Number{value}});
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) fail("expected a factor");
    Expression::Node::Symbol symbol{name(), {}};
    symbol.args = arguments();
    return std::make_shared<const Expression::Node>(Expression::Node{std::move(symbol)});
  }

  // "(u,v)" directly after a name is an argument list; anything else in
  // parentheses is a factor, so the position is restored.
  std::vector<std::string> arguments() {
    const std::size_t start = pos_;
    std::vector<std::string> args;
    if (pos_ >= text_.size() || text_[pos_] != '(') return args;
    ++pos_;
    while (true) {
      skip_space();
      const std::size_t begin = pos_;
      while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (begin == pos_) break;
      args.emplace_back(text_.substr(begin, pos_ - begin));
      const char c = peek();
      if (c == ')') {
        ++pos_;
        return args;
      }
      if (c != ',') break;
      ++pos_;
    }
    pos_ = start;
    return {};
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

Value multiply(const Value& a, const Value& b) {
  if (!a.is_matrix && !b.is_matrix) return Value::of(a.scalar * b.scalar);
  if (!a.is_matrix) return Value::of(ComplexMatrix(a.scalar * b.matrix));
  if (!b.is_matrix) return Value::of(ComplexMatrix(b.scalar * a.matrix));
  return Value::of(ComplexMatrix(a.matrix * b.matrix));
}

Value add(const Value& a, const Value& b, int sign) {
  if (!a.is_matrix && !b.is_matrix) return Value::of(a.scalar + static_cast<double>(sign) * b.scalar);
  if (a.is_matrix && b.is_matrix) {
    return Value::of(ComplexMatrix(a.matrix + static_cast<double>(sign) * b.matrix));
  }
  const Eigen::Index dim = a.is_matrix ? a.matrix.rows() : b.matrix.rows();
  return Value::of(ComplexMatrix(a.to_matrix(dim) + static_cast<double>(sign) * b.to_matrix(dim)));
}

Value evaluate_node(const Expression::Node& node, const Resolver& resolve) {
  return std::visit(
      [&](const auto& body) -> Value {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, Expression::Node::Number>) {
          return Value::of(cplx{body.value});
        } else if constexpr (std::is_same_v<T, Expression::Node::Symbol>) {
          return resolve(body.name, body.args);
        } else if constexpr (std::is_same_v<T, Expression::Node::Sum>) {
          Value acc = Value::of(cplx{0.0});
          for (const auto& [sign, term] : body.terms) acc = add(acc, evaluate_node(*term, resolve), sign);
          return acc;
        } else if constexpr (std::is_same_v<T, Expression::Node::Product>) {
          Value acc = evaluate_node(*body.factors.front(), resolve);
          for (std::size_t i = 1; i < body.factors.size(); ++i) {
            acc = multiply(acc, evaluate_node(*body.factors[i], resolve));
          }
          return acc;
        } else {
          Value base = evaluate_node(*body.base, resolve);
          if (body.exponent < 0) {
            base = base.is_matrix ? Value::of(ComplexMatrix(base.matrix.partialPivLu().inverse()))
                                  : Value::of(1.0 / base.scalar);
          }
          Value acc = Value::of(cplx{1.0});
          for (int k = 0; k < std::abs(body.exponent); ++k) acc = multiply(acc, base);
          return acc;
        }
      },
      node.body);
}

}  // namespace

Expression Expression::parse(std::string_view text) {
  Expression e;
  e.root_ = Parser(text).parse_all();
  e.text_ = std::string(text);
  return e;
}

Value Expression::evaluate(const Resolver& resolve) const { return evaluate_node(*root_, resolve); }

Relation Relation::parse(std::string id, std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || text.find('=', eq + 1) != std::string_view::npos) {
    throw DomainError("relation '" + std::string(text) + "' must contain exactly one '='");
  }
  return Relation{std::move(id), std::string(text), Expression::parse(text.substr(0, eq)),
                  Expression::parse(text.substr(eq + 1))};
}

double Relation::residual(const Resolver& resolve, Eigen::Index dim) const {
  return relative_residual(lhs.evaluate(resolve).to_matrix(dim), rhs.evaluate(resolve).to_matrix(dim));
}

}  // namespace twistlab
