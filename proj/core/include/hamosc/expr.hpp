#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

namespace hamosc {

/// Immutable scalar expression of the time variable `t`.
///
/// Grammar (whitespace-insensitive):
///
///     expr    := term (('+' | '-') term)*
///     term    := unary (('*' | '/') unary)*
///     unary   := '-' unary | power
///     power   := primary ('^' unary)?          -- right-associative
///     primary := number | 't' | 'pi' | 'e' | func '(' expr ')' | '(' expr ')'
///     func    := sin | cos | tan | exp | log | sqrt | abs | sinh | cosh
///
/// Copies share the underlying tree.
class ScalarExpr {
 public:
  enum class Kind : std::uint8_t { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
  enum class Func : std::uint8_t { Sin, Cos, Tan, Exp, Log, Sqrt, Abs, Sinh, Cosh };

  struct Node;

  /// The constant 0.
  ScalarExpr();

  static ScalarExpr constant(double value);
  static ScalarExpr variable();
  static ScalarExpr negate(ScalarExpr operand);
  static ScalarExpr binary(Kind op, ScalarExpr lhs, ScalarExpr rhs);
  static ScalarExpr call(Func fn, ScalarExpr arg);

  /// Throws DomainError on log of a nonpositive value, division by zero, or a non-finite result.
  double eval(double t) const;

  /// True when the value does not depend on t.
  bool is_constant() const noexcept;

  /// Fully parenthesized text that parses back to an equivalent tree.
  std::string to_string() const;

  const Node& node() const noexcept { return *node_; }

 private:
  friend ScalarExpr parse_expr(std::string_view text);

  explicit ScalarExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct ScalarExpr::Node {
  Kind kind = Kind::Number;
  Func func = Func::Sin;
  double value = 0.0;
  bool depends_on_t = false;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

/// Parses an expression; throws ParseError carrying the byte offset and expected tokens.
ScalarExpr parse_expr(std::string_view text);

}  // namespace hamosc
