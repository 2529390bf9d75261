#ifndef MOMSEC_EXPR_HPP
#define MOMSEC_EXPR_HPP

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace momsec {

/// Error thrown by parse(): carries the byte offset into the source and the
/// set of tokens that would have been accepted at that point.
struct ParseError : std::runtime_error {
  std::size_t offset;
  std::vector<std::string> expected;
  ParseError(std::string msg, std::size_t off, std::vector<std::string> exp);
};

/// Error thrown by eval() on domain violations (log of a nonpositive value,
/// division by zero, sqrt of a negative value). Carries the offending
/// subexpression in printed form.
struct EvalError : std::runtime_error {
  std::string subexpr;
  EvalError(std::string msg, std::string sub);
};

namespace detail {
struct ExprNode;
}

/// Immutable symbolic scalar expression over the coordinates of a patch.
///
/// Coordinates are referenced by index; parsing resolves names against the
/// coordinate list supplied to parse(). Expr is closed under diff(), so
/// operators built from repeated differentiation (nilpotency checks apply
/// them twice) stay inside the type. Nodes are shared and never mutated, so
/// values are safe to copy and evaluate concurrently.
class Expr {
public:
  Expr();  // the constant 0

  static Expr number(double v);
  static Expr coordinate(int index, std::string name);

  /// Exact symbolic partial derivative with respect to coordinate `index`.
  Expr diff(int index) const;

  /// IEEE double value at `point` (one value per patch coordinate).
  double eval(std::span<const double> point) const;
  double eval(std::initializer_list<double> point) const {
    return eval(std::span<const double>(point.begin(), point.size()));
  }

  /// Parenthesized text form; parse(print(e)) evaluates equal to e.
  std::string print() const;

  /// True if no coordinate occurs in the expression.
  bool is_constant() const;
  /// True if the expression is the literal constant 0.
  bool is_zero() const;

  friend Expr operator+(const Expr&, const Expr&);
  friend Expr operator-(const Expr&, const Expr&);
  friend Expr operator*(const Expr&, const Expr&);
  friend Expr operator/(const Expr&, const Expr&);
  friend Expr operator-(const Expr&);
  friend Expr pow(const Expr&, int exponent);
  friend Expr sin(const Expr&);
  friend Expr cos(const Expr&);
  friend Expr exp(const Expr&);
  friend Expr log(const Expr&);
  friend Expr sqrt(const Expr&);

  const detail::ExprNode* node() const { return node_.get(); }

private:
  explicit Expr(std::shared_ptr<const detail::ExprNode> n);
  std::shared_ptr<const detail::ExprNode> node_;
};

/// Parses `source` against the declared coordinate names. Grammar
/// (precedence low to high):
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := ['-'] atom ['^' integer]
///   atom   := number | ident | ident '(' expr ')' | '(' expr ')'
/// Builtins: sin, cos, exp, log, sqrt. Whitespace-insensitive.
Expr parse(const std::string& source, const std::vector<std::string>& coords);

}  // namespace momsec

#endif
