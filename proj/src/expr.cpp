#include "momsec/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace momsec {

ParseError::ParseError(std::string msg, std::size_t off,
                       std::vector<std::string> exp)
    : std::runtime_error(std::move(msg)), offset(off), expected(std::move(exp)) {}

EvalError::EvalError(std::string msg, std::string sub)
    : std::runtime_error(std::move(msg)), subexpr(std::move(sub)) {}

namespace detail {

enum class Op {
  Num, Coord, Add, Sub, Mul, Div, Neg, Pow, Sin, Cos, Exp, Log, Sqrt
};

struct ExprNode {
  Op op;
  double value = 0.0;      // Num
  int coord = -1;          // Coord
  std::string name;        // Coord
  int exponent = 0;        // Pow
  std::shared_ptr<const ExprNode> a, b;
};

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make_num(double v) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Num;
  n->value = v;
  return n;
}

NodePtr make_coord(int idx, std::string name) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Coord;
  n->coord = idx;
  n->name = std::move(name);
  return n;
}

NodePtr make_node(Op op, NodePtr a, NodePtr b = nullptr, int exponent = 0) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  n->exponent = exponent;
  return n;
}

bool is_num(const NodePtr& n, double v) {
  return n->op == Op::Num && n->value == v;
}

// Constant folding plus elision of additive/multiplicative units. Keeps the
// trees produced by nested differential operators from ballooning; pointwise
// evaluation is unchanged.
NodePtr mk_add(NodePtr a, NodePtr b) {
  if (a->op == Op::Num && b->op == Op::Num) return make_num(a->value + b->value);
  if (is_num(a, 0.0)) return b;
  if (is_num(b, 0.0)) return a;
  return make_node(Op::Add, std::move(a), std::move(b));
}

NodePtr mk_neg(NodePtr a) {
  if (a->op == Op::Num) return make_num(-a->value);
  if (a->op == Op::Neg) return a->a;
  return make_node(Op::Neg, std::move(a));
}

NodePtr mk_sub(NodePtr a, NodePtr b) {
  if (a->op == Op::Num && b->op == Op::Num) return make_num(a->value - b->value);
  if (is_num(b, 0.0)) return a;
  if (is_num(a, 0.0)) return mk_neg(b);
  return make_node(Op::Sub, std::move(a), std::move(b));
}

NodePtr mk_mul(NodePtr a, NodePtr b) {
  if (a->op == Op::Num && b->op == Op::Num) return make_num(a->value * b->value);
  if (is_num(a, 0.0) || is_num(b, 0.0)) return make_num(0.0);
  if (is_num(a, 1.0)) return b;
  if (is_num(b, 1.0)) return a;
  if (is_num(a, -1.0)) return mk_neg(b);
  if (is_num(b, -1.0)) return mk_neg(a);
  return make_node(Op::Mul, std::move(a), std::move(b));
}

NodePtr mk_div(NodePtr a, NodePtr b) {
  if (is_num(a, 0.0) && !is_num(b, 0.0)) return make_num(0.0);
  if (is_num(b, 1.0)) return a;
  return make_node(Op::Div, std::move(a), std::move(b));
}

NodePtr mk_pow(NodePtr a, int e) {
  if (e == 0) return make_num(1.0);
  if (e == 1) return a;
  if (a->op == Op::Num) return make_num(std::pow(a->value, e));
  return make_node(Op::Pow, std::move(a), nullptr, e);
}

NodePtr mk_fun(Op op, NodePtr a) {
  if (a->op == Op::Num) {
    switch (op) {
      case Op::Sin: return make_num(std::sin(a->value));
      case Op::Cos: return make_num(std::cos(a->value));
      case Op::Exp: return make_num(std::exp(a->value));
      default: break;  // log/sqrt keep their domain checks for eval()
    }
  }
  return make_node(op, std::move(a));
}

int precedence(Op op) {
  switch (op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    default: return 5;
  }
}

void print_node(const ExprNode* n, std::ostream& os, int parent_prec) {
  int prec = precedence(n->op);
  bool paren = prec < parent_prec;
  if (paren) os << '(';
  switch (n->op) {
    case Op::Num: {
      char buf[32];
      auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), n->value);
      (void)ec;
      os << std::string_view(buf, p - buf);
      break;
    }
    case Op::Coord: os << n->name; break;
    case Op::Add:
      // right child one level tighter so reparsing rebuilds the same tree
      print_node(n->a.get(), os, prec);
      os << '+';
      print_node(n->b.get(), os, prec + 1);
      break;
    case Op::Sub:
      print_node(n->a.get(), os, prec);
      os << '-';
      print_node(n->b.get(), os, prec + 1);
      break;
    case Op::Mul:
      print_node(n->a.get(), os, prec);
      os << '*';
      print_node(n->b.get(), os, prec + 1);
      break;
    case Op::Div:
      print_node(n->a.get(), os, prec);
      os << '/';
      print_node(n->b.get(), os, prec + 1);
      break;
    case Op::Neg:
      os << '-';
      print_node(n->a.get(), os, prec + 1);
      break;
    case Op::Pow:
      print_node(n->a.get(), os, prec + 1);
      os << '^';
      if (n->exponent < 0) os << '(' << n->exponent << ')';
      else os << n->exponent;
      break;
    case Op::Sin: os << "sin("; print_node(n->a.get(), os, 0); os << ')'; break;
    case Op::Cos: os << "cos("; print_node(n->a.get(), os, 0); os << ')'; break;
    case Op::Exp: os << "exp("; print_node(n->a.get(), os, 0); os << ')'; break;
    case Op::Log: os << "log("; print_node(n->a.get(), os, 0); os << ')'; break;
    case Op::Sqrt: os << "sqrt("; print_node(n->a.get(), os, 0); os << ')'; break;
  }
  if (paren) os << ')';
}

std::string print_to_string(const ExprNode* n) {
  std::ostringstream os;
  print_node(n, os, 0);
  return os.str();
}

double eval_node(const ExprNode* n, std::span<const double> pt) {
  switch (n->op) {
    case Op::Num: return n->value;
    case Op::Coord:
      if (n->coord < 0 || static_cast<std::size_t>(n->coord) >= pt.size())
        throw EvalError("point dimension does not match patch", n->name);
      return pt[static_cast<std::size_t>(n->coord)];
    case Op::Add: return eval_node(n->a.get(), pt) + eval_node(n->b.get(), pt);
    case Op::Sub: return eval_node(n->a.get(), pt) - eval_node(n->b.get(), pt);
    case Op::Mul: return eval_node(n->a.get(), pt) * eval_node(n->b.get(), pt);
    case Op::Div: {
      double denom = eval_node(n->b.get(), pt);
      if (denom == 0.0)
        throw EvalError("division by zero", print_to_string(n->b.get()));
      return eval_node(n->a.get(), pt) / denom;
    }
    case Op::Neg: return -eval_node(n->a.get(), pt);
    case Op::Pow: return std::pow(eval_node(n->a.get(), pt), n->exponent);
    case Op::Sin: return std::sin(eval_node(n->a.get(), pt));
    case Op::Cos: return std::cos(eval_node(n->a.get(), pt));
    case Op::Exp: return std::exp(eval_node(n->a.get(), pt));
    case Op::Log: {
      double v = eval_node(n->a.get(), pt);
      if (v <= 0.0)
        throw EvalError("log of nonpositive value", print_to_string(n->a.get()));
      return std::log(v);
    }
    case Op::Sqrt: {
      double v = eval_node(n->a.get(), pt);
      if (v < 0.0)
        throw EvalError("sqrt of negative value", print_to_string(n->a.get()));
      return std::sqrt(v);
    }
  }
  return 0.0;
}

NodePtr diff_node(const NodePtr& n, int idx) {
  switch (n->op) {
    case Op::Num: return make_num(0.0);
    case Op::Coord: return make_num(n->coord == idx ? 1.0 : 0.0);
    case Op::Add: return mk_add(diff_node(n->a, idx), diff_node(n->b, idx));
    case Op::Sub: return mk_sub(diff_node(n->a, idx), diff_node(n->b, idx));
    case Op::Mul:
      return mk_add(mk_mul(diff_node(n->a, idx), n->b),
                    mk_mul(n->a, diff_node(n->b, idx)));
    case Op::Div:
      // (a/b)' = a'/b - a*b'/b^2
      return mk_sub(mk_div(diff_node(n->a, idx), n->b),
                    mk_div(mk_mul(n->a, diff_node(n->b, idx)), mk_pow(n->b, 2)));
    case Op::Neg: return mk_neg(diff_node(n->a, idx));
    case Op::Pow:
      return mk_mul(mk_mul(make_num(n->exponent), mk_pow(n->a, n->exponent - 1)),
                    diff_node(n->a, idx));
    case Op::Sin: return mk_mul(mk_fun(Op::Cos, n->a), diff_node(n->a, idx));
    case Op::Cos:
      return mk_neg(mk_mul(mk_fun(Op::Sin, n->a), diff_node(n->a, idx)));
    case Op::Exp: return mk_mul(mk_fun(Op::Exp, n->a), diff_node(n->a, idx));
    case Op::Log: return mk_div(diff_node(n->a, idx), n->a);
    case Op::Sqrt:
      return mk_div(diff_node(n->a, idx),
                    mk_mul(make_num(2.0), mk_fun(Op::Sqrt, n->a)));
  }
  return make_num(0.0);
}

bool constant_node(const ExprNode* n) {
  if (n->op == Op::Coord) return false;
  if (n->a && !constant_node(n->a.get())) return false;
  if (n->b && !constant_node(n->b.get())) return false;
  return true;
}

}  // namespace detail

using detail::ExprNode;
using detail::Op;

Expr::Expr() : node_(detail::make_num(0.0)) {}
Expr::Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}

Expr Expr::number(double v) { return Expr(detail::make_num(v)); }
Expr Expr::coordinate(int index, std::string name) {
  return Expr(detail::make_coord(index, std::move(name)));
}

Expr Expr::diff(int index) const { return Expr(detail::diff_node(node_, index)); }

double Expr::eval(std::span<const double> point) const {
  return detail::eval_node(node_.get(), point);
}

std::string Expr::print() const { return detail::print_to_string(node_.get()); }

bool Expr::is_constant() const { return detail::constant_node(node_.get()); }

bool Expr::is_zero() const {
  return node_->op == Op::Num && node_->value == 0.0;
}

Expr operator+(const Expr& a, const Expr& b) { return Expr(detail::mk_add(a.node_, b.node_)); }
Expr operator-(const Expr& a, const Expr& b) { return Expr(detail::mk_sub(a.node_, b.node_)); }
Expr operator*(const Expr& a, const Expr& b) { return Expr(detail::mk_mul(a.node_, b.node_)); }
Expr operator/(const Expr& a, const Expr& b) { return Expr(detail::mk_div(a.node_, b.node_)); }
Expr operator-(const Expr& a) { return Expr(detail::mk_neg(a.node_)); }
Expr pow(const Expr& a, int exponent) { return Expr(detail::mk_pow(a.node_, exponent)); }
Expr sin(const Expr& a) { return Expr(detail::mk_fun(Op::Sin, a.node_)); }
Expr cos(const Expr& a) { return Expr(detail::mk_fun(Op::Cos, a.node_)); }
Expr exp(const Expr& a) { return Expr(detail::mk_fun(Op::Exp, a.node_)); }
Expr log(const Expr& a) { return Expr(detail::mk_fun(Op::Log, a.node_)); }
Expr sqrt(const Expr& a) { return Expr(detail::mk_fun(Op::Sqrt, a.node_)); }

namespace {

struct Parser {
  const std::string& src;
  const std::vector<std::string>& coords;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos])))
      ++pos;
  }

  bool at_end() {
    skip_ws();
    return pos >= src.size();
  }

  bool accept(char c) {
    skip_ws();
    if (pos < src.size() && src[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    skip_ws();
    std::string msg = "syntax error at byte " + std::to_string(pos) + ": expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) msg += " | ";
      msg += expected[i];
    }
    throw ParseError(msg, pos, std::move(expected));
  }

  Expr parse_expr() {
    Expr e = parse_term();
    for (;;) {
      if (accept('+')) e = e + parse_term();
      else if (accept('-')) e = e - parse_term();
      else return e;
    }
  }

  Expr parse_term() {
    Expr e = parse_factor();
    for (;;) {
      if (accept('*')) e = e * parse_factor();
      else if (accept('/')) e = e / parse_factor();
      else return e;
    }
  }

  Expr parse_factor() {
    bool neg = accept('-');
    Expr e = parse_atom();
    if (accept('^')) e = pow(e, parse_integer());
    return neg ? -e : e;
  }

  int parse_integer() {
    skip_ws();
    bool paren = accept('(');
    skip_ws();
    std::size_t start = pos;
    if (pos < src.size() && (src[pos] == '-' || src[pos] == '+')) ++pos;
    std::size_t digits = pos;
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos])))
      ++pos;
    if (pos == digits) fail({"integer exponent"});
    int value = 0;
    auto res = std::from_chars(src.data() + start, src.data() + pos, value);
    if (res.ec != std::errc{}) fail({"integer exponent"});
    if (paren && !accept(')')) fail({")"});
    return value;
  }

  Expr parse_atom() {
    skip_ws();
    if (pos >= src.size()) fail({"number", "identifier", "("});
    char c = src[pos];
    if (c == '(') {
      ++pos;
      Expr e = parse_expr();
      if (!accept(')')) fail({")"});
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    fail({"number", "identifier", "("});
  }

  Expr parse_number() {
    std::size_t start = pos;
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos])))
      ++pos;
    if (pos < src.size() && src[pos] == '.') {
      ++pos;
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos])))
        ++pos;
    }
    if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
      std::size_t mark = pos;
      ++pos;
      if (pos < src.size() && (src[pos] == '+' || src[pos] == '-')) ++pos;
      if (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos])))
          ++pos;
      } else {
        pos = mark;  // 'e' was the start of an identifier, not an exponent
      }
    }
    double value = 0.0;
    auto res = std::from_chars(src.data() + start, src.data() + pos, value);
    if (res.ec != std::errc{} || res.ptr != src.data() + pos) {
      pos = start;
      fail({"number"});
    }
    return Expr::number(value);
  }

  Expr parse_ident() {
    std::size_t start = pos;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
      ++pos;
    std::string name = src.substr(start, pos - start);
    if (accept('(')) {
      Expr arg = parse_expr();
      if (!accept(')')) fail({")"});
      if (name == "sin") return sin(arg);
      if (name == "cos") return cos(arg);
      if (name == "exp") return exp(arg);
      if (name == "log") return log(arg);
      if (name == "sqrt") return sqrt(arg);
      throw ParseError("unknown function '" + name + "' at byte " +
                           std::to_string(start),
                       start, {"sin", "cos", "exp", "log", "sqrt"});
    }
    for (std::size_t i = 0; i < coords.size(); ++i)
      if (coords[i] == name)
        return Expr::coordinate(static_cast<int>(i), name);
    throw ParseError("unknown identifier '" + name + "' at byte " +
                         std::to_string(start),
                     start, {"coordinate name"});
  }
};

}  // namespace

Expr parse(const std::string& source, const std::vector<std::string>& coords) {
  Parser p{source, coords};
  Expr e = p.parse_expr();
  if (!p.at_end()) p.fail({"+", "-", "*", "/", "end of input"});
  return e;
}

}  // namespace momsec
