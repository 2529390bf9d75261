#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "momsec/expr.hpp"
#include "momsec/tensor.hpp"

using namespace momsec;

namespace {

const std::vector<std::string> kXY = {"x", "y"};

double ev(const Expr& e, std::vector<double> pt) { return e.eval(pt); }

// random expression, safe to evaluate and differentiate on [-1,1]^2
Expr random_expr(SplitMix64& rng, int depth) {
  auto coef = [&] { return Expr::number(2.0 * rng.uniform01() - 1.0); };
  if (depth == 0) {
    switch (rng.next() % 3) {
      case 0: return coef();
      case 1: return Expr::coordinate(0, "x");
      default: return Expr::coordinate(1, "y");
    }
  }
  Expr a = random_expr(rng, depth - 1);
  Expr b = random_expr(rng, depth - 1);
  switch (rng.next() % 8) {
    case 0: return a + b;
    case 1: return a - b;
    case 2: return a * b;
    case 3: return sin(a);
    case 4: return cos(a);
    case 5: return pow(a, 2 + static_cast<int>(rng.next() % 2));
    case 6: return a / (Expr::number(2.5) + b * b);
    default: return log(Expr::number(2.0) + a * a) + sqrt(Expr::number(3.0) + b);
  }
}

double central_diff(const Expr& e, std::vector<double> pt, int i, double h) {
  std::vector<double> hi = pt, lo = pt;
  hi[i] += h;
  lo[i] -= h;
  return (e.eval(hi) - e.eval(lo)) / (2.0 * h);
}

}  // namespace

TEST_CASE("grammar and printing") {
  CHECK(parse("x^2 + y", kXY).print() == "x^2+y");
  CHECK(parse("-sin(x)*y", kXY).print() == "-sin(x)*y");
  CHECK(ev(parse("-sin(x)*y", kXY), {0, 5}) == doctest::Approx(0.0));
  CHECK(ev(parse("x*(y+2)", kXY), {1, 3}) == doctest::Approx(5.0));
  CHECK(ev(parse("x^2", {"x"}), {3}) == doctest::Approx(9.0));
  CHECK(ev(parse("exp(0)", {}), {}) == doctest::Approx(1.0));
  CHECK(ev(parse("x*y - y", kXY), {2, 7}) == doctest::Approx(7.0));
  CHECK(ev(parse("1.5e-1 + x", kXY), {0.5, 0}) == doctest::Approx(0.65));
  CHECK(ev(parse("x^(-2)", kXY), {2, 0}) == doctest::Approx(0.25));
  CHECK(ev(parse("  x +\t y ", kXY), {1, 2}) == doctest::Approx(3.0));
}

TEST_CASE("parse errors carry byte offsets and expectations") {
  try {
    parse("x+*y", kXY);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset == 2);
    CHECK(!e.expected.empty());
  }
  try {
    parse("x+q", kXY);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset == 2);
  }
  CHECK_THROWS_AS(parse("tan(x)", kXY), ParseError);
  CHECK_THROWS_AS(parse("x+", kXY), ParseError);
  CHECK_THROWS_AS(parse("(x", kXY), ParseError);
  CHECK_THROWS_AS(parse("x^y", kXY), ParseError);
}

TEST_CASE("eval domain errors name the subexpression") {
  CHECK_THROWS_AS(ev(parse("log(x)", kXY), {-1, 0}), EvalError);
  CHECK_THROWS_AS(ev(parse("sqrt(x)", kXY), {-1, 0}), EvalError);
  try {
    ev(parse("y/(x-1)", kXY), {1, 2});
    FAIL("expected EvalError");
  } catch (const EvalError& e) {
    CHECK(e.subexpr.find("x-1") != std::string::npos);
  }
}

TEST_CASE("derivative examples") {
  Expr e = parse("x^2*y", kXY).diff(0);
  CHECK(ev(e, {3, 5}) == doctest::Approx(30.0));
  CHECK(ev(parse("sin(x)", kXY).diff(0), {0, 0}) == doctest::Approx(1.0));

  // second derivative against the central-difference oracle, step 1e-4
  Expr g = parse("x^3", kXY);
  Expr g2 = g.diff(0).diff(0);
  double h = 1e-4;
  std::vector<double> p{2, 0}, ph{2 + h, 0}, pl{2 - h, 0};
  double fd = (g.diff(0).eval(ph) - g.diff(0).eval(pl)) / (2 * h);
  CHECK(ev(g2, p) == doctest::Approx(12.0));
  CHECK(std::abs(ev(g2, p) - fd) < 1e-6 * std::abs(fd));
}

TEST_CASE("diff agrees with finite differences on random expressions") {
  SplitMix64 rng(2024);
  int tried = 0;
  for (int t = 0; t < 60; ++t) {
    Expr e = random_expr(rng, 1 + static_cast<int>(rng.next() % 6));
    for (int s = 0; s < 4; ++s) {
      std::vector<double> pt{1.6 * rng.uniform01() - 0.8,
                             1.6 * rng.uniform01() - 0.8};
      for (int i = 0; i < 2; ++i) {
        double sym = e.diff(i).eval(pt);
        double fd = central_diff(e, pt, i, 1e-5);
        double denom = std::max({1.0, std::abs(sym), std::abs(fd)});
        CHECK(std::abs(sym - fd) / denom < 1e-6);
        ++tried;
      }
    }
  }
  CHECK(tried > 100);
}

TEST_CASE("Schwarz symmetry of mixed second derivatives") {
  SplitMix64 rng(77);
  for (int t = 0; t < 40; ++t) {
    Expr e = random_expr(rng, 1 + static_cast<int>(rng.next() % 5));
    Expr xy = e.diff(0).diff(1);
    Expr yx = e.diff(1).diff(0);
    for (int s = 0; s < 4; ++s) {
      std::vector<double> pt{1.6 * rng.uniform01() - 0.8,
                             1.6 * rng.uniform01() - 0.8};
      double a = xy.eval(pt), b = yx.eval(pt);
      CHECK(std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}));
    }
  }
}

TEST_CASE("parse(print(e)) evaluates equal to e") {
  SplitMix64 rng(5150);
  for (int t = 0; t < 60; ++t) {
    Expr e = random_expr(rng, 1 + static_cast<int>(rng.next() % 6));
    Expr r = parse(e.print(), kXY);
    for (int s = 0; s < 4; ++s) {
      std::vector<double> pt{1.6 * rng.uniform01() - 0.8,
                             1.6 * rng.uniform01() - 0.8};
      CHECK(e.eval(pt) == r.eval(pt));  // same tree shape, bit-identical
    }
  }
}

TEST_CASE("linearity and product rule of diff") {
  SplitMix64 rng(99);
  for (int t = 0; t < 30; ++t) {
    Expr e1 = random_expr(rng, 3), e2 = random_expr(rng, 3);
    double a = 2.0 * rng.uniform01() - 1.0, b = 2.0 * rng.uniform01() - 1.0;
    Expr lin = (Expr::number(a) * e1 + Expr::number(b) * e2).diff(0);
    Expr prod = (e1 * e2).diff(0);
    for (int s = 0; s < 3; ++s) {
      std::vector<double> pt{1.6 * rng.uniform01() - 0.8,
                             1.6 * rng.uniform01() - 0.8};
      double want_lin = a * e1.diff(0).eval(pt) + b * e2.diff(0).eval(pt);
      double want_prod =
          e1.diff(0).eval(pt) * e2.eval(pt) + e1.eval(pt) * e2.diff(0).eval(pt);
      CHECK(std::abs(lin.eval(pt) - want_lin) <=
            1e-12 * (1 + std::abs(want_lin)));
      CHECK(std::abs(prod.eval(pt) - want_prod) <=
            1e-12 * (1 + std::abs(want_prod)));
    }
  }
}
