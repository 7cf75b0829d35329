#include <doctest.h>

#include <cmath>
#include <vector>

#include "opjensen/convexfn.hpp"
#include "opjensen/rng.hpp"

using namespace opjensen;

namespace {

double ev(const ScalarFunction& f, std::vector<double> pt) { return f.eval(pt); }

double ev1(const std::string& text, double x) {
  return ev(ScalarFunction::parse(text, 1), {x});
}

}  // namespace

TEST_CASE("basic parsing and evaluation") {
  CHECK(ev(ScalarFunction::parse("x1^2 + x2^2", 2), {3, 4}) == doctest::Approx(25.0));
  CHECK(ev(ScalarFunction::parse("exp(x1)", 1), {0}) == doctest::Approx(1.0));
  CHECK(ev(ScalarFunction::parse("x1*x2", 2), {3, 4}) == doctest::Approx(12.0));
  CHECK(ev(ScalarFunction::parse("max(x1,x2)", 2), {-1, 5}) == doctest::Approx(5.0));
  CHECK(ev(ScalarFunction::parse("min(x1,x2,3)", 2), {7, 5}) == doctest::Approx(3.0));
  CHECK(ev(ScalarFunction::parse("log(exp(x1)+exp(x2))", 2), {0, 0}) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("grammar corners") {
  CHECK(ev1("2+3*4", 0) == doctest::Approx(14.0));
  CHECK(ev1("2^3*2", 0) == doctest::Approx(16.0));
  CHECK(ev1("(1+1)^3", 0) == doctest::Approx(8.0));
  CHECK(ev1("6/3/2", 0) == doctest::Approx(1.0));
  CHECK(ev1("1 - 2 - 3", 0) == doctest::Approx(-4.0));
  CHECK(ev1("x1^0", 5) == doctest::Approx(1.0));
  CHECK(ev1("2.5e2", 0) == doctest::Approx(250.0));
  // '-' binds inside base, so the exponent applies to the negated operand
  CHECK(ev1("-x1^2", 3) == doctest::Approx(9.0));
  CHECK(ev1("-(x1^2)", 3) == doctest::Approx(-9.0));
  CHECK(ev1("--x1", 3) == doctest::Approx(3.0));
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_WITH_AS(ScalarFunction::parse("x3", 2), doctest::Contains("out of range"),
                       ValidationError);
  CHECK_THROWS_WITH_AS(ScalarFunction::parse("x1 +", 1), doctest::Contains("position"),
                       ValidationError);
  CHECK_THROWS_WITH_AS(ScalarFunction::parse("(x1", 1), doctest::Contains("')'"),
                       ValidationError);
  CHECK_THROWS_WITH_AS(ScalarFunction::parse("x1^2.5", 1),
                       doctest::Contains("integer exponent"), ValidationError);
  CHECK_THROWS_WITH_AS(ScalarFunction::parse("x1^-2", 1),
                       doctest::Contains("integer exponent"), ValidationError);
  CHECK_THROWS_WITH_AS(ScalarFunction::parse("foo(x1)", 1),
                       doctest::Contains("unknown identifier"), ValidationError);
  CHECK_THROWS_WITH_AS(ScalarFunction::parse("exp(x1, x1)", 1),
                       doctest::Contains("one argument"), ValidationError);
  CHECK_THROWS_WITH_AS(ScalarFunction::parse("x1 @ 2", 1),
                       doctest::Contains("unexpected character"), ValidationError);
  CHECK_THROWS_AS(ScalarFunction::parse("x0", 1), ValidationError);
}

TEST_CASE("evaluation domain errors") {
  CHECK_THROWS_AS(ev1("log(x1)", -1.0), EvalError);
  CHECK_THROWS_AS(ev1("sqrt(x1)", -1.0), EvalError);
  CHECK_THROWS_AS(ev1("1/x1", 0.0), EvalError);
  CHECK_THROWS_AS(ev1("exp(x1)", 1e4), EvalError);  // overflows to non-finite
}

TEST_CASE("printing round-trips through the parser") {
  const char* corpus[] = {
      "x1^2 + x2^2", "-x1^2",        "-(x1 + x2)*x1",  "max(x1, min(x2, 0.5))",
      "1/(1 + x1^2)", "sqrt(abs(x1))", "exp(x1)/exp(x2)", "((x1))",
      "2*x1^3 - 4.5", "log(exp(x1) + exp(x2))",
  };
  Rng rng(42);
  for (const char* text : corpus) {
    const ScalarFunction f1 = ScalarFunction::parse(text, 2);
    const ScalarFunction f2 = ScalarFunction::parse(f1.to_string(), 2);
    for (int t = 0; t < 100; ++t) {
      std::vector<double> pt = {rng.uniform(-3, 3), rng.uniform(-3, 3)};
      double v1 = 0, v2 = 0;
      bool e1 = false, e2 = false;
      try {
        v1 = f1.eval(pt);
      } catch (const EvalError&) {
        e1 = true;
      }
      try {
        v2 = f2.eval(pt);
      } catch (const EvalError&) {
        e2 = true;
      }
      REQUIRE(e1 == e2);
      if (!e1) REQUIRE(v1 == v2);
    }
  }
}

TEST_CASE("catalog values") {
  CHECK(ev(ScalarFunction::catalog("p_norm", {.p = 2}, 2), {3, 4}) == doctest::Approx(5.0));
  CHECK(ev(ScalarFunction::catalog("neg_entropy", {}, 1), {1}) == doctest::Approx(0.0));
  CHECK(ev(ScalarFunction::catalog("quadratic_form", {}, 2), {1, 2}) == doctest::Approx(5.0));
  CHECK(ev(ScalarFunction::catalog("log_sum_exp", {}, 2), {0, 0}) ==
        doctest::Approx(std::log(2.0)));
  CHECK(ev(ScalarFunction::catalog("max_coord", {}, 3), {1, 7, -2}) == doctest::Approx(7.0));
  CHECK(ev(ScalarFunction::catalog("exp_coord", {.index = 2}, 2), {5, 0}) ==
        doctest::Approx(1.0));
  CHECK(ev(ScalarFunction::catalog("power_abs", {.p = 3}, 2), {-2, 1}) == doctest::Approx(9.0));
  CHECK(ev(ScalarFunction::catalog("cube_coord", {.index = 2}, 2), {1, 2}) ==
        doctest::Approx(8.0));
  CHECK(ev(ScalarFunction::catalog("product_coords", {}, 3), {2, 3, -1}) ==
        doctest::Approx(-6.0));
  CHECK(ev(ScalarFunction::catalog("sin_coord", {}, 1), {0}) == doctest::Approx(0.0));
}

TEST_CASE("catalog validation") {
  CHECK_THROWS_AS(ScalarFunction::catalog("p_norm", {.p = 0.5}, 2), ValidationError);
  CHECK_THROWS_AS(ScalarFunction::catalog("nope", {}, 2), ValidationError);
  CHECK_THROWS_AS(ScalarFunction::catalog("sin_coord", {.index = 3}, 2), ValidationError);
  CatalogParams indefinite;
  indefinite.quadratic = RealMatrix(2, 2);
  indefinite.quadratic << 1, 0, 0, -1;
  CHECK_THROWS_AS(ScalarFunction::catalog("quadratic_form", indefinite, 2), ValidationError);
  CHECK_THROWS_AS(ev(ScalarFunction::catalog("neg_entropy", {}, 1), {-0.5}), EvalError);
}

TEST_CASE("probe accepts a convex function") {
  const ConvexityVerdict v = midpoint_convexity_probe(
      ScalarFunction::parse("x1^2", 1), CubeDomain({{-2, 2}}), 5000, 1);
  CHECK(v.status == ConvexityStatus::probably_convex);
}

TEST_CASE("probe finds a witness for the product") {
  const ScalarFunction f = ScalarFunction::parse("x1*x2", 2);
  const CubeDomain dom({{-1, 1}, {-1, 1}});

  // hand witness validates the re-check path: a=(1,-1), b=(-1,1)
  const double fa = f.eval(std::vector<double>{1, -1});
  const double fb = f.eval(std::vector<double>{-1, 1});
  const double fm = f.eval(std::vector<double>{0, 0});
  CHECK(fm - 0.5 * (fa + fb) == doctest::Approx(1.0));

  const ConvexityVerdict v = midpoint_convexity_probe(f, dom, 10000, 1);
  REQUIRE(v.status == ConvexityStatus::not_convex);
  REQUIRE(v.witness.has_value());
  std::vector<double> mid(2);
  for (int i = 0; i < 2; ++i) mid[static_cast<std::size_t>(i)] =
      0.5 * (v.witness->a[static_cast<std::size_t>(i)] + v.witness->b[static_cast<std::size_t>(i)]);
  const double gap = f.eval(mid) - 0.5 * (f.eval(v.witness->a) + f.eval(v.witness->b));
  CHECK(gap == doctest::Approx(v.witness->midpoint_gap));
  CHECK(gap > 0.0);
}

TEST_CASE("probe finds a witness for the cube") {
  const ScalarFunction f = ScalarFunction::parse("x1^3", 1);

  // grid-scan oracle: violating pairs exist in [-2, 2]
  bool grid_hit = false;
  for (double a = -2.0; a <= 2.0 && !grid_hit; a += 0.25)
    for (double b = -2.0; b <= 2.0 && !grid_hit; b += 0.25) {
      const double gap = f.eval(std::vector<double>{0.5 * (a + b)}) -
                         0.5 * (f.eval(std::vector<double>{a}) + f.eval(std::vector<double>{b}));
      if (gap > 1e-6) grid_hit = true;
    }
  REQUIRE(grid_hit);

  const ConvexityVerdict v =
      midpoint_convexity_probe(f, CubeDomain({{-2, 2}}), 10000, 1);
  CHECK(v.status == ConvexityStatus::not_convex);
}

TEST_CASE("probe reports evaluation failures as indeterminate") {
  const ConvexityVerdict v = midpoint_convexity_probe(
      ScalarFunction::parse("log(x1)", 1), CubeDomain({{-1, 1}}), 1000, 1);
  CHECK(v.status == ConvexityStatus::indeterminate);
  CHECK(!v.diagnostic.empty());
}

TEST_CASE("arity inference") {
  CHECK(ScalarFunction::infer_arity("x1*x3") == 3);
  CHECK(ScalarFunction::infer_arity("1 + 2") == 1);
  CHECK(ScalarFunction::infer_arity("max(x2, 0)") == 2);
}
