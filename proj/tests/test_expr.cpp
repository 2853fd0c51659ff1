#include "doctest.h"

#include "stpatc/expr.hpp"

using namespace stpatc;

namespace {

VarTable demo_vars() {
  VarTable vt;
  vt.entries.push_back({"PersonIndoorway", Domain::boolean()});
  vt.entries.push_back({"Trainposition", Domain::enumeration({"Aligned", "NotAligned"})});
  vt.entries.push_back({"currentSpeed", Domain::real(0, 200, 0)});
  vt.entries.push_back({"desiredSpeed", Domain::real(0, 200, 0)});
  vt.entries.push_back({"count", Domain::integer(0, 10)});
  return vt;
}

}  // namespace

TEST_CASE("expr: precedence and canonical rendering") {
  // unary > mul > add > relational > equality > && > ||
  ExprPtr e = parse_expression("a + b * c < d && !p || q == r");
  CHECK(render_expr(*e) == "a + b * c < d && !p || q == r");

  // explicit parentheses survive only when they change the tree
  CHECK(render_expr(*parse_expression("(a + b) * c")) == "(a + b) * c");
  CHECK(render_expr(*parse_expression("a + (b * c)")) == "a + b * c");
  CHECK(render_expr(*parse_expression("!(a && b)")) == "!(a && b)");
}

TEST_CASE("expr: associativity is left-to-right") {
  ExprPtr e = parse_expression("a - b - c");
  REQUIRE(e->kind == Expr::Kind::Binary);
  CHECK(e->bop == BinOp::Sub);
  CHECK(e->rhs->text == "c");
  CHECK(e->lhs->bop == BinOp::Sub);

  Env env{{"a", Value::number(10)}, {"b", Value::number(3)}, {"c", Value::number(2)}};
  CHECK(eval_expr(*e, env, "t").num == doctest::Approx(5));
}

TEST_CASE("expr: render styles") {
  ExprPtr e = parse_expression("currentSpeed >= desiredSpeed && !p");
  CHECK(render_expr(*e, RenderStyle::Canonical) == "currentSpeed >= desiredSpeed && !p");
  CHECK(render_expr(*e, RenderStyle::Compact) == "currentSpeed>=desiredSpeed&&!p");
  CHECK(render_expr(*e, RenderStyle::Smv) == "currentSpeed>=desiredSpeed & !p");

  ExprPtr eq = parse_expression("Trainposition == Aligned || x != y");
  CHECK(render_expr(*eq, RenderStyle::Smv) == "Trainposition=Aligned | x!=y");
}

TEST_CASE("expr: parse round-trip preserves the tree") {
  for (const char* src : {
           "power && currentSpeed >= initialSpeed && timeGap > safetyTimeGap",
           "stillstandtime + sqrt(currentTimegap)",
           "frontDistance / (currentSpeed + 1)",
           "-x + abs(y - 3) * 2",
           "!(a || b) && c == d",
       }) {
    ExprPtr once = parse_expression(src);
    ExprPtr twice = parse_expression(render_expr(*once));
    CHECK(expr_equal(*once, *twice));
  }
}

TEST_CASE("expr: syntax errors carry a column") {
  CHECK_THROWS_AS(parse_expression("a +"), ExprSyntaxError);
  CHECK_THROWS_AS(parse_expression("(a"), ExprSyntaxError);
  CHECK_THROWS_AS(parse_expression("a b"), ExprSyntaxError);
  CHECK_THROWS_AS(parse_expression(""), ExprSyntaxError);
  try {
    parse_expression("a && ");
    FAIL("expected ExprSyntaxError");
  } catch (const ExprSyntaxError& e) {
    CHECK(e.column >= 4);
  }
}

TEST_CASE("expr: typecheck accepts well-typed guards") {
  VarTable vt = demo_vars();
  CHECK_NOTHROW(typecheck_bool(*parse_expression("PersonIndoorway"), vt, "g"));
  CHECK_NOTHROW(typecheck_bool(*parse_expression("Trainposition == Aligned"), vt, "g"));
  CHECK_NOTHROW(
      typecheck_bool(*parse_expression("currentSpeed >= desiredSpeed && !PersonIndoorway"),
                     vt, "g"));
  CHECK_NOTHROW(typecheck_bool(*parse_expression("count + 1 < 5"), vt, "g"));
}

TEST_CASE("expr: typecheck rejects ill-typed guards") {
  VarTable vt = demo_vars();
  // numeric variable in boolean position
  CHECK_THROWS_AS(typecheck_bool(*parse_expression("currentSpeed"), vt, "g"),
                  ExprTypeError);
  // enum compared against a foreign literal
  CHECK_THROWS_AS(typecheck_bool(*parse_expression("Trainposition == Sideways"), vt, "g"),
                  ExprTypeError);
  // enum value with no equality context
  CHECK_THROWS_AS(typecheck_bool(*parse_expression("Aligned"), vt, "g"), ExprTypeError);
  // arithmetic on a boolean
  CHECK_THROWS_AS(typecheck_bool(*parse_expression("PersonIndoorway + 1 > 0"), vt, "g"),
                  ExprTypeError);
}

TEST_CASE("expr: typecheck_assignment matches the target domain") {
  VarTable vt = demo_vars();
  CHECK_NOTHROW(typecheck_assignment(Domain::real(0, 200, 0),
                                     *parse_expression("currentSpeed + 1"), vt, "a"));
  CHECK_NOTHROW(typecheck_assignment(Domain::enumeration({"Aligned", "NotAligned"}),
                                     *parse_expression("Aligned"), vt, "a"));
  CHECK_THROWS_AS(typecheck_assignment(Domain::boolean(),
                                       *parse_expression("currentSpeed"), vt, "a"),
                  ExprTypeError);
  CHECK_THROWS_AS(typecheck_assignment(Domain::enumeration({"Aligned", "NotAligned"}),
                                       *parse_expression("Sideways"), vt, "a"),
                  ExprTypeError);
}

TEST_CASE("expr: evaluation") {
  Env env{
      {"x", Value::number(9)},
      {"y", Value::number(4)},
      {"p", Value::boolean(true)},
      {"pos", Value::symbol("Aligned")},
  };
  CHECK(eval_expr(*parse_expression("sqrt(x)"), env, "t").num == doctest::Approx(3));
  CHECK(eval_expr(*parse_expression("abs(y - x)"), env, "t").num == doctest::Approx(5));
  CHECK(eval_bool(*parse_expression("x > y && p"), env, "t"));
  CHECK(eval_bool(*parse_expression("pos == Aligned"), env, "t"));
  CHECK_FALSE(eval_bool(*parse_expression("pos == NotAligned"), env, "t"));
  CHECK(eval_expr(*parse_expression("x / y"), env, "t").num == doctest::Approx(2.25));
}

TEST_CASE("expr: evaluation errors") {
  Env env{{"x", Value::number(1)}, {"z", Value::number(0)}};
  CHECK_THROWS_AS(eval_expr(*parse_expression("x / z"), env, "t"), EvalError);
  CHECK_THROWS_AS(eval_expr(*parse_expression("sqrt(0 - x)"), env, "t"), EvalError);
  CHECK_THROWS_AS(eval_bool(*parse_expression("unbound > 1"), env, "t"), EvalError);
}

TEST_CASE("expr: value literals against domains") {
  CHECK(value_from_literal("TRUE", Domain::boolean(), "v") == Value::boolean(true));
  CHECK(value_from_literal("FALSE", Domain::boolean(), "v") == Value::boolean(false));
  CHECK(value_from_literal("Aligned", Domain::enumeration({"Aligned", "NotAligned"}), "v") ==
        Value::symbol("Aligned"));
  CHECK(value_from_literal("42", Domain::integer(0, 100), "v") == Value::number(42));
  CHECK(value_from_literal("1.5", Domain::real(0, 10, 1), "v") == Value::number(1.5));
  CHECK_THROWS_AS(value_from_literal("Sideways",
                                     Domain::enumeration({"Aligned", "NotAligned"}), "v"),
                  Error);
  CHECK_THROWS_AS(value_from_literal("maybe", Domain::boolean(), "v"), Error);
}

TEST_CASE("expr: Value literal formatting") {
  CHECK(Value::boolean(true).literal() == "TRUE");
  CHECK(Value::boolean(false).literal() == "FALSE");
  CHECK(Value::symbol("Open").literal() == "Open");
  CHECK(Value::number(45).literal() == "45");
  CHECK(Value::number(2.25).literal() == "2.25");
}

TEST_CASE("expr: domain enumerate") {
  CHECK(Domain::boolean().enumerate("b") == std::vector<std::string>{"FALSE", "TRUE"});
  CHECK(Domain::enumeration({"A", "B"}).enumerate("e") ==
        std::vector<std::string>{"A", "B"});
  CHECK(Domain::integer(2, 4).enumerate("i") ==
        std::vector<std::string>{"2", "3", "4"});
  CHECK_THROWS_AS(Domain::real(0, 1, 0).enumerate("r"), UnboundedDomainError);
  CHECK_FALSE(Domain::real(0, 1, 0).finite());
}

TEST_CASE("expr: action list parsing and rendering") {
  std::vector<Action> acts =
      parse_actions("currentSpeed = desiredSpeed; controlAction = Accelerate");
  REQUIRE(acts.size() == 2);
  CHECK(acts[0].target == "currentSpeed");
  CHECK(render_expr(*acts[0].value) == "desiredSpeed");
  CHECK(acts[1].target == "controlAction");
  CHECK(render_actions(acts) ==
        "currentSpeed = desiredSpeed; controlAction = Accelerate");
}
