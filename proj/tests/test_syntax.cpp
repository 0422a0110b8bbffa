#include <doctest.h>

#include "lp01/syntax.hpp"
#include "support/fixtures.hpp"
#include "support/random_cases.hpp"

using namespace lp01;

TEST_SUITE("parse") {
  TEST_CASE("a single clause") {
    const Program p = parse_program("emp(tom) := tt.");
    REQUIRE(p.clauses.size() == 1);
    CHECK(format(p.clauses[0].head) == "emp(tom)");
    CHECK(p.clauses[0].body.kind() == FormulaKind::kTop);
  }

  TEST_CASE("empty input and comments") {
    CHECK(parse_program("").clauses.empty());
    CHECK(parse_program("% nothing here\n   \n").clauses.empty());
  }

  TEST_CASE("unclosed parenthesis points at the parenthesis") {
    try {
      parse_program("p( :=");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.span().line == 1);
      CHECK(e.span().column == 2);
      CHECK_FALSE(e.expected().empty());
    }
  }

  TEST_CASE("errors carry line and column") {
    try {
      parse_program("emp(tom) := tt.\nemp(pete) := & .");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.span().line == 2);
      CHECK(e.span().column == 14);
    }
    CHECK_THROWS_AS(parse_program("tt := tt."), ParseError);
    CHECK_THROWS_AS(parse_program("ff := tt."), ParseError);
    CHECK_THROWS_AS(parse_program("p(X) := q(Y)."), CloseError);
    CHECK_THROWS_AS(parse_program("p(x_0) := tt."), ParseError);
  }

  TEST_CASE("the running goal") {
    const Formula g = parse_goal(testing::kWifeGoal);
    REQUIRE(g.kind() == FormulaKind::kForall);
    CHECK(g.bound_var() == "x");
    const Formula& imp = g.body();
    REQUIRE(imp.kind() == FormulaKind::kImplies);
    CHECK(format(imp.left()) == "emp(x)");
    REQUIRE(imp.right().kind() == FormulaKind::kExists);
    CHECK(imp.right().bound_var() == "y");
    CHECK(format(imp.right().body()) == "wife(x,y)");
    CHECK(g.span().line == 1);
    CHECK(g.span().column == 1);
  }

  TEST_CASE("the blind goal") {
    const Formula g = parse_goal(testing::kBlindGoal);
    REQUIRE(g.kind() == FormulaKind::kExists);
    REQUIRE(g.body().kind() == FormulaKind::kBlind);
    CHECK(g.body().body().kind() == FormulaKind::kImplies);
  }

  TEST_CASE("free uppercase variables in a goal") {
    try {
      parse_goal("wife(x,Y)");
      FAIL("expected a close error");
    } catch (const CloseError& e) {
      CHECK(e.free_vars() == std::vector<std::string>{"Y"});
    }
  }

  TEST_CASE("precedence and associativity") {
    CHECK(parse_goal("a => b => c") == parse_goal("a => (b => c)"));
    CHECK(parse_goal("a | b & c") == parse_goal("a | (b & c)"));
    CHECK(parse_goal("a & b & c") == parse_goal("(a & b) & c"));
    CHECK(parse_goal("exists x. p(x) & q(x)") == parse_goal("exists x. (p(x) & q(x))"));
    CHECK(parse_goal("a & exists x. p(x) | q(x)") == parse_goal("a & (exists x. (p(x) | q(x)))"));
  }

  TEST_CASE("constant names") {
    CHECK(is_constant_name("tom"));
    CHECK(is_constant_name("n42"));
    CHECK_FALSE(is_constant_name("42"));
    CHECK_FALSE(is_constant_name("Tom"));
    CHECK_FALSE(is_constant_name(""));
    CHECK_FALSE(is_constant_name("forall"));
    CHECK_FALSE(is_constant_name("x_0"));
    CHECK_FALSE(is_constant_name("a b"));
  }
}

TEST_SUITE("format") {
  TEST_CASE("round-trips the example goals") {
    for (const char* text : {testing::kWifeGoal, testing::kBlindGoal, "exists y. wife(tom,y)"}) {
      const Formula g = parse_goal(text);
      CHECK(parse_goal(format(g)) == g);
    }
    CHECK(format(Formula::top()) == "tt");
    CHECK(format(Formula::bot()) == "ff");
    CHECK(format(parse_goal(testing::kWifeGoal)) == testing::kWifeGoal);
  }

  TEST_CASE("parenthesizes quantifiers that are not last") {
    const Formula g = parse_goal("(exists x. p(x)) & q");
    CHECK(format(g) == "(exists x. p(x)) & q");
    CHECK(parse_goal(format(g)) == g);
  }

  TEST_CASE("fresh variables print with their display name") {
    VarSupply s;
    const Var h = s.fresh("h", VarKind::kEigen);
    CHECK(format(Term::app("emp", {Term::variable(h)})) == "emp(h_0)");
  }

  TEST_CASE("programs round-trip") {
    const char* text = "#level p/0 1.\np := q => r.\nemp(X) := boss(X,bob) | ff.\n";
    const Program p = parse_program(text);
    CHECK(parse_program(format(p)) == p);
    CHECK(format(p) == text);
  }

  TEST_CASE("property: parse after format is the identity on random cases") {
    testing::CaseGenerator gen(21);
    for (int i = 0; i < 300; ++i) {
      const testing::RandomCase c = i % 2 ? gen.level0() : gen.level1();
      const Program p = parse_program(c.program);
      const Formula g = parse_goal(c.goal);
      CHECK(parse_program(format(p)) == p);
      CHECK(parse_goal(format(g)) == g);
    }
  }
}

TEST_SUITE("levels") {
  TEST_CASE("the example program is fine") {
    const Program p = testing::emp_program();
    CHECK_NOTHROW(check_levels(p));
    CHECK_NOTHROW(check_levels(p, parse_goal(testing::kWifeGoal)));
    CHECK_NOTHROW(check_levels(p, parse_goal(testing::kBlindGoal)));
  }

  TEST_CASE("a level-0 head cannot have a level-1 body") {
    CHECK_THROWS_AS(check_levels(parse_program("p := q => r.")), LevelError);
    CHECK_THROWS_AS(check_levels(parse_program("p := forall x. q(x).")), LevelError);
    CHECK_NOTHROW(check_levels(parse_program("#level p/0 1.\np := q => r.")));
  }

  TEST_CASE("antecedents must be level-0") {
    const Program p = parse_program("p(a) := tt.");
    CHECK_THROWS_AS(check_levels(p, parse_goal("(exists y. forall x. p(x)) => tt")), LevelError);
    CHECK_THROWS_AS(check_levels(p, parse_goal("(p(a) => p(a)) => tt")), LevelError);
    const Program q = parse_program("#level h/0 1.\nh := tt.");
    CHECK_THROWS_AS(check_levels(q, parse_goal("h => tt")), LevelError);
    CHECK_NOTHROW(check_levels(q, parse_goal("h")));
  }

  TEST_CASE("level of a formula") {
    const Program p = parse_program("#level h/0 1.\nh := tt.");
    CHECK(level_of(parse_goal("exists x. q(x) | r"), p) == 0);
    CHECK(level_of(parse_goal("forall x. q(x)"), p) == 1);
    CHECK(level_of(parse_goal("h & q"), p) == 1);
  }

  TEST_CASE("adding a clause never repairs a level error") {
    const char* bad = "p := q => r.\n";
    for (const char* extra : {"q := tt.", "#level r/0 1.\nr := tt.", "s := p."}) {
      CHECK_THROWS_AS(check_levels(parse_program(std::string(bad) + extra)), LevelError);
    }
  }
}
