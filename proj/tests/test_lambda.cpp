#include <functional>

#include "doctest.h"
#include "lrlm/lambda.hpp"
#include "lrlm/rng.hpp"

using namespace lrlm::lambda;

namespace {

std::int64_t native_factorial(std::int64_t n) { return n <= 1 ? 1 : n * native_factorial(n - 1); }

// Small random terms over a handful of names, including suffixed ones so
// the fresh-name scheme gets exercised.
Expr random_term(lrlm::Rng& rng, int depth) {
  static const char* names[] = {"x", "y", "z", "x1", "y2"};
  const auto pick = [&] { return std::string(names[rng.below(5)]); };
  if (depth == 0) return rng.below(4) == 0 ? lit(static_cast<std::int64_t>(rng.below(5))) : var(pick());
  switch (rng.below(6)) {
    case 0: return var(pick());
    case 1:
    case 2: return abs(pick(), random_term(rng, depth - 1));
    case 3:
    case 4: return app(random_term(rng, depth - 1), random_term(rng, depth - 1));
    default:
      return prim(PrimOp::add, random_term(rng, depth - 1), random_term(rng, depth - 1));
  }
}

std::int64_t int_value(const Expr& e) {
  const auto* v = e.as<IntLit>();
  REQUIRE(v != nullptr);
  return v->value;
}

}  // namespace

TEST_CASE("parse: identity, left-associative application, const") {
  const auto id = parse_expr("\\x. x");
  REQUIRE(id.as<Abs>());
  CHECK(id.as<Abs>()->param == "x");
  CHECK(structurally_equal(id, abs("x", var("x"))));

  CHECK(structurally_equal(parse_expr("f a b"), app(app(var("f"), var("a")), var("b"))));
  CHECK(structurally_equal(parse_expr("f a b"), parse_expr("(f a) b")));
  CHECK(structurally_equal(parse_expr("\\x.\\y. x"), abs("x", abs("y", var("x")))));
  CHECK(structurally_equal(parse_expr("λx. λy. x"), parse_expr("\\x y. x")));
}

TEST_CASE("parse errors carry a position") {
  CHECK_THROWS_AS(parse_expr("(\\x. x"), lrlm::SyntaxError);
  CHECK_THROWS_AS(parse_expr("\\. x"), lrlm::SyntaxError);
  CHECK_THROWS_AS(parse_expr(""), lrlm::SyntaxError);
  try {
    parse_expr("x )");
    FAIL("expected a syntax error");
  } catch (const lrlm::SyntaxError& e) {
    CHECK(e.position() == 2);
  }
}

TEST_CASE("arithmetic and conditional syntax") {
  const auto e = parse_expr("if0 sub 3 3 then 1 else 2");
  CHECK(int_value(normalize(e).term) == 1);
  CHECK(int_value(normalize(parse_expr("mul 6 7")).term) == 42);
  CHECK(int_value(normalize(parse_expr("eq 4 4")).term) == 1);
  CHECK(int_value(normalize(parse_expr("add (-2) 5")).term) == 3);
}

TEST_CASE("substitution examples") {
  // Capture forces a rename of the binder.
  const auto s1 = substitute(parse_expr("\\y. x"), "x", var("y"));
  REQUIRE(s1.as<Abs>());
  CHECK(s1.as<Abs>()->param != "y");
  CHECK(s1.as<Abs>()->param == "y1");
  CHECK(alpha_equivalent(s1, parse_expr("\\w. y")));

  const auto id = parse_expr("\\z. z");
  CHECK(structurally_equal(substitute(parse_expr("x x"), "x", id), app(id, id)));

  const auto bound = parse_expr("\\x. x");
  CHECK(structurally_equal(substitute(bound, "x", var("a")), bound));
}

TEST_CASE("fresh names go above every suffix in either term") {
  CHECK(fresh_name("y", parse_expr("\\y3. y"), var("y7")) == "y8");
  CHECK(fresh_name("x2", var("x"), var("z")) == "x3");
}

TEST_CASE("beta_step examples") {
  auto s = beta_step(parse_expr("(\\x. x) y"));
  REQUIRE(s);
  CHECK(structurally_equal(s->result, var("y")));
  CHECK(s->kind == StepKind::beta);

  s = beta_step(parse_expr("((\\x.\\y.x) a) b"));
  REQUIRE(s);
  CHECK(alpha_equivalent(s->result, parse_expr("(\\y. a) b")));

  CHECK_FALSE(beta_step(lit(3)));
  CHECK_FALSE(beta_step(parse_expr("\\x. x")));
}

TEST_CASE("normalize examples") {
  const auto k = parse_expr("\\x.\\y. x");
  const auto nf = normalize(app(app(k, var("a")), var("b")), 10);
  CHECK(structurally_equal(nf.term, var("a")));
  CHECK(nf.trace.terminated);
  CHECK(nf.trace.steps.size() == 2);

  const auto fact3 = normalize(app(y_combinator(), {factorial_recipe(), lit(3)}));
  CHECK(int_value(fact3.term) == 6);

  const auto omega = parse_expr("(\\x. x x) (\\x. x x)");
  try {
    normalize(omega, 100);
    FAIL("omega has no normal form");
  } catch (const FuelExhausted& e) {
    CHECK(e.kind() == "FuelExhausted");
    CHECK(e.trace().fuel_used == 100);
    CHECK(e.trace().steps.size() == 100);
    CHECK_FALSE(e.trace().terminated);
  }
}

TEST_CASE("trace: consecutive steps chain, one redex each") {
  const auto nf = normalize(app(y_combinator(), {factorial_recipe(), lit(2)}));
  REQUIRE_FALSE(nf.trace.steps.empty());
  for (std::size_t i = 0; i < nf.trace.steps.size(); ++i) {
    const auto& st = nf.trace.steps[i];
    const auto again = beta_step(st.before);
    REQUIRE(again);
    CHECK(structurally_equal(again->result, st.after));
    CHECK(again->redex == st.redex);
    if (i + 1 < nf.trace.steps.size())
      CHECK(structurally_equal(st.after, nf.trace.steps[i + 1].before));
  }
  CHECK(structurally_equal(nf.trace.steps.back().after, nf.term));
}

TEST_CASE("Y combinator structure") {
  CHECK(structurally_equal(y_combinator(), parse_expr("\\f. (\\x. f (x x)) (\\x. f (x x))")));
}

TEST_CASE("fixed-point law on factorial, n in [0, 6]") {
  const auto Y = y_combinator();
  const auto G = factorial_recipe();
  for (std::int64_t n = 0; n <= 6; ++n) {
    const auto lhs = normalize(app(Y, {G, lit(n)}));
    const auto rhs = normalize(app(G, {app(Y, G), lit(n)}));
    CHECK(int_value(lhs.term) == native_factorial(n));
    CHECK(int_value(rhs.term) == native_factorial(n));
  }
}

TEST_CASE("free variables") {
  CHECK(free_vars(parse_expr("\\x. x")).empty());
  CHECK(free_vars(parse_expr("\\x. y")) == std::set<std::string>{"y"});
  CHECK(free_vars(parse_expr("x (\\x. x)")) == std::set<std::string>{"x"});
}

TEST_CASE("render_with_span marks the subterm") {
  const auto e = parse_expr("f ((\\x. x) y)");
  const auto [text, span] = render_with_span(e, Path{1});
  CHECK(text.substr(span.first, span.second - span.first) == "(\\x. x) y");
  const auto s = beta_step(e);
  REQUIRE(s);
  CHECK(s->redex == Path{1});
}

TEST_CASE("property: print then parse is alpha-equivalent") {
  lrlm::Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    const auto e = random_term(rng, 4);
    CAPTURE(to_string(e));
    CHECK(alpha_equivalent(parse_expr(to_string(e)), e));
  }
}

TEST_CASE("property: substitution safety") {
  lrlm::Rng rng(12);
  static const char* names[] = {"x", "y", "z", "x1"};
  for (int i = 0; i < 500; ++i) {
    const auto e = random_term(rng, 4);
    const auto a = random_term(rng, 2);
    const std::string x = names[rng.below(4)];
    const auto out = substitute(e, x, a);
    auto allowed = free_vars(e);
    allowed.erase(x);
    for (const auto& v : free_vars(a)) allowed.insert(v);
    for (const auto& v : free_vars(out)) {
      CAPTURE(to_string(e));
      CAPTURE(to_string(a));
      CHECK(allowed.count(v) == 1);
    }
  }
}

TEST_CASE("property: one-step determinism") {
  lrlm::Rng rng(13);
  for (int i = 0; i < 300; ++i) {
    const auto e = random_term(rng, 4);
    const auto s1 = beta_step(e), s2 = beta_step(e);
    REQUIRE(s1.has_value() == s2.has_value());
    if (s1) {
      CHECK(alpha_equivalent(s1->result, s2->result));
      CHECK(s1->redex == s2->redex);
    }
  }
}

TEST_CASE("alpha equivalence") {
  CHECK(alpha_equivalent(parse_expr("\\x. x"), parse_expr("\\y. y")));
  CHECK_FALSE(alpha_equivalent(parse_expr("\\x. y"), parse_expr("\\x. z")));
  CHECK_FALSE(alpha_equivalent(parse_expr("\\x.\\y. x"), parse_expr("\\x.\\y. y")));
}
