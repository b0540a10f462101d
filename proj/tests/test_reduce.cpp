#include "doctest.h"
#include "helpers.hpp"
#include "modalc/reduce.hpp"
#include "modalc/typecheck.hpp"

using namespace modalc;
using th::ctx;
using th::tm;
using th::ty;

namespace {
Term nf(const std::string& m, Relation rel = Relation::Plain) { return normalize(tm(m), rel).normal; }
}  // namespace

TEST_CASE("single steps") {
  auto s = step(tm("(\\x:p. x) y"));
  REQUIRE(s);
  CHECK(alpha_eq(*s, tm("y")));
  CHECK(alpha_eq(*step(tm("let box u = box x in box u")), tm("box x")));
  CHECK(alpha_eq(*step(tm("snd <a, b>")), tm("b")));
  CHECK(alpha_eq(*step(tm("let box u = fix z:[]p. y in <u, u>")), tm("<y, y>")));
  CHECK_FALSE(step(tm("\\x:p. f x")).has_value());
  // commuting conversions are not plain steps
  CHECK_FALSE(step(tm("fst (let box u = x in <u, u>)")).has_value());
}

TEST_CASE("the fix rule unfolds once") {
  Term r = *step(tm("let box u = fix z:[]p. g z in u"));
  CHECK(alpha_eq(r, tm("g (fix z:[]p. g z)")));
}

TEST_CASE("commuting conversions") {
  CHECK(alpha_eq(*step_cc(tm("fst (let box u = x in <u, u>)")), tm("let box u = x in fst <u, u>")));
  CHECK(alpha_eq(*step_cc(tm("(let box u = x in f) y")), tm("let box u = x in f y")));
  CHECK(alpha_eq(*step_cc(tm("let box v = (let box u = x in box u) in v")),
                 tm("let box u = x in let box v = box u in v")));
  // the argument mentions the binder, so it must be renamed
  Term r = *step_cc(tm("(let box u = x in f) u"));
  CHECK(alpha_eq(r, tm("let box w = x in f u")));
  // the outer body mentions the inner binder
  Term r2 = *step_cc(tm("let box v = (let box u = x in box u) in <u, v>"));
  CHECK(alpha_eq(r2, tm("let box w = x in let box v = box w in <u, v>")));
  auto st = step_with(tm("(let box u = x in f) y"), Relation::Commuting, Strategy::LeftmostOutermost);
  REQUIRE(st);
  CHECK(st->rule == "cc-app");
  CHECK(st->position.empty());
}

TEST_CASE("normalization") {
  CHECK(alpha_eq(nf("(\\x:p. x) ((\\y:p. y) z)"), tm("z")));
  CHECK(alpha_eq(nf("fst (let box u = x in <u, u>)", Relation::Commuting), tm("let box u = x in u")));
  Normalized n = normalize(tm("\\x:p. f x"), Relation::Plain);
  CHECK(n.trace.empty());
  CHECK(alpha_eq(n.normal, tm("\\x:p. f x")));
  Normalized t = normalize(tm("(\\x:p. x) ((\\y:p. y) z)"), Relation::Plain, 100, Strategy::LeftmostOutermost, true);
  CHECK(t.trace.size() == 2);
  CHECK(t.trace[0].rule == "beta");
}

TEST_CASE("strategies differ in order, not result") {
  Term m = tm("(\\x:p. <x, x>) ((\\y:p. y) z)");
  auto lo = step_with(m, Relation::Plain, Strategy::LeftmostOutermost);
  auto ri = step_with(m, Relation::Plain, Strategy::RightmostInnermost);
  REQUIRE(lo);
  REQUIRE(ri);
  CHECK(lo->position.empty());
  CHECK(ri->position == std::vector<std::size_t>{1});
  CHECK(alpha_eq(normalize(m, Relation::Plain, 100, Strategy::LeftmostOutermost).normal,
                 normalize(m, Relation::Plain, 100, Strategy::RightmostInnermost).normal));
}

TEST_CASE("fuel") {
  // an untyped loop
  Term omega = tm("(\\x:p. x x) (\\x:p. x x)");
  CHECK_THROWS_AS(normalize(omega, Relation::Plain, 50), FuelExhausted);
  CHECK_THROWS(normalize(tm("(\\x:p. x) y"), Relation::Plain, 0));
  CHECK_NOTHROW(normalize(tm("(\\x:p. x) y"), Relation::Plain, 1));
}

TEST_CASE("GL is weakly but not strongly normalizing") {
  // Each unfolding of fix z rebuilds let box c = (fix z. ...) in fix y. c
  // under a fix, so an innermost strategy never gets to the outer redex.
  DualContext g = ctx("d:q ;");
  Term m = tm("let box u = fix z:[]q. let box a = (let box c = z in fix y:[]q. c) in d in fix k:[]q. u");
  CHECK(type_of(SystemId::GL, g, m) == ty("[]q"));
  for (Relation rel : {Relation::Plain, Relation::Commuting})
    CHECK(alpha_eq(normalize(m, rel, 1000, Strategy::LeftmostOutermost).normal, tm("fix k:[]q. d")));
  CHECK_THROWS_AS(normalize(m, Relation::Plain, 10000, Strategy::RightmostInnermost), FuelExhausted);
  // cc-let flattens the nested letbox first, and then innermost terminates too
  CHECK(alpha_eq(normalize(m, Relation::Commuting, 10000, Strategy::RightmostInnermost).normal, tm("fix k:[]q. d")));
}

TEST_CASE("subformula check") {
  CHECK(subformula_check(infer(SystemId::K, ctx("; x:p"), tm("x"))).ok);
  TypingDerivation d = infer(SystemId::K, ctx("y:p ;"), tm("(\\x:[]p. x) (box y)"));
  SubformulaVerdict v = subformula_check(d);
  CHECK_FALSE(v.ok);
  REQUIRE(v.offending);
  CHECK(*v.offending == ty("[]p -> []p"));
  CHECK(subformula_check(infer(SystemId::K, ctx("y:p ;"), tm("box y"))).ok);
}
