#include "doctest.h"
#include "helpers.hpp"
#include "modalc/equality.hpp"

using namespace modalc;
using th::ctx;
using th::tm;
using th::ty;

namespace {
bool eq(SystemId s, const std::string& c, const std::string& m, const std::string& n, const std::string& a) {
  return eq_terms(s, ctx(c), tm(m), tm(n), ty(a)).equal;
}
}  // namespace

TEST_CASE("eta rules") {
  for (SystemId s : {SystemId::K, SystemId::K4, SystemId::T, SystemId::S4}) {
    CHECK(eq(s, "; x:[]p", "let box u = x in box u", "x", "[]p"));
    CHECK(eq(s, "; f:p -> p", "\\x:p. f x", "f", "p -> p"));
  }
  // the side condition x not free in M
  CHECK_FALSE(eq(SystemId::K, "; f:p -> p -> p, y:p", "\\x:p. f x x", "f y", "p -> p"));
  CHECK(eta_contract(tm("\\x:p. (\\y:q. g x y) x")).kind() == TermKind::Lam);
  CHECK(alpha_eq(eta_contract(tm("\\x:p. \\y:q. g x y")), tm("g")));
}

TEST_CASE("beta and box beta") {
  CHECK(eq(SystemId::K, "; y:p", "(\\x:p. x) y", "y", "p"));
  CHECK(eq(SystemId::K, "u:p ;", "let box w = box u in box w", "box u", "[]p"));
  CHECK(eq(SystemId::S4, "u:p ;", "let box w = box u in box box w", "box box u", "[][]p"));
  CHECK(eq(SystemId::T, "u:p ;", "let box w = box u in w", "u", "p"));
}

TEST_CASE("reflexivity and distinct terms") {
  CHECK(eq(SystemId::K, "; y:p", "y", "y", "p"));
  CHECK_FALSE(eq(SystemId::K, "; y:p", "\\x:p. x", "\\x:p. y", "p -> p"));
  EqVerdict v = eq_terms(SystemId::K, ctx("; y:p"), tm("\\x:p. x"), tm("\\x:p. y"), ty("p -> p"));
  CHECK(alpha_eq(v.right_normal, tm("\\x:p. y")));
}

TEST_CASE("commuting conversions are part of the theory") {
  CHECK(eq(SystemId::K, "; x:[]p, f:q -> r, y:q", "(let box u = x in f) y", "let box u = x in f y", "r"));
}

TEST_CASE("letbox under a lambda") {
  // eta-expanding a letbox at arrow type, then cc-app and beta
  CHECK(eq(SystemId::K, "; x:[]p, g:q -> r", "let box u = x in \\y:q. g y", "\\e:q. let box u = x in g e", "q -> r"));
  CHECK(eq(SystemId::K4, "; x:[]p", "let box u = x in \\y:q. box u", "\\e:q. let box u = x in box u", "q -> []p"));
  // the letbox body is itself a function after moving under the lambda
  CHECK(eq(SystemId::K, "; x:[]p, d:r -> s", "let box u = x in \\y:q. d", "let box u = x in \\y:q. \\e:r. d e",
           "q -> r -> s"));
  // not when the lambda's variable occurs in the bound term
  CHECK_FALSE(eq(SystemId::K, "; g:q -> []p", "\\y:q. let box u = g y in y", "\\y:q. y", "q -> q"));
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(eq_terms(SystemId::K, ctx("; y:p"), tm("y"), tm("z"), ty("p")), IllTyped);
  CHECK_THROWS_AS(eq_terms(SystemId::K, ctx("; y:p"), tm("y"), tm("y"), ty("q")), IllTyped);
  CHECK_THROWS_AS(eq_terms(SystemId::GL, ctx("; y:p"), tm("y"), tm("y"), ty("p")), UnsupportedSystem);
}

TEST_CASE("equivalence on a handful of terms") {
  const char* c = "; f:p -> p, y:p";
  const char* terms[] = {"(\\x:p. f x) y", "f y", "(\\g:p -> p. g y) f", "f ((\\x:p. x) y)"};
  for (const char* a : terms)
    for (const char* b : terms) {
      CHECK(eq(SystemId::K, c, a, b, "p"));
      CHECK(eq(SystemId::K, c, a, b, "p") == eq(SystemId::K, c, b, a, "p"));
    }
}
