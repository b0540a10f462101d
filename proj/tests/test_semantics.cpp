#include "doctest.h"
#include "helpers.hpp"
#include "modalc/semantics.hpp"

using namespace modalc;
using th::ctx;
using th::tm;
using th::ty;

namespace {

FiniteModel model(const std::string& functor, Elem p = 2, Elem q = 3) {
  return FiniteModel{{{"p", p}, {"q", q}}, make_functor(functor)};
}

std::vector<Elem> table(const std::string& functor, SystemId sys, const std::string& c, const std::string& m) {
  return interp_term(model(functor), sys, infer(sys, ctx(c), tm(m))).table;
}

const LawResult* law(const ModelReport& r, const std::string& name) {
  for (const auto& l : r.laws)
    if (l.law == name) return &l;
  return nullptr;
}

}  // namespace

TEST_CASE("finite set encodings") {
  FinSet a = FinSet::atom("a", 2), b = FinSet::atom("b", 3);
  FinSet ab = FinSet::prod(a, b);
  CHECK(ab.size() == 6);
  CHECK(ab.pair(1, 2) == 5);
  CHECK(ab.unpair(5) == std::pair<Elem, Elem>{1, 2});
  FinSet ba = FinSet::exp(a, b);
  CHECK(ba.size() == 9);
  Elem t = ba.tabulate([](Elem d) { return d + 1; });
  CHECK(t == 5);
  CHECK(ba.apply(t, 0) == 1);
  CHECK(ba.apply(t, 1) == 2);
  CHECK(FinSet::exp(FinSet::atom("e", 0), b).size() == 1);
  CHECK(FinSet::exp(a, FinSet::atom("e", 0)).size() == 0);
  CHECK(ab.show(5) == "(1,2)");

  std::vector<FinSet> parts = {a, b, a};
  CHECK(product_of(parts).size() == 12);
  CHECK(join(parts, {1, 2, 1}) == 11);
  CHECK(split(parts, 11) == std::vector<Elem>{1, 2, 1});
  CHECK(product_of({}).kind() == SetKind::Unit);
  CHECK(product_of({b}) == b);
}

TEST_CASE("interpretation of types and contexts") {
  CHECK(interp_type(model("identity"), ty("[]p")).size() == 2);
  CHECK(interp_type(model("diag"), ty("[]p")).size() == 4);
  CHECK(interp_type(model("unit"), ty("[](p -> q)")).size() == 1);
  CHECK(interp_type(model("identity"), ty("p -> q")).size() == 9);
  CHECK(interp_type(model("identity"), ty("p * q")).size() == 6);
  CHECK(interp_ctx(model("identity"), ctx("u:p ; x:p")).size() == 4);
  CHECK(interp_ctx(model("diag"), ctx("u:p ; x:p")).size() == 8);
  CHECK(interp_ctx(model("identity"), ctx(";")).size() == 1);
  CHECK_THROWS_AS(interp_type(model("identity"), ty("r")), UnknownAtom);
  CHECK_THROWS_AS(interp_type(model("identity", 5), ty("(p -> p) -> p")), TooLarge);
}

TEST_CASE("monoidal maps") {
  auto id = make_functor("identity");
  auto dg = make_functor("diag");
  FinSet a = FinSet::atom("a", 2), b = FinSet::atom("b", 3);
  CHECK(monoidal_n(*id, {a, b}, {1, 2}) == 5);
  // ((1,0),(2,1)) |-> ((1,2),(0,1))
  FinSet fa = dg->apply(a), fb = dg->apply(b);
  Elem x = fa.pair(1, 0), y = fb.pair(2, 1);
  FinSet ab = FinSet::prod(a, b);
  CHECK(monoidal_n(*dg, {a, b}, {x, y}) == dg->apply(ab).pair(ab.pair(1, 2), ab.pair(0, 1)));
  CHECK(monoidal_n(*dg, {a}, {x}) == x);
  CHECK(monoidal_n(*dg, {}, {}) == dg->unit());
}

TEST_CASE("hand-computed denotations") {
  // swap on p x p
  CHECK(table("identity", SystemId::K, "; x:p, y:p", "<y, x>") == std::vector<Elem>{0, 2, 1, 3});
  // x |-> constant function at x
  CHECK(table("identity", SystemId::K, "; x:p", "\\y:p. x") == std::vector<Elem>{0, 3});
  // F(u |-> (u,u)) on (a,b) gives ((a,a),(b,b))
  CHECK(table("diag", SystemId::K, "u:p ;", "box <u, u>") == std::vector<Elem>{0, 3, 12, 15});
  CHECK(table("unit", SystemId::K, "u:p ;", "box u") == std::vector<Elem>{0});
  CHECK(table("identity", SystemId::S4, "u:p ;", "box box u") == std::vector<Elem>{0, 1});
  // the counit of diag-fst is the first projection
  CHECK(table("diag-fst", SystemId::T, "u:p ;", "u") == std::vector<Elem>{0, 0, 1, 1});
  CHECK(table("identity", SystemId::K4, "; x:[]p", "let box u = x in box box u") == std::vector<Elem>{0, 1});
  CHECK_THROWS_AS(table("identity", SystemId::GL, "u:p ;", "fix z:[]p. u"), ModelMismatch);
}

TEST_CASE("model laws") {
  auto id = make_functor("identity");
  for (SystemId s : {SystemId::K, SystemId::K4, SystemId::T, SystemId::S4}) CHECK(verify_model(*id, s).ok);

  auto unit = make_functor("unit");
  CHECK(verify_model(*unit, SystemId::K).ok);
  CHECK(verify_model(*unit, SystemId::K4).ok);
  ModelReport ut = verify_model(*unit, SystemId::T);
  CHECK_FALSE(ut.ok);
  REQUIRE(ut.violation());
  CHECK(ut.violation()->law == "epsilon natural");
  CHECK_FALSE(ut.violation()->witness.empty());

  auto dg = make_functor("diag");
  CHECK(verify_model(*dg, SystemId::K).ok);
  CHECK(verify_model(*dg, SystemId::K4).ok);
  CHECK_FALSE(verify_model(*dg, SystemId::T).ok);

  ModelReport fs = verify_model(*make_functor("diag-fst"), SystemId::S4);
  CHECK_FALSE(fs.ok);
  REQUIRE(fs.violation());
  CHECK(fs.violation()->law == "F(eps) . delta = id");
  CHECK(fs.violation()->witness.find("(0,1) |-> (0,0)") != std::string::npos);
  CHECK(law(fs, "eps_F . delta = id")->ok);
  CHECK(verify_model(*make_functor("diag-fst"), SystemId::T).ok);

  CHECK_THROWS_AS(verify_model(*id, SystemId::GL), ModelMismatch);
  CHECK_THROWS(make_functor("nosuch"));
}

TEST_CASE("soundness checks") {
  FiniteModel m = model("identity");
  CHECK(check_soundness(m, SystemId::K, ctx("; y:p"), tm("(\\x:p. x) y"), tm("y"), ty("p")).same);
  SoundnessVerdict v = check_soundness(m, SystemId::K, ctx("; y:p"), tm("\\x:p. x"), tm("\\x:p. y"), ty("p -> p"));
  CHECK_FALSE(v.same);
  CHECK(v.witness.has_value());
  CHECK(check_soundness(model("diag"), SystemId::K4, ctx("; x:[]p"), tm("let box u = x in box u"), tm("x"),
                        ty("[]p")).same);
  CHECK_THROWS(check_soundness(m, SystemId::K, ctx("; y:p"), tm("y"), tm("z"), ty("p")));
}

TEST_CASE("atoms") {
  CHECK(atoms_of(ty("[](p -> q) * p")) == std::set<std::string>{"p", "q"});
  CHECK(atoms_of(infer(SystemId::K, ctx("; x:r"), tm("\\y:s. x"))) == std::set<std::string>{"r", "s"});
}
