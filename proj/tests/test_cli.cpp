#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "modalc/cli.hpp"

using namespace modalc;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, const std::string& stdin_text = "") {
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  int code = run_cli(args, in, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("check") {
  Run ok = run({"check", "--system", "t", "; x:[]p |- let box u = x in u : p"});
  CHECK(ok.code == kExitOk);
  Run fail = run({"check", "--system", "k", "; x:[]p |- let box u = x in u : p"});
  CHECK(fail.code == kExitFail);
  CHECK(fail.out.find("ZoneViolation") != std::string::npos);
  Run bad = run({"check", "--system", "k4", "; |- \\x:. x"});
  CHECK(bad.code == kExitError);
  // ascription mismatch is a failure, not an error
  CHECK(run({"check", "--system", "k", "; x:p |- x : q"}).code == kExitFail);
  Run verbose = run({"check", "--system", "s4", "-v", "u:p ; |- box u"});
  CHECK(verbose.out.find("[]I_S4") != std::string::npos);
}

TEST_CASE("json schema is stable") {
  Run r = run({"check", "--system", "t", "--json", "; x:[]p |- let box u = x in u : p"});
  const char* golden = R"({
  "command": "check",
  "status": "ok",
  "data": {
    "system": "T",
    "results": [
      {
        "location": {
          "line": 1,
          "column": 1
        },
        "term": "let box u = x in u",
        "type": "p",
        "ok": true
      }
    ]
  },
  "diagnostics": []
}
)";
  CHECK(r.out == golden);
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"normalize", "--json", "(\\x:p. x) y"},
           {"eq", "--system", "k", "--json", "; f:p -> p |- \\x:p. f x = f : p -> p"},
           {"verify-model", "--system", "t", "--model", "unit", "--json"},
           {"check", "--system", "k", "--json", "; |- ("}}) {
    auto j = nlohmann::json::parse(run(args).out);
    CHECK(j.contains("command"));
    CHECK(j.contains("status"));
    CHECK(j.contains("data"));
    CHECK(j["diagnostics"].is_array());
  }
}

TEST_CASE("normalize") {
  Run r = run({"normalize", "--system", "gl", "let box u = fix z:[]p. y in <u,u>"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "<y, y>\n");
  CHECK(run({"normalize", "--cc", "fst (let box u = x in <u,u>)"}).out == "let box u = x in u\n");
  CHECK(run({"normalize", "fst (let box u = x in <u,u>)"}).out == "fst (let box u = x in <u, u>)\n");
  Run t = run({"normalize", "--trace", "(\\x:p. x) ((\\y:p. y) z)"});
  CHECK(t.out.find("beta") != std::string::npos);
  Run loop = run({"normalize", "--fuel", "20", "(\\x:p. x x) (\\x:p. x x)"});
  CHECK(loop.code == kExitFail);
  CHECK(run({"normalize", "--strategy", "ri", "(\\x:p. x) y"}).out == "y\n");
  CHECK(run({"normalize", "--strategy", "sideways", "x"}).code == kExitError);
}

TEST_CASE("fuel from the environment") {
  ::setenv("MODALC_FUEL", "3", 1);
  Run r = run({"normalize", "(\\a:p. (\\b:p. (\\c:p. (\\d:p. d) c) b) a) x"});
  ::unsetenv("MODALC_FUEL");
  CHECK(r.code == kExitFail);
  CHECK(run({"normalize", "(\\a:p. (\\b:p. (\\c:p. (\\d:p. d) c) b) a) x"}).code == kExitOk);
}

TEST_CASE("eq") {
  CHECK(run({"eq", "--system", "k", "; x:[]p |- let box u = x in box u = x : []p"}).code == kExitOk);
  CHECK(run({"eq", "--system", "k", "; y:p |- \\x:p. x = \\x:p. y : p -> p"}).code == kExitFail);
  CHECK(run({"eq", "--system", "gl", "; y:p |- y = y : p"}).code == kExitError);
  CHECK(run({"eq", "--system", "k", "; y:p |- y = z : p"}).code == kExitFail);
}

TEST_CASE("translate output is accepted by hilbert-check") {
  for (const char* sys : {"k", "k4", "t", "s4", "gl"}) {
    std::string term = std::string(sys) == "gl" ? "; |- \\f:[]([]p->p). let box g = f in fix z:[]p. g z"
                                                : "; |- \\f:[](p->q).\\x:[]p. let box g = f in let box a = x in box (g a)";
    Run t = run({"translate", "--system", sys, term});
    REQUIRE(t.code == kExitOk);
    CHECK(t.out.rfind("# logic ", 0) == 0);
    Run h = run({"hilbert-check", "-"}, t.out);
    CHECK_MESSAGE(h.code == kExitOk, sys << ": " << h.out << h.err);
  }
  Run s4 = run({"translate", "--system", "s4", "; |- \\x:[]p. let box u = x in box box u"});
  CHECK(run({"hilbert-check", "--logic", "cs4", "-"}, s4.out).code == kExitOk);
  // the same proof does not check without axiom 4
  CHECK(run({"hilbert-check", "--logic", "ct", "-"}, s4.out).code == kExitFail);
  CHECK(run({"translate", "--system", "k", "; |- \\x:[]p. let box u = x in u"}).code == kExitFail);
}

TEST_CASE("hilbert-check") {
  CHECK(run({"hilbert-check", "--logic", "ct", "assume []p\nprove p\n(mp (ax T p) (assn 0))"}).code == kExitOk);
  CHECK(run({"hilbert-check", "--logic", "ck", "assume []p\nprove p\n(mp (ax T p) (assn 0))"}).code == kExitFail);
  CHECK(run({"hilbert-check", "--logic", "ck", "assume p\nprove []p\n(nec (assn 0))"}).code == kExitFail);
  CHECK(run({"hilbert-check", "assume\nprove p -> q -> p\n(ax k p q)"}).code == kExitError);
  CHECK(run({"hilbert-check", "--logic", "ck", "assume\nprove p\n(ax"}).code == kExitError);
}

TEST_CASE("interp and verify-model") {
  Run i = run({"interp", "--system", "k", "--model", "diag", "--size", "p=2", "u:p ; x:p |- box u : []p"});
  CHECK(i.code == kExitOk);
  CHECK(i.out.find("((1,0), 1) |-> (1,0)") != std::string::npos);
  Run j = run({"interp", "--system", "k", "--json", "; x:p, y:q |- <y, x> : q * p", "--size", "q=3"});
  auto data = nlohmann::json::parse(j.out)["data"];
  CHECK(data["results"][0]["table"].size() == 6);
  CHECK(run({"interp", "--system", "t", "--model", "unit", "u:p ; |- u"}).code == kExitFail);
  CHECK(run({"interp", "--system", "gl", "u:p ; |- fix z:[]p. u"}).code == kExitError);

  Run u = run({"verify-model", "--system", "t", "--model", "unit"});
  CHECK(u.code == kExitFail);
  CHECK(u.out.find("epsilon natural") != std::string::npos);
  CHECK(run({"verify-model", "--system", "s4"}).code == kExitOk);
  CHECK(run({"verify-model", "--system", "k4", "--model", "diag", "--max-size", "2"}).code == kExitOk);
  CHECK(run({"verify-model", "--system", "gl"}).code == kExitError);
}

TEST_CASE("files, stdin and order independence") {
  auto path = std::filesystem::temp_directory_path() / "modalc_cli_test.txt";
  {
    std::ofstream f(path);
    f << "# two judgments\n; x:p |- x : p\n\nu:p ; |- u : p\n";
  }
  Run k = run({"check", "--system", "k", "--json", path.string()});
  CHECK(k.code == kExitFail);
  auto results = nlohmann::json::parse(k.out)["data"]["results"];
  REQUIRE(results.size() == 2);
  CHECK(results[0]["ok"] == true);
  CHECK(results[1]["ok"] == false);
  CHECK(results[1]["location"]["line"] == 4);
  {
    std::ofstream f(path);
    f << "u:p ; |- u : p\n\n; x:p |- x : p\n";
  }
  auto swapped = nlohmann::json::parse(run({"check", "--system", "k", "--json", path.string()}).out)["data"]["results"];
  CHECK(swapped[0]["ok"] == false);
  CHECK(swapped[1]["ok"] == true);
  std::filesystem::remove(path);

  CHECK(run({"check", "--system", "t", "-"}, "u:p ; |- u : p\n").code == kExitOk);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == kExitError);
  CHECK(run({"frobnicate"}).code == kExitError);
  CHECK(run({"check", "; x:p |- x"}).code == kExitError);
  CHECK(run({"check", "--system", "s5", "; x:p |- x"}).code == kExitError);
  CHECK(run({"interp", "--system", "k", "--size", "p", "; x:p |- x"}).code == kExitError);
  CHECK(run({"--help"}).code == kExitOk);
}
