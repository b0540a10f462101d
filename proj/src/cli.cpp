#include "modalc/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "modalc/equality.hpp"
#include "modalc/hilbert.hpp"
#include "modalc/parser.hpp"
#include "modalc/reduce.hpp"
#include "modalc/semantics.hpp"
#include "modalc/typecheck.hpp"

namespace modalc {

namespace {

using json = nlohmann::ordered_json;

enum class Status { Ok = 0, Fail = 1, Error = 2 };

const char* status_name(Status s) {
  switch (s) {
    case Status::Ok: return "ok";
    case Status::Fail: return "fail";
    case Status::Error: return "error";
  }
  return "error";
}

struct Options {
  std::string system;
  std::string logic;
  std::string model = "identity";
  std::vector<std::string> sizes;
  std::vector<std::string> inputs;
  std::string strategy = "lo";
  std::size_t fuel = 0;
  Elem max_size = 3;
  bool cc = false;
  bool trace = false;
  bool verbose = false;
  bool as_json = false;
};

class Result {
 public:
  explicit Result(std::string command) : command_(std::move(command)) {}

  void raise(Status s) {
    if (static_cast<int>(s) > static_cast<int>(status_)) status_ = s;
  }
  void diag(Status s, const std::string& message, std::optional<SourceLocation> loc = std::nullopt) {
    raise(s);
    json d = {{"severity", s == Status::Error ? "error" : "warning"}, {"location", nullptr}, {"message", message}};
    if (loc) d["location"] = {{"line", loc->line}, {"column", loc->column}};
    diagnostics_.push_back(std::move(d));
    text_ << (s == Status::Error ? "error: " : "") << message << "\n";
  }
  std::ostream& text() { return text_; }
  json& data() { return data_; }
  Status status() const { return status_; }

  int emit(std::ostream& out, bool as_json) const {
    if (as_json) {
      json j = {{"command", command_}, {"status", status_name(status_)}, {"data", data_}, {"diagnostics", diagnostics_}};
      out << j.dump(2) << "\n";
    } else {
      out << text_.str();
    }
    return static_cast<int>(status_);
  }

 private:
  std::string command_;
  Status status_ = Status::Ok;
  json data_ = json::object();
  json diagnostics_ = json::array();
  std::ostringstream text_;
};

struct Input {
  std::string name;
  std::string text;
};

std::vector<Input> load_inputs(const Options& o, std::istream& in) {
  std::vector<Input> out;
  for (const auto& arg : o.inputs) {
    if (arg == "-") {
      std::ostringstream ss;
      ss << in.rdbuf();
      out.push_back({"<stdin>", ss.str()});
    } else if (std::error_code ec; std::filesystem::is_regular_file(arg, ec)) {
      std::ifstream f(arg);
      std::ostringstream ss;
      ss << f.rdbuf();
      out.push_back({arg, ss.str()});
    } else {
      out.push_back({"<arg>", arg});
    }
  }
  return out;
}

SystemId require_system(const Options& o) {
  auto s = parse_system_name(o.system);
  if (!s) throw CLI::ValidationError("--system", "expected one of k, k4, gl, t, s4");
  return *s;
}

std::size_t fuel_of(const Options& o) {
  if (o.fuel) return o.fuel;
  if (const char* env = std::getenv("MODALC_FUEL")) {
    try {
      std::size_t n = std::stoul(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  return kDefaultFuel;
}

json loc_json(const SourceLocation& l) { return {{"line", l.line}, {"column", l.column}}; }

std::string where(const Input& in, const SourceLocation& l) {
  return in.name + ":" + std::to_string(l.line);
}

std::string path_str(const std::vector<std::size_t>& path) {
  std::string s = "[";
  for (std::size_t i = 0; i < path.size(); ++i) s += (i ? "," : "") + std::to_string(path[i]);
  return s + "]";
}

void print_derivation(std::ostream& os, const TypingDerivation& d, int depth) {
  os << std::string(static_cast<std::size_t>(depth) * 2, ' ') << rule_name(d.rule) << "  "
     << print_judgment(d.conclusion.ctx, d.conclusion.term, d.conclusion.type) << "\n";
  for (const auto& p : d.premises) print_derivation(os, p, depth + 1);
}

// Wraps the per-input work: parse errors and unexpected failures become
// error diagnostics.
template <typename Fn>
void guarded(Result& r, Fn&& fn) {
  try {
    fn();
  } catch (const ParseError& e) {
    r.diag(Status::Error, std::string("parse error: ") + e.what(), e.location());
  } catch (const CLI::Error&) {
    throw;
  } catch (const std::exception& e) {
    r.diag(Status::Error, e.what());
  }
}

Result cmd_check(const Options& o, std::istream& in) {
  Result r("check");
  SystemId sys = require_system(o);
  r.data()["system"] = system_name(sys);
  r.data()["results"] = json::array();
  for (const auto& input : load_inputs(o, in)) {
    guarded(r, [&] {
      for (const auto& j : parse_judgments(input.text)) {
        json item = {{"location", loc_json(j.location)}, {"term", print_term(j.term)}};
        try {
          TypingDerivation d = infer(sys, j.ctx, j.term);
          const Type& t = d.conclusion.type;
          item["type"] = print_type(t);
          if (j.type && !(*j.type == t)) {
            item["ok"] = false;
            item["error"] = "TypeMismatch";
            std::string msg = where(input, j.location) + ": inferred " + print_type(t) + " but ascribed " +
                              print_type(*j.type);
            item["message"] = msg;
            r.diag(Status::Fail, msg, j.location);
          } else {
            item["ok"] = true;
            r.text() << "ok   " << where(input, j.location) << ": " << print_judgment(j.ctx, j.term, t) << "\n";
          }
          if (o.verbose) {
            std::ostringstream ds;
            print_derivation(ds, d, 1);
            item["derivation"] = ds.str();
            r.text() << ds.str();
          }
        } catch (const TypeError& e) {
          item["ok"] = false;
          item["error"] = type_error_kind_name(e.kind());
          item["message"] = e.what();
          r.diag(Status::Fail,
                 "fail " + where(input, j.location) + ": " + type_error_kind_name(e.kind()) + ": " + e.what(),
                 j.location);
        }
        r.data()["results"].push_back(std::move(item));
      }
    });
  }
  return r;
}

Result cmd_normalize(const Options& o, std::istream& in) {
  Result r("normalize");
  std::optional<SystemId> sys;
  if (!o.system.empty()) sys = require_system(o);
  Relation rel = o.cc ? Relation::Commuting : Relation::Plain;
  Strategy strat = o.strategy == "ri" ? Strategy::RightmostInnermost : Strategy::LeftmostOutermost;
  std::size_t fuel = fuel_of(o);
  r.data()["relation"] = o.cc ? "cc" : "plain";
  r.data()["fuel"] = fuel;
  r.data()["results"] = json::array();
  for (const auto& input : load_inputs(o, in)) {
    guarded(r, [&] {
      for (const auto& [line, block] : split_blocks(input.text)) {
        SourceLocation loc{line, 1};
        json item = {{"location", loc_json(loc)}};
        Term m;
        std::optional<DualContext> ctx;
        std::optional<Type> before;
        if (block.find("|-") != std::string::npos) {
          SourceJudgment j = parse_judgment(block);
          if (!sys) throw CLI::ValidationError("--system", "required to normalize a judgment");
          m = j.term;
          ctx = j.ctx;
          try {
            before = infer(*sys, j.ctx, m).conclusion.type;
          } catch (const TypeError& e) {
            item["error"] = type_error_kind_name(e.kind());
            r.diag(Status::Fail, where(input, loc) + ": " + e.what(), loc);
            r.data()["results"].push_back(std::move(item));
            continue;
          }
          item["type"] = print_type(*before);
        } else {
          m = parse_term(block);
        }
        try {
          Normalized n = normalize(m, rel, fuel, strat, o.trace);
          item["normal"] = print_term(n.normal);
          item["steps"] = n.trace.size();
          r.text() << print_term(n.normal) << "\n";
          if (o.trace) {
            json steps = json::array();
            for (const auto& s : n.trace) {
              steps.push_back({{"rule", s.rule}, {"position", s.position}, {"term", print_term(s.result)}});
              r.text() << "  " << s.rule << " " << path_str(s.position) << ": " << print_term(s.result) << "\n";
            }
            item["trace"] = std::move(steps);
          }
          if (before) {
            auto after = type_of(*sys, *ctx, n.normal);
            if (!after || !(*after == *before))
              r.diag(Status::Fail, where(input, loc) + ": normal form no longer has type " + print_type(*before), loc);
          }
        } catch (const FuelExhausted& e) {
          r.diag(Status::Fail, where(input, loc) + ": " + e.what(), loc);
        }
        r.data()["results"].push_back(std::move(item));
      }
    });
  }
  return r;
}

Result cmd_eq(const Options& o, std::istream& in) {
  Result r("eq");
  SystemId sys = require_system(o);
  r.data()["system"] = system_name(sys);
  r.data()["results"] = json::array();
  if (sys == SystemId::GL) {
    r.diag(Status::Error, "no equational theory for GL; compare normal forms with 'normalize' instead");
    return r;
  }
  for (const auto& input : load_inputs(o, in)) {
    guarded(r, [&] {
      for (const auto& [line, block] : split_blocks(input.text)) {
        SourceLocation loc{line, 1};
        SourceEquation e = parse_equation(block);
        json item = {{"location", loc_json(loc)}};
        try {
          EqVerdict v = eq_terms(sys, e.ctx, e.left, e.right, e.type);
          item["equal"] = v.equal;
          item["left_normal"] = print_term(v.left_normal);
          item["right_normal"] = print_term(v.right_normal);
          if (o.trace) item["trace"] = v.trace;
          if (v.equal) {
            r.text() << "equal  " << where(input, loc) << ": " << print_term(v.left_normal) << "\n";
          } else {
            r.diag(Status::Fail,
                   "not proved equal  " + where(input, loc) + ": " + print_term(v.left_normal) + " vs " +
                       print_term(v.right_normal),
                   loc);
          }
        } catch (const IllTyped& err) {
          item["error"] = "IllTyped";
          r.diag(Status::Fail, where(input, loc) + ": ill-typed: " + err.what(), loc);
        }
        r.data()["results"].push_back(std::move(item));
      }
    });
  }
  return r;
}

// translate output starts with "# logic NAME"; honour it when no flag is given
std::optional<LogicId> logic_header(const std::string& text) {
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::istringstream words(line);
    std::string hash, key, name;
    if (words >> hash >> key >> name && hash == "#" && key == "logic") return parse_logic_name(name);
  }
  return std::nullopt;
}

LogicId require_logic(const Options& o, const std::string& text = "") {
  if (!o.logic.empty()) {
    auto l = parse_logic_name(o.logic);
    if (!l) throw CLI::ValidationError("--logic", "expected one of ck, ck4, ct, cs4, cgl");
    return *l;
  }
  if (!o.system.empty()) return logic_for(require_system(o));
  if (auto l = logic_header(text)) return *l;
  throw CLI::ValidationError("--logic", "a logic (or --system, or a '# logic' header) is required");
}

Result cmd_hilbert_check(const Options& o, std::istream& in) {
  Result r("hilbert-check");
  r.data()["results"] = json::array();
  for (const auto& input : load_inputs(o, in)) {
    LogicId logic = require_logic(o, input.text);
    r.data()["logic"] = logic_name(logic);
    guarded(r, [&] {
      for (const auto& s : parse_hilbert_scripts(input.text)) {
        HilbertVerdict v = check_hilbert(logic, s.assumptions, s.goal, s.proof);
        json item = {{"location", loc_json(s.location)}, {"goal", print_formula(s.goal)}, {"ok", v.ok}};
        if (v.ok) {
          r.text() << "ok   " << where(input, s.location) << ": " << print_formula(s.goal) << "\n";
        } else {
          item["path"] = v.path;
          item["reason"] = v.reason;
          r.diag(Status::Fail,
                 "fail " + where(input, s.location) + ": at " + path_str(v.path) + ": " + v.reason, s.location);
        }
        r.data()["results"].push_back(std::move(item));
      }
    });
  }
  return r;
}

Result cmd_translate(const Options& o, std::istream& in) {
  Result r("translate");
  SystemId sys = require_system(o);
  r.data()["system"] = system_name(sys);
  r.data()["logic"] = logic_name(logic_for(sys));
  r.data()["results"] = json::array();
  r.text() << "# logic " << logic_name(logic_for(sys)) << "\n";
  for (const auto& input : load_inputs(o, in)) {
    guarded(r, [&] {
      for (const auto& j : parse_judgments(input.text)) {
        json item = {{"location", loc_json(j.location)}};
        TypingDerivation d;
        try {
          d = infer(sys, j.ctx, j.term);
        } catch (const TypeError& e) {
          r.diag(Status::Fail, where(input, j.location) + ": " + type_error_kind_name(e.kind()) + ": " + e.what(),
                 j.location);
          continue;
        }
        if (j.type && !(*j.type == d.conclusion.type)) {
          r.diag(Status::Fail, where(input, j.location) + ": inferred " + print_type(d.conclusion.type), j.location);
          continue;
        }
        Translation t = translate(sys, d);
        HilbertVerdict v = check_hilbert(t.logic, t.assumptions, t.goal, t.proof);
        if (!v.ok) throw std::logic_error("translation produced an invalid proof: " + v.reason);
        std::string script = print_hilbert_script(t.assumptions, t.goal, t.proof);
        item["goal"] = print_formula(t.goal);
        item["size"] = t.proof.size();
        item["script"] = script;
        r.text() << "\n# " << where(input, j.location) << "\n" << script;
        r.data()["results"].push_back(std::move(item));
      }
    });
  }
  return r;
}

FiniteModel build_model(const Options& o, const std::set<std::string>& atoms) {
  FiniteModel m;
  m.functor = make_functor(o.model);
  for (const auto& a : atoms) m.atoms[a] = 2;
  for (const auto& s : o.sizes) {
    auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("--size", "expected atom=n, got " + s);
    try {
      m.atoms[s.substr(0, eq)] = std::stoull(s.substr(eq + 1));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--size", "expected atom=n, got " + s);
    }
  }
  return m;
}

std::string show_tuple(const std::vector<FinSet>& parts, Elem e) {
  std::vector<Elem> xs = split(parts, e);
  std::string s = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? ", " : "") + parts[i].show(xs[i]);
  return s + ")";
}

Result cmd_interp(const Options& o, std::istream& in) {
  Result r("interp");
  SystemId sys = require_system(o);
  make_functor(o.model);
  r.data()["system"] = system_name(sys);
  r.data()["model"] = o.model;
  r.data()["results"] = json::array();
  for (const auto& input : load_inputs(o, in)) {
    guarded(r, [&] {
      for (const auto& j : parse_judgments(input.text)) {
        TypingDerivation d;
        try {
          d = infer(sys, j.ctx, j.term);
        } catch (const TypeError& e) {
          r.diag(Status::Fail, where(input, j.location) + ": " + e.what(), j.location);
          continue;
        }
        FiniteModel model = build_model(o, atoms_of(d));
        ModelReport rep = verify_model(model, sys);
        if (const LawResult* bad = rep.violation()) {
          r.diag(Status::Fail, "model " + o.model + " fails " + bad->law + " (" + bad->witness + ")");
          return;
        }
        Denotation den = interp_term(model, sys, d);
        std::vector<FinSet> parts;
        for (const auto& b : j.ctx.modal) parts.push_back(model.functor->apply(interp_type(model, b.type)));
        for (const auto& b : j.ctx.intuitionistic) parts.push_back(interp_type(model, b.type));
        json rows = json::array();
        r.text() << print_judgment(j.ctx, j.term, d.conclusion.type) << "\n";
        constexpr std::size_t kMaxRows = 4096;
        for (Elem e = 0; e < den.table.size() && e < kMaxRows; ++e) {
          std::string arg = show_tuple(parts, e), val = den.cod.show(den.table[e]);
          r.text() << "  " << arg << " |-> " << val << "\n";
          rows.push_back({{"input", arg}, {"output", val}});
        }
        if (den.table.size() > kMaxRows) r.text() << "  ... " << den.table.size() - kMaxRows << " more rows\n";
        json item = {{"location", loc_json(j.location)},
                     {"domain", den.dom.describe()},
                     {"codomain", den.cod.describe()},
                     {"table", den.table},
                     {"rows", std::move(rows)}};
        r.data()["results"].push_back(std::move(item));
      }
    });
  }
  return r;
}

Result cmd_verify_model(const Options& o) {
  Result r("verify-model");
  SystemId sys = require_system(o);
  auto f = make_functor(o.model);
  r.data()["system"] = system_name(sys);
  r.data()["model"] = o.model;
  r.data()["max_size"] = o.max_size;
  if (sys == SystemId::GL) {
    r.diag(Status::Error, "no finite models are provided for GL");
    return r;
  }
  ModelReport rep = verify_model(*f, sys, o.max_size);
  json laws = json::array();
  for (const auto& l : rep.laws) {
    laws.push_back({{"law", l.law}, {"ok", l.ok}, {"witness", l.witness}});
    if (l.ok) r.text() << "ok    " << l.law << "\n";
    else r.diag(Status::Fail, "FAIL  " + l.law + ": " + l.witness);
  }
  r.data()["laws"] = std::move(laws);
  r.data()["ok"] = rep.ok;
  return r;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Workbench for the dual-context modal lambda calculi", "modalc"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool inputs) {
    sub->add_flag("--json", o.as_json, "Print a JSON object instead of text");
    sub->add_flag("-v,--verbose", o.verbose, "Print derivations");
    if (inputs) sub->add_option("inputs", o.inputs, "Files, '-' for stdin, or inline text")->required();
  };
  auto system = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--system", o.system, "k, k4, gl, t or s4");
    if (required) opt->required();
  };

  auto* check = app.add_subcommand("check", "Type-check judgments");
  system(check, true);
  common(check, true);

  auto* norm = app.add_subcommand("normalize", "Reduce terms to normal form");
  system(norm, false);
  norm->add_flag("--cc", o.cc, "Include commuting conversions");
  norm->add_option("--fuel", o.fuel, "Step limit (default 10000, or MODALC_FUEL)")->check(CLI::PositiveNumber);
  norm->add_flag("--trace", o.trace, "Print every step");
  norm->add_option("--strategy", o.strategy, "lo (leftmost-outermost) or ri (rightmost-innermost)")
      ->check(CLI::IsMember({"lo", "ri"}));
  common(norm, true);

  auto* eq = app.add_subcommand("eq", "Decide equations 'ctx |- M = N : A'");
  system(eq, true);
  eq->add_flag("--trace", o.trace, "Include the rewrite trace");
  common(eq, true);

  auto* hc = app.add_subcommand("hilbert-check", "Check Hilbert proof scripts");
  hc->add_option("--logic", o.logic, "ck, ck4, ct, cs4 or cgl");
  system(hc, false);
  common(hc, true);

  auto* tr = app.add_subcommand("translate", "Translate a derivation into a Hilbert proof script");
  system(tr, true);
  common(tr, true);

  auto* interp = app.add_subcommand("interp", "Print the denotation table of a judgment");
  system(interp, true);
  interp->add_option("--model", o.model, "identity, unit, diag or diag-fst");
  interp->add_option("--size", o.sizes, "Atom size, as atom=n (default 2)");
  common(interp, true);

  auto* vm = app.add_subcommand("verify-model", "Check the laws a model needs for a system");
  system(vm, true);
  vm->add_option("--model", o.model, "identity, unit, diag or diag-fst");
  vm->add_option("--max-size", o.max_size, "Largest atomic set tried (default 3)");
  common(vm, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    std::optional<Result> r;
    if (*check) r = cmd_check(o, in);
    else if (*norm) r = cmd_normalize(o, in);
    else if (*eq) r = cmd_eq(o, in);
    else if (*hc) r = cmd_hilbert_check(o, in);
    else if (*tr) r = cmd_translate(o, in);
    else if (*interp) r = cmd_interp(o, in);
    else r = cmd_verify_model(o);
    return r->emit(out, o.as_json);
  } catch (const CLI::Error& e) {
    err << "modalc: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "modalc: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace modalc
