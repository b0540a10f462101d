#include "modalc/hilbert.hpp"

#include <map>

#include "modalc/parser.hpp"

namespace modalc {

Formula Formula::atom(std::string name) {
  return Formula(std::make_shared<const Node>(Node{FormulaKind::Atom, std::move(name), {}}));
}
Formula Formula::falsity() { return Formula(std::make_shared<const Node>(Node{FormulaKind::Falsity, {}, {}})); }
Formula Formula::conj(Formula a, Formula b) {
  return Formula(std::make_shared<const Node>(Node{FormulaKind::And, {}, {std::move(a), std::move(b)}}));
}
Formula Formula::disj(Formula a, Formula b) {
  return Formula(std::make_shared<const Node>(Node{FormulaKind::Or, {}, {std::move(a), std::move(b)}}));
}
Formula Formula::implies(Formula a, Formula b) {
  return Formula(std::make_shared<const Node>(Node{FormulaKind::Implies, {}, {std::move(a), std::move(b)}}));
}
Formula Formula::box(Formula a) {
  return Formula(std::make_shared<const Node>(Node{FormulaKind::Box, {}, {std::move(a)}}));
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_ || a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case FormulaKind::Atom: return a.name() == b.name();
    case FormulaKind::Falsity: return true;
    case FormulaKind::Box: return a.first() == b.first();
    default: return a.first() == b.first() && a.second() == b.second();
  }
}

Formula formula_of(const Type& t) {
  switch (t.kind()) {
    case TypeKind::Atom: return Formula::atom(t.name());
    case TypeKind::Prod: return Formula::conj(formula_of(t.first()), formula_of(t.second()));
    case TypeKind::Arrow: return Formula::implies(formula_of(t.first()), formula_of(t.second()));
    case TypeKind::Box: return Formula::box(formula_of(t.first()));
  }
  return {};
}

LogicId logic_for(SystemId sys) {
  switch (sys) {
    case SystemId::K: return LogicId::CK;
    case SystemId::K4: return LogicId::CK4;
    case SystemId::GL: return LogicId::CGL;
    case SystemId::T: return LogicId::CT;
    case SystemId::S4: return LogicId::CS4;
  }
  return LogicId::CK;
}

std::string logic_name(LogicId l) {
  switch (l) {
    case LogicId::CK: return "CK";
    case LogicId::CK4: return "CK4";
    case LogicId::CT: return "CT";
    case LogicId::CS4: return "CS4";
    case LogicId::CGL: return "CGL";
  }
  return "?";
}

std::optional<LogicId> parse_logic_name(const std::string& s) {
  for (LogicId l : {LogicId::CK, LogicId::CK4, LogicId::CT, LogicId::CS4, LogicId::CGL}) {
    std::string n = logic_name(l);
    std::string lower;
    for (char c : n) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (s == n || s == lower) return l;
  }
  return std::nullopt;
}

namespace {

struct SchemaInfo {
  Schema schema;
  const char* name;
  std::size_t arity;
};

constexpr SchemaInfo kSchemata[] = {
    {Schema::K, "K", 2},         {Schema::Four, "4", 1},     {Schema::T, "T", 1},       {Schema::GL, "GL", 1},
    {Schema::KComb, "k", 2},     {Schema::SComb, "s", 3},    {Schema::Pair, "pair", 2}, {Schema::Fst, "fst", 2},
    {Schema::Snd, "snd", 2},     {Schema::Inl, "inl", 2},    {Schema::Inr, "inr", 2},   {Schema::Case, "case", 3},
    {Schema::ExFalso, "efq", 1},
};

constexpr Schema kBase[] = {Schema::KComb, Schema::SComb, Schema::Pair, Schema::Fst, Schema::Snd,
                            Schema::Inl,   Schema::Inr,   Schema::Case, Schema::ExFalso};

const SchemaInfo& info(Schema s) {
  for (const auto& i : kSchemata)
    if (i.schema == s) return i;
  return kSchemata[0];
}

Formula imp(const Formula& a, const Formula& b) { return Formula::implies(a, b); }
Formula bx(const Formula& a) { return Formula::box(a); }

// Metavariables of the schema patterns.
Formula meta(std::size_t i) { return Formula::atom("?" + std::to_string(i)); }

Formula build_pattern(Schema s) {
  Formula A = meta(0), B = meta(1), C = meta(2);
  switch (s) {
    case Schema::K: return imp(bx(imp(A, B)), imp(bx(A), bx(B)));
    case Schema::Four: return imp(bx(A), bx(bx(A)));
    case Schema::T: return imp(bx(A), A);
    case Schema::GL: return imp(bx(imp(bx(A), A)), bx(A));
    case Schema::KComb: return imp(A, imp(B, A));
    case Schema::SComb: return imp(imp(A, imp(B, C)), imp(imp(A, B), imp(A, C)));
    case Schema::Pair: return imp(A, imp(B, Formula::conj(A, B)));
    case Schema::Fst: return imp(Formula::conj(A, B), A);
    case Schema::Snd: return imp(Formula::conj(A, B), B);
    case Schema::Inl: return imp(A, Formula::disj(A, B));
    case Schema::Inr: return imp(B, Formula::disj(A, B));
    case Schema::Case: return imp(imp(A, C), imp(imp(B, C), imp(Formula::disj(A, B), C)));
    case Schema::ExFalso: return imp(Formula::falsity(), A);
  }
  return {};
}

const Formula& pattern(Schema s) {
  static const std::map<Schema, Formula> table = [] {
    std::map<Schema, Formula> t;
    for (const auto& i : kSchemata) t.emplace(i.schema, build_pattern(i.schema));
    return t;
  }();
  return table.at(s);
}

bool is_meta(const Formula& f) { return f.is(FormulaKind::Atom) && !f.name().empty() && f.name()[0] == '?'; }

bool match(const Formula& pat, const Formula& f, std::map<std::string, Formula>& binding) {
  if (is_meta(pat)) {
    auto [it, fresh] = binding.emplace(pat.name(), f);
    return fresh || it->second == f;
  }
  if (pat.kind() != f.kind()) return false;
  switch (pat.kind()) {
    case FormulaKind::Atom: return pat.name() == f.name();
    case FormulaKind::Falsity: return true;
    case FormulaKind::Box: return match(pat.first(), f.first(), binding);
    default: return match(pat.first(), f.first(), binding) && match(pat.second(), f.second(), binding);
  }
}

Formula substitute(const Formula& pat, const std::vector<Formula>& args) {
  if (is_meta(pat)) return args[std::stoul(pat.name().substr(1))];
  switch (pat.kind()) {
    case FormulaKind::Atom:
    case FormulaKind::Falsity: return pat;
    case FormulaKind::Box: return bx(substitute(pat.first(), args));
    case FormulaKind::And: return Formula::conj(substitute(pat.first(), args), substitute(pat.second(), args));
    case FormulaKind::Or: return Formula::disj(substitute(pat.first(), args), substitute(pat.second(), args));
    case FormulaKind::Implies: return imp(substitute(pat.first(), args), substitute(pat.second(), args));
  }
  return pat;
}

}  // namespace

std::string schema_name(Schema s) { return info(s).name; }

std::optional<Schema> parse_schema_name(const std::string& s) {
  for (const auto& i : kSchemata)
    if (s == i.name) return i.schema;
  return std::nullopt;
}

std::size_t schema_arity(Schema s) { return info(s).arity; }

Formula instantiate(Schema s, const std::vector<Formula>& args) {
  if (args.size() != schema_arity(s))
    throw std::invalid_argument("schema " + schema_name(s) + " takes " + std::to_string(schema_arity(s)) +
                                " formulas");
  return substitute(pattern(s), args);
}

bool logic_has(LogicId logic, Schema s) {
  switch (s) {
    case Schema::K: return true;
    case Schema::Four: return logic == LogicId::CK4 || logic == LogicId::CS4;
    case Schema::T: return logic == LogicId::CT || logic == LogicId::CS4;
    case Schema::GL: return logic == LogicId::CGL;
    default: return true;
  }
}

std::vector<Schema> logic_schemata(LogicId logic) {
  std::vector<Schema> out;
  for (Schema s : {Schema::K, Schema::Four, Schema::T, Schema::GL})
    if (logic_has(logic, s)) out.push_back(s);
  out.insert(out.end(), std::begin(kBase), std::end(kBase));
  return out;
}

std::optional<AxiomMatch> is_axiom_instance(LogicId logic, const Formula& f) {
  for (Schema s : logic_schemata(logic)) {
    std::map<std::string, Formula> binding;
    if (!match(pattern(s), f, binding)) continue;
    AxiomMatch m{s, {}};
    for (std::size_t i = 0; i < schema_arity(s); ++i) {
      auto it = binding.find("?" + std::to_string(i));
      // Metavariables absent from the pattern cannot occur; all appear.
      m.args.push_back(it->second);
    }
    return m;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Proofs

HilbertProof HilbertProof::assn(std::size_t index) {
  return HilbertProof(std::make_shared<const Node>(Node{ProofKind::Assn, index, Schema::K, {}, {}}));
}
HilbertProof HilbertProof::ax(Schema s, std::vector<Formula> args) {
  if (args.size() != schema_arity(s)) throw std::invalid_argument("wrong number of schema arguments");
  return HilbertProof(std::make_shared<const Node>(Node{ProofKind::Ax, 0, s, std::move(args), {}}));
}
HilbertProof HilbertProof::mp(HilbertProof major, HilbertProof minor) {
  return HilbertProof(
      std::make_shared<const Node>(Node{ProofKind::MP, 0, Schema::K, {}, {std::move(major), std::move(minor)}}));
}
HilbertProof HilbertProof::nec(HilbertProof sub) {
  return HilbertProof(std::make_shared<const Node>(Node{ProofKind::Nec, 0, Schema::K, {}, {std::move(sub)}}));
}

std::size_t HilbertProof::size() const {
  std::size_t n = 1;
  for (const auto& s : node_->subs) n += s.size();
  return n;
}

namespace {

// Computes conclusions bottom-up. Shared subproofs are checked once per
// assumption list, which keeps heavily shared translation output cheap.
class ProofChecker {
 public:
  ProofChecker(LogicId logic, const std::vector<Formula>& assumptions) : logic_(logic), assumptions_(assumptions) {}

  std::optional<Formula> run(const HilbertProof& p) { return conclusion(p, false); }

  std::vector<std::size_t> path;
  std::string reason;

 private:
  std::optional<Formula> fail(std::string why) {
    reason = std::move(why);
    return std::nullopt;
  }

  std::optional<Formula> conclusion(const HilbertProof& p, bool closed) {
    auto& memo = closed ? closed_memo_ : open_memo_;
    if (auto it = memo.find(p.id()); it != memo.end()) return it->second;
    std::optional<Formula> out = compute(p, closed);
    if (out) memo.emplace(p.id(), *out);
    return out;
  }

  std::optional<Formula> compute(const HilbertProof& p, bool closed) {
    switch (p.kind()) {
      case ProofKind::Assn: {
        if (closed) return fail("assumption used inside a necessitation, whose premise must be closed");
        if (p.index() >= assumptions_.size())
          return fail("assumption index " + std::to_string(p.index()) + " out of range");
        return assumptions_[p.index()];
      }
      case ProofKind::Ax: {
        if (!logic_has(logic_, p.schema()))
          return fail("schema " + schema_name(p.schema()) + " is not an axiom of " + logic_name(logic_));
        return instantiate(p.schema(), p.args());
      }
      case ProofKind::MP: {
        path.push_back(0);
        auto major = conclusion(p.major(), closed);
        if (!major) return std::nullopt;
        path.back() = 1;
        auto minor = conclusion(p.minor(), closed);
        if (!minor) return std::nullopt;
        path.pop_back();
        if (!major->is(FormulaKind::Implies))
          return fail("major premise of modus ponens proves " + print_formula(*major) + ", not an implication");
        if (!(major->first() == *minor))
          return fail("minor premise proves " + print_formula(*minor) + " but " + print_formula(major->first()) +
                      " is needed");
        return major->second();
      }
      case ProofKind::Nec: {
        path.push_back(0);
        auto sub = conclusion(p.sub(), true);
        if (!sub) return std::nullopt;
        path.pop_back();
        return Formula::box(*sub);
      }
    }
    return std::nullopt;
  }

  LogicId logic_;
  const std::vector<Formula>& assumptions_;
  std::map<const void*, Formula> open_memo_, closed_memo_;
};

}  // namespace

HilbertVerdict check_hilbert(LogicId logic, const std::vector<Formula>& assumptions, const Formula& goal,
                             const HilbertProof& proof) {
  ProofChecker c(logic, assumptions);
  HilbertVerdict v;
  auto concl = c.run(proof);
  if (!concl) {
    v.path = c.path;
    v.reason = c.reason;
    return v;
  }
  v.conclusion = *concl;
  if (goal && !(goal == *concl)) {
    v.reason = "proof concludes " + print_formula(*concl) + ", not the goal " + print_formula(goal);
    return v;
  }
  v.ok = true;
  return v;
}

Formula conclusion_of(LogicId logic, const std::vector<Formula>& assumptions, const HilbertProof& proof) {
  HilbertVerdict v = check_hilbert(logic, assumptions, Formula(), proof);
  if (!v.ok) throw HilbertError(v.reason);
  return v.conclusion;
}

namespace {

HilbertProof identity_proof(const Formula& a) {
  // S A (A -> A) A  applied to  K A (A -> A)  and  K A A.
  Formula aa = imp(a, a);
  return HilbertProof::mp(
      HilbertProof::mp(HilbertProof::ax(Schema::SComb, {a, aa, a}), HilbertProof::ax(Schema::KComb, {a, aa})),
      HilbertProof::ax(Schema::KComb, {a, a}));
}

bool uses_assumption(const HilbertProof& p, std::size_t index, std::map<const void*, bool>& memo) {
  if (auto it = memo.find(p.id()); it != memo.end()) return it->second;
  bool out = false;
  switch (p.kind()) {
    case ProofKind::Assn: out = p.index() == index; break;
    case ProofKind::MP: out = uses_assumption(p.major(), index, memo) || uses_assumption(p.minor(), index, memo); break;
    default: out = false;
  }
  memo.emplace(p.id(), out);
  return out;
}

class Discharger {
 public:
  Discharger(LogicId logic, const std::vector<Formula>& assumptions)
      : full_(assumptions), hyp_(assumptions.back()), checker_(logic, full_) {}

  HilbertProof run(const HilbertProof& p) {
    if (auto it = memo_.find(p.id()); it != memo_.end()) return it->second;
    HilbertProof out = discharge(p);
    memo_.emplace(p.id(), out);
    return out;
  }

 private:
  HilbertProof discharge(const HilbertProof& p) {
    std::size_t last = full_.size() - 1;
    if (!uses_assumption(p, last, uses_)) {
      // hyp -> X from X by the K combinator.
      Formula x = conclusion(p);
      return HilbertProof::mp(HilbertProof::ax(Schema::KComb, {x, hyp_}), p);
    }
    if (p.kind() == ProofKind::Assn) return identity_proof(hyp_);
    // Modus ponens depending on the hypothesis: distribute with S.
    Formula major = conclusion(p.major());
    Formula x = major.first(), y = major.second();
    HilbertProof dmajor = run(p.major());
    HilbertProof dminor = run(p.minor());
    return HilbertProof::mp(HilbertProof::mp(HilbertProof::ax(Schema::SComb, {hyp_, x, y}), dmajor), dminor);
  }

  Formula conclusion(const HilbertProof& p) {
    auto f = checker_.run(p);
    if (!f) throw HilbertError("deduction theorem applied to an invalid proof: " + checker_.reason);
    return *f;
  }

  std::vector<Formula> full_;
  Formula hyp_;
  ProofChecker checker_;
  std::map<const void*, HilbertProof> memo_;
  std::map<const void*, bool> uses_;
};

}  // namespace

HilbertProof deduction_theorem(LogicId logic, const std::vector<Formula>& assumptions, const HilbertProof& proof) {
  if (assumptions.empty()) throw HilbertError("no assumption to discharge");
  HilbertVerdict v = check_hilbert(logic, assumptions, Formula(), proof);
  if (!v.ok) throw HilbertError("deduction theorem applied to an invalid proof: " + v.reason);
  return Discharger(logic, assumptions).run(proof);
}

HilbertProof discharge_last(LogicId logic, const std::vector<Formula>& assumptions, const HilbertProof& proof) {
  if (assumptions.empty()) throw HilbertError("no assumption to discharge");
  return Discharger(logic, assumptions).run(proof);
}

namespace {

HilbertProof reindex_rec(const HilbertProof& proof, const std::vector<std::size_t>& remap,
                         std::map<const void*, HilbertProof>& memo) {
  if (auto it = memo.find(proof.id()); it != memo.end()) return it->second;
  HilbertProof out = proof;
  if (proof.kind() == ProofKind::Assn) {
    if (proof.index() >= remap.size()) throw HilbertError("assumption index out of range while reindexing");
    out = HilbertProof::assn(remap[proof.index()]);
  } else if (proof.kind() == ProofKind::MP) {
    out = HilbertProof::mp(reindex_rec(proof.major(), remap, memo), reindex_rec(proof.minor(), remap, memo));
  }
  memo.emplace(proof.id(), out);
  return out;
}

}  // namespace

HilbertProof reindex(const HilbertProof& proof, const std::vector<std::size_t>& remap) {
  std::map<const void*, HilbertProof> memo;
  return reindex_rec(proof, remap, memo);
}

HilbertProof gl_four(const Formula& a) {
  using P = HilbertProof;
  Formula ba = bx(a);
  Formula d = Formula::conj(a, ba);
  // a, [](a & []a) |- a & []a
  P box_a = P::mp(P::mp(P::ax(Schema::K, {d, a}), P::nec(P::ax(Schema::Fst, {a, ba}))), P::assn(1));
  P both = P::mp(P::mp(P::ax(Schema::Pair, {a, ba}), P::assn(0)), box_a);
  P step = discharge_last(LogicId::CGL, {a, bx(d)}, both);
  P closed = discharge_last(LogicId::CGL, {a}, step);  // a -> [](d) -> d
  Formula loeb = imp(bx(d), d);
  // []a -> [](loeb)
  P lift = P::mp(P::ax(Schema::K, {a, loeb}), P::nec(closed));
  P to_box_d = P::mp(P::ax(Schema::GL, {d}), P::mp(lift, P::assn(0)));
  P snd_box = P::mp(P::ax(Schema::K, {d, ba}), P::nec(P::ax(Schema::Snd, {a, ba})));
  return discharge_last(LogicId::CGL, {ba}, P::mp(snd_box, to_box_d));
}

}  // namespace modalc
