#include "modalc/equality.hpp"

#include "modalc/parser.hpp"
#include "modalc/reduce.hpp"

namespace modalc {

namespace {

// One innermost-leftmost eta contraction.
std::optional<Term> eta_step(const Term& t, std::vector<std::string>* trace) {
  const auto& kids = t.children();
  for (std::size_t i = 0; i < kids.size(); ++i) {
    if (auto r = eta_step(kids[i], trace)) {
      std::vector<Term> replaced = kids;
      replaced[i] = *r;
      return with_children(t, std::move(replaced));
    }
  }
  if (t.is(TermKind::Lam)) {
    const Term& body = t.first();
    if (body.is(TermKind::App) && body.second().is(TermKind::Var) && body.second().name() == t.name() &&
        !fv(body.first()).count(t.name())) {
      if (trace) trace->push_back("eta-arrow");
      return body.first();
    }
  }
  if (t.is(TermKind::LetBox)) {
    const Term& body = t.second();
    if (body.is(TermKind::Box) && body.first().is(TermKind::Var) && body.first().name() == t.name()) {
      if (trace) trace->push_back("eta-box");
      return t.first();
    }
  }
  return std::nullopt;
}

// Eta-expands every letbox of arrow type and pushes the application inside:
// let box u = M in N  to  \e:A. let box u = M in N e. Derivable by eta and
// cc-app. Without it, let box u = M in \x. N and its eta-expansion
// \x. let box u = M in N have different normal forms.
Term expand_letbox(const Term& t, const TypingDerivation& d, bool& changed) {
  const auto& kids = t.children();
  if (kids.size() != d.premises.size()) return t;
  Term out = t;
  if (!kids.empty()) {
    std::vector<Term> replaced;
    for (std::size_t i = 0; i < kids.size(); ++i) replaced.push_back(expand_letbox(kids[i], d.premises[i], changed));
    out = with_children(t, std::move(replaced));
  }
  const Type& a = d.conclusion.type;
  if (!out.is(TermKind::LetBox) || !a.is(TypeKind::Arrow)) return out;
  VarSet avoid = fv(out);
  avoid.insert(out.name());
  VarSet comp = complement_set(avoid);
  avoid.insert(comp.begin(), comp.end());
  VarName e = fresh_var(VarName("e"), avoid);
  changed = true;
  return Term::lam(e, a.first(), Term::letbox(out.name(), out.first(), Term::app(out.second(), Term::var(e))));
}

Term untyped_canonical(const Term& m, std::vector<std::string>* trace) {
  Term cur = m;
  for (;;) {
    Normalized n = normalize(cur, Relation::Commuting, kDefaultFuel, Strategy::LeftmostOutermost, trace != nullptr);
    if (trace)
      for (const auto& s : n.trace) trace->push_back(s.rule);
    Term contracted = eta_contract(n.normal, trace);
    if (contracted.same_node(n.normal)) return contracted;
    cur = contracted;
  }
}

}  // namespace

Term eta_contract(const Term& m, std::vector<std::string>* trace) {
  Term cur = m;
  while (auto next = eta_step(cur, trace)) cur = *next;
  return cur;
}

Term canonical_form(SystemId sys, const DualContext& ctx, const Term& m, std::vector<std::string>* trace) {
  Term cur = m;
  for (;;) {
    cur = untyped_canonical(cur, trace);
    bool changed = false;
    Term expanded = expand_letbox(cur, infer(sys, ctx, cur), changed);
    if (!changed) return cur;
    if (trace) trace->push_back("eta-letbox");
    cur = expanded;
  }
}

EqVerdict eq_terms(SystemId sys, const DualContext& ctx, const Term& m, const Term& n, const Type& ty) {
  if (sys == SystemId::GL) throw UnsupportedSystem("no equational theory for GL");
  for (const Term* side : {&m, &n}) {
    std::optional<Type> t;
    try {
      t = infer(sys, ctx, *side).conclusion.type;
    } catch (const TypeError& e) {
      throw IllTyped(print_term(*side) + ": " + e.what());
    }
    if (!(*t == ty))
      throw IllTyped(print_term(*side) + " has type " + print_type(*t) + ", not " + print_type(ty));
  }
  EqVerdict v;
  v.left_normal = canonical_form(sys, ctx, m, &v.trace);
  v.right_normal = canonical_form(sys, ctx, n, &v.trace);
  v.equal = alpha_eq(v.left_normal, v.right_normal);
  return v;
}

}  // namespace modalc
