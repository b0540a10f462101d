#include "modalc/reduce.hpp"

#include <set>

namespace modalc {

namespace {

struct Contraction {
  Term result;
  const char* rule;
};

// Renames the letbox binder of `lb` so that it avoids `avoid`.
Term rename_letbox(const Term& lb, const VarSet& avoid) {
  VarSet all = avoid;
  VarSet inside = all_vars(lb);
  all.insert(inside.begin(), inside.end());
  VarName fresh = fresh_var(lb.name(), all);
  return Term::letbox(fresh, lb.first(), subst(lb.second(), lb.name(), Term::var(fresh)));
}

std::optional<Contraction> contract(const Term& t, Relation rel) {
  switch (t.kind()) {
    case TermKind::App: {
      const Term& f = t.first();
      if (f.is(TermKind::Lam)) return Contraction{subst(f.first(), f.name(), t.second()), "beta"};
      if (rel == Relation::Commuting && f.is(TermKind::LetBox)) {
        Term lb = fv(t.second()).count(f.name()) ? rename_letbox(f, fv(t.second())) : f;
        return Contraction{Term::letbox(lb.name(), lb.first(), Term::app(lb.second(), t.second())), "cc-app"};
      }
      return std::nullopt;
    }
    case TermKind::Proj: {
      const Term& p = t.first();
      if (p.is(TermKind::Pair)) return Contraction{t.index() == 1 ? p.first() : p.second(), "beta-prod"};
      if (rel == Relation::Commuting && p.is(TermKind::LetBox))
        return Contraction{Term::letbox(p.name(), p.first(), Term::proj(t.index(), p.second())), "cc-proj"};
      return std::nullopt;
    }
    case TermKind::LetBox: {
      const Term& b = t.first();
      if (b.is(TermKind::Box)) return Contraction{subst(t.second(), t.name(), b.first()), "beta-box"};
      if (b.is(TermKind::FixBox)) {
        Term unrolled = subst(b.first(), b.name(), b);
        return Contraction{subst(t.second(), t.name(), unrolled), "beta-fix"};
      }
      if (rel == Relation::Commuting && b.is(TermKind::LetBox)) {
        VarSet outer_fv = fv(t.second());
        outer_fv.erase(t.name());
        VarSet avoid = outer_fv;
        avoid.insert(t.name());
        Term inner = outer_fv.count(b.name()) ? rename_letbox(b, avoid) : b;
        return Contraction{
            Term::letbox(inner.name(), inner.first(), Term::letbox(t.name(), inner.second(), t.second())),
            "cc-let"};
      }
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

std::optional<Step> step_rec(const Term& t, Relation rel, Strategy strategy, std::vector<std::size_t>& pos) {
  if (strategy == Strategy::LeftmostOutermost) {
    if (auto c = contract(t, rel)) return Step{pos, c->rule, c->result};
  }
  const auto& kids = t.children();
  for (std::size_t k = 0; k < kids.size(); ++k) {
    std::size_t i = strategy == Strategy::LeftmostOutermost ? k : kids.size() - 1 - k;
    pos.push_back(i);
    auto s = step_rec(kids[i], rel, strategy, pos);
    pos.pop_back();
    if (s) {
      std::vector<Term> replaced = kids;
      replaced[i] = std::move(s->result);
      s->result = with_children(t, std::move(replaced));
      return s;
    }
  }
  if (strategy == Strategy::RightmostInnermost) {
    if (auto c = contract(t, rel)) return Step{pos, c->rule, c->result};
  }
  return std::nullopt;
}

}  // namespace

std::optional<Step> step_with(const Term& m, Relation rel, Strategy strategy) {
  std::vector<std::size_t> pos;
  auto s = step_rec(m, rel, strategy, pos);
  return s;
}

std::optional<Term> step(const Term& m) {
  auto s = step_with(m, Relation::Plain, Strategy::LeftmostOutermost);
  if (!s) return std::nullopt;
  return s->result;
}

std::optional<Term> step_cc(const Term& m) {
  auto s = step_with(m, Relation::Commuting, Strategy::LeftmostOutermost);
  if (!s) return std::nullopt;
  return s->result;
}

namespace {

// Walks at most kMaxTermNodes nodes; false once either limit is passed.
bool within_limits(const Term& m, std::size_t depth, std::size_t& nodes) {
  if (depth > kMaxTermDepth || ++nodes > kMaxTermNodes) return false;
  for (const auto& c : m.children())
    if (!within_limits(c, depth + 1, nodes)) return false;
  return true;
}

}  // namespace

Normalized normalize(const Term& m, Relation rel, std::size_t fuel, Strategy strategy, bool record_trace) {
  if (fuel == 0) throw std::invalid_argument("fuel must be positive");
  Normalized out{m, {}};
  for (std::size_t taken = 0;; ++taken) {
    auto s = step_with(out.normal, rel, strategy);
    if (!s) return out;
    if (taken == fuel) throw FuelExhausted(fuel);
    std::size_t nodes = 0;
    if (!within_limits(s->result, 0, nodes))
      throw FuelExhausted(fuel, "no normal form found: the term outgrew " + std::to_string(kMaxTermDepth) +
                                    " levels or " + std::to_string(kMaxTermNodes) + " nodes after " +
                                    std::to_string(taken + 1) + " steps");
    out.normal = s->result;
    if (record_trace) out.trace.push_back(std::move(*s));
  }
}

namespace {

bool subformula_rec(const TypingDerivation& d, const std::set<Type>& allowed, SubformulaVerdict& v) {
  auto offends = [&](const Type& t) {
    if (allowed.count(t)) return false;
    v.ok = false;
    v.offending = t;
    return true;
  };
  if (offends(d.conclusion.type)) return false;
  for (const auto& b : d.conclusion.ctx.modal)
    if (offends(b.type)) return false;
  for (const auto& b : d.conclusion.ctx.intuitionistic)
    if (offends(b.type)) return false;
  for (std::size_t i = 0; i < d.premises.size(); ++i) {
    v.path.push_back(i);
    if (!subformula_rec(d.premises[i], allowed, v)) return false;
    v.path.pop_back();
  }
  return true;
}

}  // namespace

SubformulaVerdict subformula_check(const TypingDerivation& d) {
  std::set<Type> allowed = subexpressions(d.conclusion.type);
  for (const auto* zone : {&d.conclusion.ctx.modal, &d.conclusion.ctx.intuitionistic})
    for (const auto& b : *zone) {
      auto s = subexpressions(b.type);
      allowed.insert(s.begin(), s.end());
    }
  SubformulaVerdict v;
  subformula_rec(d, allowed, v);
  return v;
}

}  // namespace modalc
