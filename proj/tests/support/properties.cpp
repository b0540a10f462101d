#include "properties.hpp"

#include <algorithm>

#include "modalc/parser.hpp"

namespace modalc::testgen {

std::string describe(const Sample& s) {
  return system_name(s.sys) + ": " + print_judgment(s.ctx, s.term, s.type);
}

namespace {

bool types_as(SystemId sys, const DualContext& ctx, const Term& m, const Type& a) {
  auto t = type_of(sys, ctx, m);
  return t && *t == a;
}

Context without(const Context& c, const VarName& v) {
  Context out;
  for (const auto& b : c)
    if (!(b.name == v)) out.push(b.name, b.type);
  return out;
}

Context slice(const Context& c, std::size_t from, std::size_t to) {
  Context out;
  for (std::size_t i = from; i < to && i < c.size(); ++i) out.push(c[i].name, c[i].type);
  return out;
}

Context concat(const Context& a, const Context& b) {
  Context out = a;
  for (const auto& x : b) out.push(x.name, x.type);
  return out;
}

std::string show_set(const VarSet& vs) {
  std::string out = "{";
  for (const auto& v : vs) out += (out.size() > 1 ? "," : "") + v.str();
  return out + "}";
}

}  // namespace

Verdict subject_reduction(const Sample& s, Relation rel) {
  Term cur = s.term;
  for (std::size_t i = 0; i < kDefaultFuel; ++i) {
    auto st = step_with(cur, rel, Strategy::LeftmostOutermost);
    if (!st) return std::nullopt;
    if (!types_as(s.sys, s.ctx, st->result, s.type))
      return describe(s) + ": after " + st->rule + " step from " + print_term(cur) + " the term " +
             print_term(st->result) + " does not have the type";
    cur = st->result;
  }
  return describe(s) + ": fuel exhausted";
}

Verdict fv_partition(const Sample& s) {
  VarSet u = ufv(s.term), b = bfv(s.term);
  u.insert(b.begin(), b.end());
  if (u != fv(s.term)) return describe(s) + ": fv differs from ufv + bfv";
  return std::nullopt;
}

Verdict complement_fv_laws(const Sample& s) {
  Term c = complement_term(s.term);
  if (ufv(c) != complement_set(ufv(s.term)))
    return describe(s) + ": ufv of the complement is " + show_set(ufv(c));
  if (bfv(c) != bfv(s.term)) return describe(s) + ": bfv of the complement is " + show_set(bfv(c));
  if (!alpha_eq(complement_term(c), s.term)) return describe(s) + ": complement is not an involution";
  return std::nullopt;
}

Verdict fv_containment(const Sample& s) {
  VarSet g = s.ctx.intuitionistic.vars(), d = s.ctx.modal.vars();
  VarSet allowed_u = g;
  if (has_box_var(s.sys)) allowed_u.insert(d.begin(), d.end());
  for (const auto& v : ufv(s.term))
    if (!allowed_u.count(v)) return describe(s) + ": unboxed free variable " + v.str() + " outside its zone";
  for (const auto& v : bfv(s.term))
    if (!d.count(v)) return describe(s) + ": boxed free variable " + v.str() + " not in Delta";
  return std::nullopt;
}

Verdict complement_subst(Generator& g, const Sample& s) {
  VarSet free = fv(s.term);
  std::vector<Binding> candidates;
  for (const auto* zone : {&s.ctx.modal, &s.ctx.intuitionistic})
    for (const auto& b : *zone)
      if (!free.count(b.name.complement())) candidates.push_back(b);
  if (candidates.empty()) return std::nullopt;
  const Binding& u = candidates[static_cast<std::size_t>(g.pick(static_cast<int>(candidates.size())))];
  auto n = g.term(s.ctx, u.type, 2);
  if (!n) n = raw_term(g.rng(), 2);
  Term lhs = complement_term(subst(s.term, u.name, *n));
  Term rhs = subst_many(complement_term(s.term), {{u.name, *n}, {u.name.complement(), complement_term(*n)}});
  if (!alpha_eq(lhs, rhs))
    return describe(s) + ": substituting " + print_term(*n) + " for " + u.name.str() + " gives " + print_term(lhs) +
           " vs " + print_term(rhs);
  return std::nullopt;
}

Verdict strengthening(const Sample& s) {
  VarSet free = fv(s.term);
  for (const auto& b : s.ctx.modal)
    if (!free.count(b.name)) {
      DualContext c{without(s.ctx.modal, b.name), s.ctx.intuitionistic};
      if (!types_as(s.sys, c, s.term, s.type)) return describe(s) + ": dropping modal " + b.name.str() + " fails";
    }
  for (const auto& b : s.ctx.intuitionistic)
    if (!free.count(b.name)) {
      DualContext c{s.ctx.modal, without(s.ctx.intuitionistic, b.name)};
      if (!types_as(s.sys, c, s.term, s.type)) return describe(s) + ": dropping " + b.name.str() + " fails";
    }
  return std::nullopt;
}

Verdict weakening(Generator& g, const Sample& s) {
  DualContext c = s.ctx;
  c.intuitionistic.push(g.fresh("w"), g.type(2));
  c.modal.push(g.fresh("w"), g.type(2));
  if (!types_as(s.sys, c, s.term, s.type)) return describe(s) + ": weakening to " + print_dual_context(c) + " fails";
  return std::nullopt;
}

Verdict exchange(Generator& g, const Sample& s) {
  std::vector<Binding> m = s.ctx.modal.bindings(), i = s.ctx.intuitionistic.bindings();
  std::shuffle(m.begin(), m.end(), g.rng());
  std::shuffle(i.begin(), i.end(), g.rng());
  DualContext c{Context(m), Context(i)};
  if (!types_as(s.sys, c, s.term, s.type)) return describe(s) + ": permuting to " + print_dual_context(c) + " fails";
  return std::nullopt;
}

Verdict contraction(const Sample& s) {
  auto try_zone = [&](bool modal) -> Verdict {
    const Context& z = modal ? s.ctx.modal : s.ctx.intuitionistic;
    for (std::size_t a = 0; a < z.size(); ++a)
      for (std::size_t b = a + 1; b < z.size(); ++b) {
        if (!(z[a].type == z[b].type)) continue;
        Term merged = subst(s.term, z[b].name, Term::var(z[a].name));
        DualContext c = s.ctx;
        (modal ? c.modal : c.intuitionistic) = without(z, z[b].name);
        if (!types_as(s.sys, c, merged, s.type))
          return describe(s) + ": merging " + z[b].name.str() + " into " + z[a].name.str() + " fails";
      }
    return std::nullopt;
  };
  if (auto v = try_zone(false)) return v;
  return try_zone(true);
}

Verdict intuitionistic_cut(Generator& g, const Sample& s) {
  const Context& gamma = s.ctx.intuitionistic;
  if (gamma.empty()) return std::nullopt;
  std::size_t i = static_cast<std::size_t>(g.pick(static_cast<int>(gamma.size())));
  DualContext premise{s.ctx.modal, slice(gamma, 0, i)};
  auto n = g.term(premise, gamma[i].type, 3);
  if (!n) return std::nullopt;
  Term cut = subst(s.term, gamma[i].name, *n);
  DualContext c{s.ctx.modal, concat(slice(gamma, 0, i), slice(gamma, i + 1, gamma.size()))};
  if (!types_as(s.sys, c, cut, s.type))
    return describe(s) + ": cutting " + print_term(*n) + " for " + gamma[i].name.str() + " gives untypable " +
           print_term(cut);
  return std::nullopt;
}

Verdict modal_cut(Generator& g, const Sample& s) {
  const Context& delta = s.ctx.modal;
  if (delta.empty()) return std::nullopt;
  std::size_t i = static_cast<std::size_t>(g.pick(static_cast<int>(delta.size())));
  const Binding& u = delta[i];
  Context pre = slice(delta, 0, i);
  DualContext premise;
  switch (s.sys) {
    case SystemId::K:
    case SystemId::T: premise.intuitionistic = pre; break;
    case SystemId::S4: premise.modal = pre; break;
    case SystemId::K4:
    case SystemId::GL:
      premise.modal = pre;
      premise.intuitionistic = complement_ctx(pre);
      break;
  }
  VarName z = g.fresh("z");
  Type boxed = Type::box(u.type);
  if (s.sys == SystemId::GL) premise.intuitionistic.push(z.complement(), boxed);
  auto body = g.term(premise, u.type, 3);
  if (!body) return std::nullopt;
  Term n = uses_complement(s.sys) ? complement_term(*body) : *body;
  Term replacement = n;
  if (s.sys == SystemId::GL) replacement = subst(n, z, Term::fixbox(z, boxed, n));
  Term cut = subst(s.term, u.name, replacement);
  DualContext c{concat(pre, slice(delta, i + 1, delta.size())), s.ctx.intuitionistic};
  if (!types_as(s.sys, c, cut, s.type))
    return describe(s) + ": modal cut of " + print_term(replacement) + " for " + u.name.str() +
           " gives untypable " + print_term(cut);
  return std::nullopt;
}

Verdict dereliction(const Sample& s) {
  if (!has_box_var(s.sys)) return std::nullopt;
  const Context& gamma = s.ctx.intuitionistic;
  for (std::size_t k = 1; k <= gamma.size(); ++k) {
    DualContext c{concat(s.ctx.modal, slice(gamma, 0, k)), slice(gamma, k, gamma.size())};
    if (!types_as(s.sys, c, s.term, s.type))
      return describe(s) + ": moving " + std::to_string(k) + " variables to Delta fails";
  }
  return std::nullopt;
}

Verdict confluence(const Sample& s, Relation rel, bool tolerate_innermost_divergence) {
  Normalized a, b;
  try {
    a = normalize(s.term, rel, kDefaultFuel, Strategy::LeftmostOutermost, false);
  } catch (const FuelExhausted& e) {
    return describe(s) + ": " + e.what();
  }
  try {
    b = normalize(s.term, rel, kDefaultFuel, Strategy::RightmostInnermost, false);
  } catch (const FuelExhausted& e) {
    if (tolerate_innermost_divergence) return std::nullopt;
    return describe(s) + ": " + e.what();
  }
  if (!alpha_eq(a.normal, b.normal))
    return describe(s) + ": normal forms " + print_term(a.normal) + " and " + print_term(b.normal);
  return std::nullopt;
}

Verdict subformula(const Sample& s) {
  Term n = normalize(s.term, Relation::Commuting, kDefaultFuel, Strategy::LeftmostOutermost, false).normal;
  TypingDerivation d = infer(s.sys, s.ctx, n);
  SubformulaVerdict v = subformula_check(d);
  if (!v.ok)
    return describe(s) + ": normal form " + print_term(n) + " mentions " + print_type(*v.offending);
  return std::nullopt;
}

Verdict hilbert_translation(const Sample& s) {
  TypingDerivation d = infer(s.sys, s.ctx, s.term);
  Translation t = translate(s.sys, d);
  HilbertVerdict v = check_hilbert(t.logic, t.assumptions, t.goal, t.proof);
  if (!v.ok) return describe(s) + ": translated proof rejected: " + v.reason;
  return std::nullopt;
}

}  // namespace modalc::testgen
