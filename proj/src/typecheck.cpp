#include "modalc/typecheck.hpp"

#include <algorithm>
#include <cctype>

#include "modalc/parser.hpp"

namespace modalc {

std::string system_name(SystemId s) {
  switch (s) {
    case SystemId::K: return "K";
    case SystemId::K4: return "K4";
    case SystemId::GL: return "GL";
    case SystemId::T: return "T";
    case SystemId::S4: return "S4";
  }
  return "?";
}

std::optional<SystemId> parse_system_name(const std::string& s) {
  for (SystemId id : kAllSystems) {
    std::string n = system_name(id);
    if (s == n) return id;
    std::string lower;
    for (char c : n) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (s == lower) return id;
  }
  return std::nullopt;
}

std::string rule_name(Rule r) {
  switch (r) {
    case Rule::Var: return "var";
    case Rule::BoxVar: return "[]var";
    case Rule::ProdIntro: return "*I";
    case Rule::ProdElim1: return "*E1";
    case Rule::ProdElim2: return "*E2";
    case Rule::ArrowIntro: return "->I";
    case Rule::ArrowElim: return "->E";
    case Rule::BoxElim: return "[]E";
    case Rule::BoxIntroK: return "[]I_K";
    case Rule::BoxIntroK4: return "[]I_K4";
    case Rule::BoxIntroGL: return "[]I_GL";
    case Rule::BoxIntroS4: return "[]I_S4";
  }
  return "?";
}

std::string type_error_kind_name(TypeErrorKind k) {
  switch (k) {
    case TypeErrorKind::UnboundVariable: return "UnboundVariable";
    case TypeErrorKind::ZoneViolation: return "ZoneViolation";
    case TypeErrorKind::TypeMismatch: return "TypeMismatch";
    case TypeErrorKind::IllFormedContext: return "IllFormedContext";
    case TypeErrorKind::WrongConstructForSystem: return "WrongConstructForSystem";
  }
  return "?";
}

std::size_t TypingDerivation::node_count() const {
  std::size_t n = 1;
  for (const auto& p : premises) n += p.node_count();
  return n;
}

namespace {

bool self_complement_free(const Context& c) {
  for (const auto& b : c)
    if (c.contains(b.name.complement())) return false;
  return true;
}

}  // namespace

bool well_defined(const DualContext& ctx, SystemId sys) {
  for (const auto& b : ctx.modal)
    if (ctx.intuitionistic.contains(b.name)) return false;
  if (uses_complement(sys)) return self_complement_free(ctx.modal) && self_complement_free(ctx.intuitionistic);
  return true;
}

namespace {

class Synthesizer {
 public:
  explicit Synthesizer(SystemId sys) : sys_(sys) {}

  TypingDerivation run(const DualContext& ctx, const Term& m) {
    switch (m.kind()) {
      case TermKind::Var: return variable(ctx, m);
      case TermKind::Lam: return lambda(ctx, m);
      case TermKind::App: {
        TypingDerivation f = run(ctx, m.first());
        TypingDerivation a = run(ctx, m.second());
        const Type& ft = f.conclusion.type;
        if (!ft.is(TypeKind::Arrow))
          mismatch("function position of " + print_term(m) + " has non-arrow type " + print_type(ft));
        if (!(ft.first() == a.conclusion.type))
          mismatch("argument of " + print_term(m) + " has type " + print_type(a.conclusion.type) + ", expected " +
                   print_type(ft.first()));
        Type result = ft.second();
        return node(Rule::ArrowElim, ctx, m, result, {std::move(f), std::move(a)});
      }
      case TermKind::Pair: {
        TypingDerivation a = run(ctx, m.first());
        TypingDerivation b = run(ctx, m.second());
        Type t = Type::prod(a.conclusion.type, b.conclusion.type);
        return node(Rule::ProdIntro, ctx, m, t, {std::move(a), std::move(b)});
      }
      case TermKind::Proj: {
        TypingDerivation p = run(ctx, m.first());
        const Type& pt = p.conclusion.type;
        if (!pt.is(TypeKind::Prod))
          mismatch("projection from " + print_term(m.first()) + " of non-product type " + print_type(pt));
        Type t = m.index() == 1 ? pt.first() : pt.second();
        return node(m.index() == 1 ? Rule::ProdElim1 : Rule::ProdElim2, ctx, m, t, {std::move(p)});
      }
      case TermKind::Box: return box_intro(ctx, m);
      case TermKind::FixBox: return fix_intro(ctx, m);
      case TermKind::LetBox: return box_elim(ctx, m);
    }
    mismatch("unknown term");
  }

 private:
  [[noreturn]] static void mismatch(const std::string& msg) { throw TypeError(TypeErrorKind::TypeMismatch, msg); }

  static TypingDerivation node(Rule r, const DualContext& ctx, const Term& m, Type t,
                               std::vector<TypingDerivation> premises) {
    return TypingDerivation{r, Judgment{ctx, m, std::move(t)}, std::move(premises)};
  }

  TypingDerivation variable(const DualContext& ctx, const Term& m) {
    if (auto t = ctx.intuitionistic.lookup(m.name())) return node(Rule::Var, ctx, m, *t, {});
    if (auto t = ctx.modal.lookup(m.name())) {
      if (has_box_var(sys_)) return node(Rule::BoxVar, ctx, m, *t, {});
      throw TypeError(TypeErrorKind::ZoneViolation, "modal variable " + m.name().str() + " used outside a box in " +
                                                        system_name(sys_));
    }
    if (hidden_.count(m.name()))
      throw TypeError(TypeErrorKind::ZoneViolation, "variable " + m.name().str() + " is not visible under this box in " +
                                                        system_name(sys_));
    throw TypeError(TypeErrorKind::UnboundVariable, "unbound variable " + m.name().str());
  }

  // Checks a box premise, remembering which enclosing names it drops so a
  // use of one reads as a zone violation rather than an unbound name.
  TypingDerivation premise_run(const DualContext& ctx, const DualContext& premise, const Term& body) {
    VarSet saved = hidden_;
    for (const auto& v : ctx.vars()) {
      if (!premise.contains(v)) hidden_.insert(v);
      if (uses_complement(sys_) && !premise.contains(v.complement())) hidden_.insert(v.complement());
    }
    try {
      TypingDerivation d = run(premise, body);
      hidden_ = std::move(saved);
      return d;
    } catch (...) {
      hidden_ = std::move(saved);
      throw;
    }
  }

  // Renames `x` in `body` when binding it would break well-definedness.
  static std::pair<VarName, Term> freshen(const VarName& x, const Term& body, bool clash, const DualContext& ctx) {
    if (!clash) return {x, body};
    VarSet avoid = ctx.vars();
    VarSet comp = complement_set(avoid);
    avoid.insert(comp.begin(), comp.end());
    VarSet inside = all_vars(body);
    avoid.insert(inside.begin(), inside.end());
    VarName y = fresh_var(x, avoid);
    return {y, subst(body, x, Term::var(y))};
  }

  TypingDerivation lambda(const DualContext& ctx, const Term& m) {
    const VarName& x = m.name();
    bool clash = ctx.contains(x) || (uses_complement(sys_) && ctx.intuitionistic.contains(x.complement()));
    auto [y, body] = freshen(x, m.first(), clash, ctx);
    DualContext inner = ctx;
    inner.intuitionistic.push(y, m.annot());
    TypingDerivation b = run(inner, body);
    Type t = Type::arrow(m.annot(), b.conclusion.type);
    return node(Rule::ArrowIntro, ctx, m, t, {std::move(b)});
  }

  TypingDerivation box_elim(const DualContext& ctx, const Term& m) {
    TypingDerivation bound = run(ctx, m.first());
    const Type& bt = bound.conclusion.type;
    if (!bt.is(TypeKind::Box))
      mismatch("let box binds " + print_term(m.first()) + " of non-boxed type " + print_type(bt));
    const VarName& u = m.name();
    bool clash = ctx.contains(u) || (uses_complement(sys_) && ctx.modal.contains(u.complement()));
    auto [v, body] = freshen(u, m.second(), clash, ctx);
    DualContext inner = ctx;
    inner.modal.push(v, bt.first());
    TypingDerivation b = run(inner, body);
    Type t = b.conclusion.type;
    return node(Rule::BoxElim, ctx, m, t, {std::move(bound), std::move(b)});
  }

  TypingDerivation box_intro(const DualContext& ctx, const Term& m) {
    DualContext premise;
    Term body = m.first();
    Rule rule = Rule::BoxIntroK;
    switch (sys_) {
      case SystemId::GL:
        throw TypeError(TypeErrorKind::WrongConstructForSystem, "box is not an introduction form of GL; use fix");
      case SystemId::K:
      case SystemId::T:
        premise.intuitionistic = ctx.modal;
        break;
      case SystemId::K4:
        premise.modal = ctx.modal;
        premise.intuitionistic = complement_ctx(ctx.modal);
        body = complement_term(body);
        rule = Rule::BoxIntroK4;
        break;
      case SystemId::S4:
        premise.modal = ctx.modal;
        rule = Rule::BoxIntroS4;
        break;
    }
    TypingDerivation b = premise_run(ctx, premise, body);
    Type t = Type::box(b.conclusion.type);
    return node(rule, ctx, m, t, {std::move(b)});
  }

  TypingDerivation fix_intro(const DualContext& ctx, const Term& m) {
    if (sys_ != SystemId::GL)
      throw TypeError(TypeErrorKind::WrongConstructForSystem, "fix is only available in GL, not " + system_name(sys_));
    const Type& annot = m.annot();
    if (!annot.is(TypeKind::Box)) mismatch("fix annotation " + print_type(annot) + " is not a boxed type");
    const VarName& z = m.name();
    bool clash = ctx.modal.contains(z) || ctx.modal.contains(z.complement());
    DualContext outer{ctx.modal, {}};
    auto [w, body] = freshen(z, m.first(), clash, outer);
    DualContext premise;
    premise.modal = ctx.modal;
    premise.intuitionistic = complement_ctx(ctx.modal);
    premise.intuitionistic.push(w.complement(), annot);
    TypingDerivation b = premise_run(ctx, premise, complement_term(body));
    if (!(b.conclusion.type == annot.first()))
      mismatch("fix body has type " + print_type(b.conclusion.type) + ", expected " + print_type(annot.first()));
    return node(Rule::BoxIntroGL, ctx, m, annot, {std::move(b)});
  }

  SystemId sys_;
  VarSet hidden_;
};

}  // namespace

TypingDerivation infer(SystemId sys, const DualContext& ctx, const Term& m) {
  if (!well_defined(ctx, sys))
    throw TypeError(TypeErrorKind::IllFormedContext,
                    "context " + print_dual_context(ctx) + " is not well-defined for " + system_name(sys));
  return Synthesizer(sys).run(ctx, m);
}

std::optional<Type> type_of(SystemId sys, const DualContext& ctx, const Term& m) {
  try {
    return infer(sys, ctx, m).conclusion.type;
  } catch (const TypeError&) {
    return std::nullopt;
  }
}

namespace {

struct Checker {
  SystemId sys;
  std::vector<std::size_t> path;
  std::string reason;

  bool fail(std::string why) {
    reason = std::move(why);
    return false;
  }

  bool check(const TypingDerivation& d) {
    const Judgment& j = d.conclusion;
    const DualContext& ctx = j.ctx;
    const auto& ps = d.premises;
    if (!well_defined(ctx, sys)) return fail("context is not well-defined for " + system_name(sys));
    auto arity = [&](std::size_t n) { return ps.size() == n; };
    auto same_ctx = [&](std::size_t i) { return ps[i].conclusion.ctx == ctx; };
    const Term& m = j.term;

    bool ok = true;
    switch (d.rule) {
      case Rule::Var:
        ok = arity(0) && m.is(TermKind::Var) && ctx.intuitionistic.lookup(m.name()) == std::optional<Type>(j.type);
        if (!ok) return fail("(var) needs the variable in the intuitionistic zone at the stated type");
        break;
      case Rule::BoxVar:
        if (!has_box_var(sys)) return fail("([]var) is not a rule of " + system_name(sys));
        ok = arity(0) && m.is(TermKind::Var) && ctx.modal.lookup(m.name()) == std::optional<Type>(j.type);
        if (!ok) return fail("([]var) needs the variable in the modal zone at the stated type");
        break;
      case Rule::ProdIntro:
        ok = arity(2) && same_ctx(0) && same_ctx(1) &&
             j.type == Type::prod(ps[0].conclusion.type, ps[1].conclusion.type) &&
             alpha_eq(m, Term::pair(ps[0].conclusion.term, ps[1].conclusion.term));
        if (!ok) return fail("malformed (*I) node");
        break;
      case Rule::ProdElim1:
      case Rule::ProdElim2: {
        int i = d.rule == Rule::ProdElim1 ? 1 : 2;
        ok = arity(1) && same_ctx(0) && ps[0].conclusion.type.is(TypeKind::Prod) &&
             j.type == (i == 1 ? ps[0].conclusion.type.first() : ps[0].conclusion.type.second()) &&
             alpha_eq(m, Term::proj(i, ps[0].conclusion.term));
        if (!ok) return fail("malformed (*E) node");
        break;
      }
      case Rule::ArrowIntro: {
        if (!arity(1)) return fail("(->I) takes one premise");
        const DualContext& pc = ps[0].conclusion.ctx;
        const auto& pg = pc.intuitionistic.bindings();
        ok = pc.modal == ctx.modal && pg.size() == ctx.intuitionistic.size() + 1 &&
             std::equal(ctx.intuitionistic.begin(), ctx.intuitionistic.end(), pg.begin());
        if (!ok) return fail("(->I) premise must extend the intuitionistic zone by one binding");
        const Binding& x = pg.back();
        ok = j.type == Type::arrow(x.type, ps[0].conclusion.type) &&
             alpha_eq(m, Term::lam(x.name, x.type, ps[0].conclusion.term));
        if (!ok) return fail("(->I) conclusion does not match its premise");
        break;
      }
      case Rule::ArrowElim:
        ok = arity(2) && same_ctx(0) && same_ctx(1) &&
             ps[0].conclusion.type == Type::arrow(ps[1].conclusion.type, j.type) &&
             alpha_eq(m, Term::app(ps[0].conclusion.term, ps[1].conclusion.term));
        if (!ok) return fail("malformed (->E) node");
        break;
      case Rule::BoxElim: {
        if (!arity(2) || !same_ctx(0) || !ps[0].conclusion.type.is(TypeKind::Box))
          return fail("([]E) needs a boxed first premise in the same context");
        const DualContext& pc = ps[1].conclusion.ctx;
        const auto& pd = pc.modal.bindings();
        ok = pc.intuitionistic == ctx.intuitionistic && pd.size() == ctx.modal.size() + 1 &&
             std::equal(ctx.modal.begin(), ctx.modal.end(), pd.begin()) &&
             pd.back().type == ps[0].conclusion.type.first();
        if (!ok) return fail("([]E) second premise must extend the modal zone with the unboxed type");
        ok = j.type == ps[1].conclusion.type &&
             alpha_eq(m, Term::letbox(pd.back().name, ps[0].conclusion.term, ps[1].conclusion.term));
        if (!ok) return fail("([]E) conclusion does not match its premises");
        break;
      }
      case Rule::BoxIntroK:
      case Rule::BoxIntroK4:
      case Rule::BoxIntroS4: {
        bool allowed = (d.rule == Rule::BoxIntroK && (sys == SystemId::K || sys == SystemId::T)) ||
                       (d.rule == Rule::BoxIntroK4 && sys == SystemId::K4) ||
                       (d.rule == Rule::BoxIntroS4 && sys == SystemId::S4);
        if (!allowed) return fail("(" + rule_name(d.rule) + ") is not a rule of " + system_name(sys));
        if (!arity(1) || !m.is(TermKind::Box)) return fail("box introduction needs one premise and a box term");
        DualContext expected;
        Term body = m.first();
        if (d.rule == Rule::BoxIntroK) {
          expected.intuitionistic = ctx.modal;
        } else if (d.rule == Rule::BoxIntroK4) {
          expected.modal = ctx.modal;
          expected.intuitionistic = complement_ctx(ctx.modal);
          body = complement_term(body);
        } else {
          expected.modal = ctx.modal;
        }
        if (!(ps[0].conclusion.ctx == expected)) return fail("premise context of (" + rule_name(d.rule) + ") is wrong");
        ok = j.type == Type::box(ps[0].conclusion.type) && alpha_eq(ps[0].conclusion.term, body);
        if (!ok) return fail("(" + rule_name(d.rule) + ") conclusion does not match its premise");
        break;
      }
      case Rule::BoxIntroGL: {
        if (sys != SystemId::GL) return fail("([]I_GL) is not a rule of " + system_name(sys));
        if (!arity(1) || !m.is(TermKind::FixBox) || !(m.annot() == j.type) || !j.type.is(TypeKind::Box))
          return fail("([]I_GL) needs one premise and a fix term annotated with its type");
        const DualContext& pc = ps[0].conclusion.ctx;
        const auto& pg = pc.intuitionistic.bindings();
        Context dual = complement_ctx(ctx.modal);
        ok = pc.modal == ctx.modal && pg.size() == dual.size() + 1 &&
             std::equal(dual.begin(), dual.end(), pg.begin()) && pg.back().type == j.type;
        if (!ok) return fail("premise context of ([]I_GL) is wrong");
        VarName z = pg.back().name.complement();
        Term body = complement_term(subst(m.first(), m.name(), Term::var(z)));
        ok = ps[0].conclusion.type == j.type.first() && alpha_eq(ps[0].conclusion.term, body);
        if (!ok) return fail("([]I_GL) conclusion does not match its premise");
        break;
      }
    }
    for (std::size_t i = 0; i < ps.size(); ++i) {
      path.push_back(i);
      if (!check(ps[i])) return false;
      path.pop_back();
    }
    return true;
  }
};

}  // namespace

DerivationVerdict check_derivation(const TypingDerivation& d, SystemId sys) {
  Checker c{sys, {}, {}};
  DerivationVerdict v;
  v.ok = c.check(d);
  if (!v.ok) {
    v.path = c.path;
    v.reason = c.reason;
  }
  return v;
}

}  // namespace modalc
