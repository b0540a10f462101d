#include "modalc/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace modalc {

VarName complement_var(const VarName& v) { return v.complement(); }

VarSet complement_set(const VarSet& vs) {
  VarSet out;
  for (const auto& v : vs) out.insert(v.complement());
  return out;
}

// ---------------------------------------------------------------------------
// Types

Type Type::atom(std::string name) {
  return Type(std::make_shared<const Node>(Node{TypeKind::Atom, std::move(name), {}}));
}
Type Type::prod(Type left, Type right) {
  return Type(std::make_shared<const Node>(Node{TypeKind::Prod, {}, {std::move(left), std::move(right)}}));
}
Type Type::arrow(Type domain, Type codomain) {
  return Type(
      std::make_shared<const Node>(Node{TypeKind::Arrow, {}, {std::move(domain), std::move(codomain)}}));
}
Type Type::box(Type body) {
  return Type(std::make_shared<const Node>(Node{TypeKind::Box, {}, {std::move(body)}}));
}

std::size_t Type::size() const {
  std::size_t n = 1;
  for (const auto& c : node_->children) n += c.size();
  return n;
}

bool operator==(const Type& a, const Type& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TypeKind::Atom: return a.name() == b.name();
    case TypeKind::Box: return a.first() == b.first();
    default: return a.first() == b.first() && a.second() == b.second();
  }
}

bool operator<(const Type& a, const Type& b) {
  if (a.node_ == b.node_) return false;
  if (!a.node_ || !b.node_) return !a.node_;
  if (a.kind() != b.kind()) return a.kind() < b.kind();
  switch (a.kind()) {
    case TypeKind::Atom: return a.name() < b.name();
    case TypeKind::Box: return a.first() < b.first();
    default:
      if (!(a.first() == b.first())) return a.first() < b.first();
      return a.second() < b.second();
  }
}

std::set<Type> subexpressions(const Type& t) {
  std::set<Type> out;
  std::vector<Type> todo{t};
  while (!todo.empty()) {
    Type cur = todo.back();
    todo.pop_back();
    if (!out.insert(cur).second) continue;
    switch (cur.kind()) {
      case TypeKind::Atom: break;
      case TypeKind::Box: todo.push_back(cur.first()); break;
      default:
        todo.push_back(cur.first());
        todo.push_back(cur.second());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Terms

Term Term::var(VarName v) {
  return Term(std::make_shared<const Node>(Node{TermKind::Var, std::move(v), {}, 0, {}}));
}
Term Term::lam(VarName binder, Type annot, Term body) {
  return Term(std::make_shared<const Node>(
      Node{TermKind::Lam, std::move(binder), std::move(annot), 0, {std::move(body)}}));
}
Term Term::app(Term fun, Term arg) {
  return Term(std::make_shared<const Node>(Node{TermKind::App, {}, {}, 0, {std::move(fun), std::move(arg)}}));
}
Term Term::pair(Term fst, Term snd) {
  return Term(std::make_shared<const Node>(Node{TermKind::Pair, {}, {}, 0, {std::move(fst), std::move(snd)}}));
}
Term Term::proj(int index, Term of) {
  if (index != 1 && index != 2) throw std::invalid_argument("projection index must be 1 or 2");
  return Term(std::make_shared<const Node>(Node{TermKind::Proj, {}, {}, index, {std::move(of)}}));
}
Term Term::box(Term body) {
  return Term(std::make_shared<const Node>(Node{TermKind::Box, {}, {}, 0, {std::move(body)}}));
}
Term Term::letbox(VarName binder, Term bound, Term body) {
  return Term(std::make_shared<const Node>(
      Node{TermKind::LetBox, std::move(binder), {}, 0, {std::move(bound), std::move(body)}}));
}
Term Term::fixbox(VarName binder, Type annot, Term body) {
  return Term(std::make_shared<const Node>(
      Node{TermKind::FixBox, std::move(binder), std::move(annot), 0, {std::move(body)}}));
}

std::size_t Term::size() const {
  std::size_t n = 1;
  for (const auto& c : node_->children) n += c.size();
  return n;
}

Term with_children(const Term& t, std::vector<Term> children) {
  return with_binder(t, t.name(), std::move(children));
}

Term with_binder(const Term& t, VarName binder, std::vector<Term> children) {
  bool unchanged = binder == t.name();
  for (std::size_t i = 0; unchanged && i < children.size(); ++i)
    unchanged = children[i].same_node(t.children()[i]);
  if (unchanged) return t;
  switch (t.kind()) {
    case TermKind::Var: return Term::var(std::move(binder));
    case TermKind::Lam: return Term::lam(std::move(binder), t.annot(), std::move(children[0]));
    case TermKind::App: return Term::app(std::move(children[0]), std::move(children[1]));
    case TermKind::Pair: return Term::pair(std::move(children[0]), std::move(children[1]));
    case TermKind::Proj: return Term::proj(t.index(), std::move(children[0]));
    case TermKind::Box: return Term::box(std::move(children[0]));
    case TermKind::LetBox: return Term::letbox(std::move(binder), std::move(children[0]), std::move(children[1]));
    case TermKind::FixBox: return Term::fixbox(std::move(binder), t.annot(), std::move(children[0]));
  }
  return t;
}

namespace {

using AlphaEnv = std::vector<std::pair<VarName, VarName>>;

// Position of the innermost binder of `v` on one side of the environment,
// or -1 when free.
long bound_at(const AlphaEnv& env, const VarName& v, bool left) {
  for (long i = static_cast<long>(env.size()) - 1; i >= 0; --i) {
    const auto& p = env[static_cast<std::size_t>(i)];
    if ((left ? p.first : p.second) == v) return i;
  }
  return -1;
}

bool alpha_rec(const Term& a, const Term& b, AlphaEnv& env) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TermKind::Var: {
      long i = bound_at(env, a.name(), true);
      long j = bound_at(env, b.name(), false);
      if (i != j) return false;
      return i >= 0 || a.name() == b.name();
    }
    case TermKind::Lam:
    case TermKind::FixBox: {
      if (!(a.annot() == b.annot())) return false;
      env.emplace_back(a.name(), b.name());
      bool ok = alpha_rec(a.first(), b.first(), env);
      env.pop_back();
      return ok;
    }
    case TermKind::LetBox: {
      if (!alpha_rec(a.first(), b.first(), env)) return false;
      env.emplace_back(a.name(), b.name());
      bool ok = alpha_rec(a.second(), b.second(), env);
      env.pop_back();
      return ok;
    }
    case TermKind::Proj:
      return a.index() == b.index() && alpha_rec(a.first(), b.first(), env);
    case TermKind::Box:
      return alpha_rec(a.first(), b.first(), env);
    case TermKind::App:
    case TermKind::Pair:
      return alpha_rec(a.first(), b.first(), env) && alpha_rec(a.second(), b.second(), env);
  }
  return false;
}

enum class FvMode { All, Unboxed, Boxed };

void fv_rec(const Term& m, FvMode mode, bool under_box, std::vector<VarName>& bound, VarSet& out) {
  switch (m.kind()) {
    case TermKind::Var: {
      if (std::find(bound.begin(), bound.end(), m.name()) != bound.end()) return;
      if (mode == FvMode::All || (mode == FvMode::Unboxed) == !under_box) out.insert(m.name());
      return;
    }
    case TermKind::Lam:
      bound.push_back(m.name());
      fv_rec(m.first(), mode, under_box, bound, out);
      bound.pop_back();
      return;
    case TermKind::FixBox:
      if (mode == FvMode::Unboxed) return;
      bound.push_back(m.name());
      fv_rec(m.first(), mode, true, bound, out);
      bound.pop_back();
      return;
    case TermKind::Box:
      if (mode == FvMode::Unboxed) return;
      fv_rec(m.first(), mode, true, bound, out);
      return;
    case TermKind::LetBox:
      fv_rec(m.first(), mode, under_box, bound, out);
      bound.push_back(m.name());
      fv_rec(m.second(), mode, under_box, bound, out);
      bound.pop_back();
      return;
    default:
      for (const auto& c : m.children()) fv_rec(c, mode, under_box, bound, out);
  }
}

VarSet collect_fv(const Term& m, FvMode mode) {
  VarSet out;
  std::vector<VarName> bound;
  fv_rec(m, mode, false, bound, out);
  return out;
}

void all_vars_rec(const Term& m, VarSet& out) {
  if (m.is(TermKind::Var) || m.is(TermKind::Lam) || m.is(TermKind::LetBox) || m.is(TermKind::FixBox))
    out.insert(m.name());
  for (const auto& c : m.children()) all_vars_rec(c, out);
}

bool is_binder(TermKind k) { return k == TermKind::Lam || k == TermKind::LetBox || k == TermKind::FixBox; }

// Index of the child a binder scopes over.
std::size_t scope_child(const Term& t) { return t.is(TermKind::LetBox) ? 1 : 0; }

Term subst_rec(const Term& t, const std::map<VarName, Term>& sigma) {
  if (sigma.empty()) return t;
  if (t.is(TermKind::Var)) {
    auto it = sigma.find(t.name());
    return it == sigma.end() ? t : it->second;
  }
  if (!is_binder(t.kind())) {
    std::vector<Term> kids;
    kids.reserve(t.children().size());
    for (const auto& c : t.children()) kids.push_back(subst_rec(c, sigma));
    return with_children(t, std::move(kids));
  }

  std::size_t scoped = scope_child(t);
  std::vector<Term> kids = t.children();
  for (std::size_t i = 0; i < kids.size(); ++i)
    if (i != scoped) kids[i] = subst_rec(kids[i], sigma);

  const Term& body = t.children()[scoped];
  VarSet body_fv = fv(body);
  std::map<VarName, Term> inner;
  VarSet incoming;
  for (const auto& [k, v] : sigma) {
    if (k == t.name() || !body_fv.count(k)) continue;
    inner.emplace(k, v);
    VarSet f = fv(v);
    incoming.insert(f.begin(), f.end());
  }
  VarName binder = t.name();
  if (incoming.count(binder)) {
    VarSet avoid = incoming;
    avoid.insert(body_fv.begin(), body_fv.end());
    VarSet av = all_vars(body);
    avoid.insert(av.begin(), av.end());
    for (const auto& [k, v] : inner) avoid.insert(k);
    VarName renamed = fresh_var(binder, avoid);
    inner[binder] = Term::var(renamed);
    binder = renamed;
  }
  kids[scoped] = subst_rec(body, inner);
  return with_binder(t, std::move(binder), std::move(kids));
}

Term complement_rec(const Term& t, const VarSet& keep) {
  switch (t.kind()) {
    case TermKind::Var:
      return keep.count(t.name()) ? t : Term::var(t.name().complement());
    case TermKind::Box:
    case TermKind::FixBox:
      return t;
    case TermKind::Lam: {
      VarName x = t.name();
      Term body = t.first();
      VarSet inner = keep;
      inner.erase(x);
      if (inner.count(x.complement())) {
        // The complemented binder would capture a letbox-bound occurrence.
        VarSet avoid = all_vars(body);
        avoid.insert(inner.begin(), inner.end());
        avoid.insert(x);
        VarName renamed = fresh_var(x, avoid);
        body = subst(body, x, Term::var(renamed));
        x = renamed;
      }
      return Term::lam(x.complement(), t.annot(), complement_rec(body, inner));
    }
    case TermKind::LetBox: {
      VarName u = t.name();
      Term body = t.second();
      if (fv(body).count(u.complement())) {
        // u' free in the body turns into u and would be captured.
        VarSet avoid = all_vars(body);
        avoid.insert(keep.begin(), keep.end());
        avoid.insert(u);
        VarName renamed = fresh_var(u, avoid);
        body = subst(body, u, Term::var(renamed));
        u = renamed;
      }
      VarSet inner = keep;
      inner.insert(u);
      return Term::letbox(u, complement_rec(t.first(), keep), complement_rec(body, inner));
    }
    default: {
      std::vector<Term> kids;
      for (const auto& c : t.children()) kids.push_back(complement_rec(c, keep));
      return with_children(t, std::move(kids));
    }
  }
}

std::string strip_digits(const std::string& s) {
  std::size_t end = s.size();
  while (end > 1 && std::isdigit(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(0, end);
}

}  // namespace

bool alpha_eq(const Term& a, const Term& b) {
  AlphaEnv env;
  return alpha_rec(a, b, env);
}

VarSet fv(const Term& m) { return collect_fv(m, FvMode::All); }
VarSet ufv(const Term& m) { return collect_fv(m, FvMode::Unboxed); }
VarSet bfv(const Term& m) { return collect_fv(m, FvMode::Boxed); }

VarSet all_vars(const Term& m) {
  VarSet out;
  all_vars_rec(m, out);
  return out;
}

VarName fresh_var(const VarName& hint, const VarSet& avoid) {
  std::set<std::string> bases;
  for (const auto& v : avoid) bases.insert(v.base);
  std::string stem = strip_digits(hint.base);
  if (!bases.count(stem)) return VarName(stem, hint.complemented);
  for (unsigned k = 1;; ++k) {
    std::string cand = stem + std::to_string(k);
    if (!bases.count(cand)) return VarName(cand, hint.complemented);
  }
}

Term subst(const Term& target, const VarName& var, const Term& replacement) {
  return subst_rec(target, {{var, replacement}});
}

Term subst_many(const Term& target, const std::map<VarName, Term>& sigma) { return subst_rec(target, sigma); }

Term complement_term(const Term& m) { return complement_rec(m, {}); }

// ---------------------------------------------------------------------------
// Contexts

Context::Context(std::initializer_list<Binding> bs) {
  for (const auto& b : bs) push(b.name, b.type);
}

Context::Context(std::vector<Binding> bs) {
  for (auto& b : bs) push(std::move(b.name), std::move(b.type));
}

void Context::push(VarName v, Type t) {
  if (contains(v)) throw std::invalid_argument("variable " + v.str() + " bound twice in one context");
  bindings_.push_back({std::move(v), std::move(t)});
}

Context Context::extended(VarName v, Type t) const {
  Context c = *this;
  c.push(std::move(v), std::move(t));
  return c;
}

std::optional<Type> Context::lookup(const VarName& v) const {
  for (const auto& b : bindings_)
    if (b.name == v) return b.type;
  return std::nullopt;
}

bool Context::contains(const VarName& v) const { return index_of(v).has_value(); }

std::optional<std::size_t> Context::index_of(const VarName& v) const {
  for (std::size_t i = 0; i < bindings_.size(); ++i)
    if (bindings_[i].name == v) return i;
  return std::nullopt;
}

VarSet Context::vars() const {
  VarSet out;
  for (const auto& b : bindings_) out.insert(b.name);
  return out;
}

Context complement_ctx(const Context& c) {
  Context out;
  for (const auto& b : c) out.push(b.name.complement(), b.type);
  return out;
}

VarSet DualContext::vars() const {
  VarSet out = modal.vars();
  VarSet g = intuitionistic.vars();
  out.insert(g.begin(), g.end());
  return out;
}

}  // namespace modalc
