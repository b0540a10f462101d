// Core syntax of the dual-context calculi: variables, types, terms and
// contexts, together with the syntactic operations every other module
// builds on (alpha-equivalence, substitution, complementation, free
// variables).
#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace modalc {

/// A term variable. The involution (-)^bot flips `complemented`; the
/// surface syntax writes a complemented variable with a trailing prime.
struct VarName {
  std::string base;
  bool complemented = false;

  VarName() = default;
  explicit VarName(std::string b, bool c = false) : base(std::move(b)), complemented(c) {}

  VarName complement() const { return VarName(base, !complemented); }
  std::string str() const { return complemented ? base + "'" : base; }

  friend bool operator==(const VarName&, const VarName&) = default;
  friend auto operator<=>(const VarName&, const VarName&) = default;
};

using VarSet = std::set<VarName>;

VarName complement_var(const VarName& v);
VarSet complement_set(const VarSet& vs);

// ---------------------------------------------------------------------------
// Types

enum class TypeKind { Atom, Prod, Arrow, Box };

class Type {
 public:
  Type() = default;

  static Type atom(std::string name);
  static Type prod(Type left, Type right);
  static Type arrow(Type domain, Type codomain);
  static Type box(Type body);

  TypeKind kind() const { return node_->kind; }
  bool is(TypeKind k) const { return node_ && node_->kind == k; }
  const std::string& name() const { return node_->name; }
  /// Left/domain/body.
  const Type& first() const { return node_->children[0]; }
  /// Right/codomain.
  const Type& second() const { return node_->children[1]; }
  std::size_t size() const;
  explicit operator bool() const { return node_ != nullptr; }

  friend bool operator==(const Type& a, const Type& b);
  friend bool operator<(const Type& a, const Type& b);

 private:
  struct Node {
    TypeKind kind;
    std::string name;
    std::vector<Type> children;
  };
  explicit Type(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// All subexpressions of `t`, including `t` itself.
std::set<Type> subexpressions(const Type& t);

// ---------------------------------------------------------------------------
// Terms

enum class TermKind { Var, Lam, App, Pair, Proj, Box, LetBox, FixBox };

class Term {
 public:
  Term() = default;

  static Term var(VarName v);
  static Term lam(VarName binder, Type annot, Term body);
  static Term app(Term fun, Term arg);
  static Term pair(Term fst, Term snd);
  static Term proj(int index, Term of);
  static Term box(Term body);
  static Term letbox(VarName binder, Term bound, Term body);
  static Term fixbox(VarName binder, Type annot, Term body);

  TermKind kind() const { return node_->kind; }
  bool is(TermKind k) const { return node_ && node_->kind == k; }
  explicit operator bool() const { return node_ != nullptr; }

  /// Variable name (Var) or binder (Lam, LetBox, FixBox).
  const VarName& name() const { return node_->name; }
  /// Annotation of Lam and FixBox.
  const Type& annot() const { return node_->annot; }
  /// Projection index, 1 or 2.
  int index() const { return node_->index; }

  // Lam: body. App: fun. Pair: fst. Proj/Box/FixBox: body. LetBox: bound.
  const Term& first() const { return node_->children[0]; }
  // App: arg. Pair: snd. LetBox: body.
  const Term& second() const { return node_->children[1]; }
  const std::vector<Term>& children() const { return node_->children; }

  std::size_t size() const;
  /// Pointer identity; used to skip rebuilding unchanged subterms.
  bool same_node(const Term& other) const { return node_ == other.node_; }

 private:
  struct Node {
    TermKind kind;
    VarName name;
    Type annot;
    int index = 0;
    std::vector<Term> children;
  };
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Rebuilds `t` with new children, keeping its kind, name, annotation and index.
Term with_children(const Term& t, std::vector<Term> children);
/// Rebuilds a binder node with a new binder name.
Term with_binder(const Term& t, VarName binder, std::vector<Term> children);

bool alpha_eq(const Term& a, const Term& b);

VarSet fv(const Term& m);
/// Free variables not under any box/fixbox.
VarSet ufv(const Term& m);
/// Free variables occurring under a box/fixbox.
VarSet bfv(const Term& m);
/// Every variable name occurring in `m`, bound or free.
VarSet all_vars(const Term& m);

/// A variable with the same polarity as `hint` whose base is not used, with
/// either polarity, by anything in `avoid`.
VarName fresh_var(const VarName& hint, const VarSet& avoid);

/// Capture-avoiding substitution target[replacement/var].
Term subst(const Term& target, const VarName& var, const Term& replacement);
/// Simultaneous capture-avoiding substitution.
Term subst_many(const Term& target, const std::map<VarName, Term>& sigma);

/// The involution (-)^bot on terms. Identity under box/fixbox; letbox
/// binders and the occurrences they bind are left alone.
Term complement_term(const Term& m);

// ---------------------------------------------------------------------------
// Contexts

struct Binding {
  VarName name;
  Type type;
  friend bool operator==(const Binding&, const Binding&) = default;
};

class Context {
 public:
  Context() = default;
  Context(std::initializer_list<Binding> bs);
  explicit Context(std::vector<Binding> bs);

  /// Appends a binding. Throws std::invalid_argument if the name is taken.
  void push(VarName v, Type t);
  Context extended(VarName v, Type t) const;

  std::optional<Type> lookup(const VarName& v) const;
  bool contains(const VarName& v) const;
  std::optional<std::size_t> index_of(const VarName& v) const;
  VarSet vars() const;

  std::size_t size() const { return bindings_.size(); }
  bool empty() const { return bindings_.empty(); }
  const std::vector<Binding>& bindings() const { return bindings_; }
  const Binding& operator[](std::size_t i) const { return bindings_[i]; }
  auto begin() const { return bindings_.begin(); }
  auto end() const { return bindings_.end(); }

  friend bool operator==(const Context&, const Context&) = default;

 private:
  std::vector<Binding> bindings_;
};

Context complement_ctx(const Context& c);

struct DualContext {
  Context modal;          // Delta
  Context intuitionistic; // Gamma

  VarSet vars() const;
  bool contains(const VarName& v) const { return modal.contains(v) || intuitionistic.contains(v); }
  friend bool operator==(const DualContext&, const DualContext&) = default;
};

}  // namespace modalc
