// Finite set-theoretic models: finite sets with products and function
// spaces, a small catalog of strong monoidal endofunctors with optional
// delta and epsilon, brute-force verification of the monoidal and comonad
// laws, and the denotation of typing derivations as function tables.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "modalc/syntax.hpp"
#include "modalc/typecheck.hpp"

namespace modalc {

using Elem = std::uint64_t;

class SemanticsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class UnknownAtom : public SemanticsError {
 public:
  using SemanticsError::SemanticsError;
};
class ModelMismatch : public SemanticsError {
 public:
  using SemanticsError::SemanticsError;
};
/// A set or table would exceed the enumeration limits.
class TooLarge : public SemanticsError {
 public:
  using SemanticsError::SemanticsError;
};

enum class SetKind { Unit, Atom, Prod, Exp };

/// A finite set described by its shape. Elements are indices 0..size-1.
/// A product (a, b) is a * |B| + b. A function f from D to C is the table
/// index sum f(d) * |C|^(|D|-1-d), so tables are ordered lexicographically
/// by the domain enumeration.
class FinSet {
 public:
  FinSet() = default;

  static FinSet unit();
  static FinSet atom(std::string name, Elem size);
  static FinSet prod(FinSet a, FinSet b);
  static FinSet exp(FinSet dom, FinSet cod);

  SetKind kind() const { return node_->kind; }
  Elem size() const { return node_->size; }
  const std::string& name() const { return node_->name; }
  const FinSet& first() const { return node_->children[0]; }
  const FinSet& second() const { return node_->children[1]; }

  /// Product and function-table encodings. Only valid on Prod/Exp sets.
  Elem pair(Elem a, Elem b) const;
  std::pair<Elem, Elem> unpair(Elem e) const;
  Elem apply(Elem table, Elem arg) const;
  Elem tabulate(const std::function<Elem(Elem)>& f) const;

  /// Element as text: atoms as numbers, pairs as (a,b), tables as [..].
  std::string show(Elem e) const;
  std::string describe() const;

  friend bool operator==(const FinSet& a, const FinSet& b);

 private:
  struct Node {
    SetKind kind;
    std::string name;
    Elem size;
    std::vector<FinSet> children;
  };
  explicit FinSet(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// The left-associated product of `parts`; the unit set when empty and the
/// part itself for a single part.
FinSet product_of(const std::vector<FinSet>& parts);
/// Splits an element of product_of(parts) into its components.
std::vector<Elem> split(const std::vector<FinSet>& parts, Elem e);
Elem join(const std::vector<FinSet>& parts, const std::vector<Elem>& xs);

using ElemFn = std::function<Elem(Elem)>;

/// A strong monoidal endofunctor on finite sets, given by its action on
/// objects and elements.
class Endofunctor {
 public:
  virtual ~Endofunctor() = default;
  virtual std::string name() const = 0;
  virtual FinSet apply(const FinSet& x) const = 0;
  /// F(f) at an element of F(x), for f : x -> y.
  virtual Elem map(const FinSet& x, const FinSet& y, const ElemFn& f, Elem e) const = 0;
  /// m0 : 1 -> F1, as an element of F1.
  virtual Elem unit() const = 0;
  /// m : Fa x Fb -> F(a x b).
  virtual Elem tensor(const FinSet& a, const FinSet& b, Elem fa, Elem fb) const = 0;
  virtual bool has_delta() const { return false; }
  virtual bool has_epsilon() const { return false; }
  /// delta_a : Fa -> FFa.
  virtual Elem delta(const FinSet& a, Elem e) const;
  /// epsilon_a : Fa -> a; nullopt where the component has no value.
  virtual std::optional<Elem> epsilon(const FinSet& a, Elem e) const;
  /// Systems this functor is meant to model.
  virtual std::set<SystemId> claims() const = 0;
};

/// Catalog names: identity, unit, diag, diag-fst.
std::shared_ptr<const Endofunctor> make_functor(const std::string& name);
std::vector<std::string> functor_names();

struct FiniteModel {
  std::map<std::string, Elem> atoms;
  std::shared_ptr<const Endofunctor> functor;
};

struct LawResult {
  std::string law;
  bool ok = true;
  std::string witness;  // first counterexample when !ok
};

struct ModelReport {
  bool ok = true;
  std::vector<LawResult> laws;
  /// The first failing law, if any.
  const LawResult* violation() const;
};

/// Checks the laws `sys` needs over every atomic set of size 0..max_size
/// and every function between them. Throws ModelMismatch for GL.
ModelReport verify_model(const Endofunctor& f, SystemId sys, Elem max_size = 3);
ModelReport verify_model(const FiniteModel& model, SystemId sys, Elem max_size = 3);

struct Denotation {
  FinSet dom;
  FinSet cod;
  std::vector<Elem> table;
};

FinSet interp_type(const FiniteModel& model, const Type& t);
FinSet interp_ctx(const FiniteModel& model, const DualContext& ctx);

/// m^(n) on elements x_i of F(a_i): m0 for n = 0, the identity for n = 1
/// and m . (m^(n-1) x id) above.
Elem monoidal_n(const Endofunctor& f, const std::vector<FinSet>& a, const std::vector<Elem>& xs);

/// f : prod a_i -> B gives F f . m^(n) : prod F a_i -> F B.
Denotation box_bullet(const Endofunctor& f, const std::vector<FinSet>& a, const Denotation& g);
/// g : prod F a_i x prod a_i -> B gives F g . m^(2n) . <delta pi_i, pi_i>.
Denotation box_sharp(const Endofunctor& f, const std::vector<FinSet>& a, const Denotation& g);
/// g : prod F a_i -> B gives F g . m^(n) . prod delta_(a_i).
Denotation box_star(const Endofunctor& f, const std::vector<FinSet>& a, const Denotation& g);

/// The denotation of a checked derivation. GL is rejected.
Denotation interp_term(const FiniteModel& model, SystemId sys, const TypingDerivation& d);

struct SoundnessVerdict {
  bool same = false;
  std::optional<Elem> witness;  // first context element where the tables differ
};

SoundnessVerdict check_soundness(const FiniteModel& model, SystemId sys, const DualContext& ctx, const Term& m,
                                 const Term& n, const Type& ty);

/// Atom names occurring in a type, context, or derivation.
std::set<std::string> atoms_of(const Type& t);
std::set<std::string> atoms_of(const TypingDerivation& d);

}  // namespace modalc
