// Hilbert-style proofs for the constructive modal logics CK, CK4, CT, CS4
// and CGL, and the translation of dual-context typing derivations into them.
#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "modalc/syntax.hpp"
#include "modalc/typecheck.hpp"

namespace modalc {

enum class FormulaKind { Atom, Falsity, And, Or, Implies, Box };

class Formula {
 public:
  Formula() = default;

  static Formula atom(std::string name);
  static Formula falsity();
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);
  static Formula box(Formula a);

  FormulaKind kind() const { return node_->kind; }
  bool is(FormulaKind k) const { return node_ && node_->kind == k; }
  const std::string& name() const { return node_->name; }
  const Formula& first() const { return node_->children[0]; }
  const Formula& second() const { return node_->children[1]; }
  explicit operator bool() const { return node_ != nullptr; }

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node {
    FormulaKind kind;
    std::string name;
    std::vector<Formula> children;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Reads a type of the term calculus as a formula: x as and, -> as implies.
Formula formula_of(const Type& t);

enum class LogicId { CK, CK4, CT, CS4, CGL };

/// The logic whose theorems a system's typable types realize.
LogicId logic_for(SystemId sys);
std::string logic_name(LogicId l);
std::optional<LogicId> parse_logic_name(const std::string& s);

/// Axiom schemata. The first four are the modal schemata; the rest form
/// the intuitionistic base shared by every logic.
enum class Schema {
  K,        // [](A -> B) -> []A -> []B
  Four,     // []A -> [][]A
  T,        // []A -> A
  GL,       // []([]A -> A) -> []A
  KComb,    // A -> B -> A
  SComb,    // (A -> B -> C) -> (A -> B) -> A -> C
  Pair,     // A -> B -> A & B
  Fst,      // A & B -> A
  Snd,      // A & B -> B
  Inl,      // A -> A | B
  Inr,      // B -> A | B
  Case,     // (A -> C) -> (B -> C) -> A | B -> C
  ExFalso,  // bot -> A
};

std::string schema_name(Schema s);
std::optional<Schema> parse_schema_name(const std::string& s);
/// Number of formula metavariables the schema takes.
std::size_t schema_arity(Schema s);
/// The schema instance for the given metavariable assignment. Throws
/// std::invalid_argument on arity mismatch.
Formula instantiate(Schema s, const std::vector<Formula>& args);
bool logic_has(LogicId logic, Schema s);
/// The schemata of a logic in matching order: modal ones first.
std::vector<Schema> logic_schemata(LogicId logic);

struct AxiomMatch {
  Schema schema;
  std::vector<Formula> args;
};

std::optional<AxiomMatch> is_axiom_instance(LogicId logic, const Formula& f);

enum class ProofKind { Assn, Ax, MP, Nec };

/// A Hilbert proof tree. Nodes are immutable and may be shared.
class HilbertProof {
 public:
  HilbertProof() = default;

  static HilbertProof assn(std::size_t index);
  static HilbertProof ax(Schema s, std::vector<Formula> args);
  static HilbertProof mp(HilbertProof major, HilbertProof minor);
  static HilbertProof nec(HilbertProof sub);

  ProofKind kind() const { return node_->kind; }
  std::size_t index() const { return node_->index; }
  Schema schema() const { return node_->schema; }
  const std::vector<Formula>& args() const { return node_->args; }
  const HilbertProof& major() const { return node_->subs[0]; }
  const HilbertProof& minor() const { return node_->subs[1]; }
  const HilbertProof& sub() const { return node_->subs[0]; }
  const void* id() const { return node_.get(); }
  explicit operator bool() const { return node_ != nullptr; }

  /// Number of nodes, counting shared subtrees once per occurrence.
  std::size_t size() const;

 private:
  struct Node {
    ProofKind kind;
    std::size_t index = 0;
    Schema schema = Schema::K;
    std::vector<Formula> args;
    std::vector<HilbertProof> subs;
  };
  explicit HilbertProof(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct HilbertVerdict {
  bool ok = false;
  Formula conclusion;             // set when ok
  std::vector<std::size_t> path;  // child indices to the first bad node
  std::string reason;
};

/// Checks `proof` as a derivation of assumptions |- goal. An unset goal
/// accepts any conclusion.
HilbertVerdict check_hilbert(LogicId logic, const std::vector<Formula>& assumptions, const Formula& goal,
                             const HilbertProof& proof);

class HilbertError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The formula `proof` derives, or HilbertError if it does not check.
Formula conclusion_of(LogicId logic, const std::vector<Formula>& assumptions, const HilbertProof& proof);

/// From a proof of assumptions, A |- B (A the last assumption), builds a
/// proof of assumptions |- A -> B. Throws HilbertError if the input does
/// not check or there is no assumption to discharge.
HilbertProof deduction_theorem(LogicId logic, const std::vector<Formula>& assumptions, const HilbertProof& proof);

/// The same construction without checking the input up front. For callers
/// that build proofs they trust and check the final result once; a bad
/// input still throws when the construction trips over it, but not always.
HilbertProof discharge_last(LogicId logic, const std::vector<Formula>& assumptions, const HilbertProof& proof);

/// Renumbers assumption references: Assn i becomes Assn remap[i].
HilbertProof reindex(const HilbertProof& proof, const std::vector<std::size_t>& remap);

/// A closed CGL proof of []A -> [][]A.
HilbertProof gl_four(const Formula& a);

struct Translation {
  LogicId logic;
  std::vector<Formula> assumptions;  // []Delta then Gamma, in order
  Formula goal;
  HilbertProof proof;
};

class UnsupportedConstruct : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Turns a checked derivation of <Delta; Gamma> |- M : A into a Hilbert
/// proof of []Delta, Gamma |- A in the matching logic.
Translation translate(SystemId sys, const TypingDerivation& d);

}  // namespace modalc
