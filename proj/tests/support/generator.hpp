// Random generation of well-typed terms, raw ASTs, formulas, Hilbert proofs
// and equation instances for the property tests.
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "modalc/hilbert.hpp"
#include "modalc/syntax.hpp"
#include "modalc/typecheck.hpp"

namespace modalc::testgen {

struct Sample {
  SystemId sys;
  DualContext ctx;
  Term term;
  Type type;
};

class Generator {
 public:
  Generator(SystemId sys, std::uint64_t seed);

  /// A well-typed term of at most `max_size` nodes, checked by infer.
  Sample sample(std::size_t max_size = 60);

  /// A term of type `a` under `ctx`, or nullopt when the attempt dead-ends.
  /// Fresh binder names avoid everything generated so far.
  std::optional<Term> term(const DualContext& ctx, const Type& a, int depth);

  Type type(int depth);
  DualContext context();
  VarName fresh(const std::string& prefix);

  /// Terms the generator produced that infer then rejected; a generator or
  /// checker bug if ever nonzero.
  std::size_t rejected() const { return rejected_; }

  std::mt19937_64& rng() { return rng_; }
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  SystemId system() const { return sys_; }

 private:
  std::optional<Term> intro(const DualContext& ctx, const Type& a, int depth);
  std::optional<Term> elim(const DualContext& ctx, const Type& a, int depth);
  std::optional<Term> variable(const DualContext& ctx, const Type& a);
  std::optional<Term> spine(const DualContext& ctx, const Type& a, int depth);

  SystemId sys_;
  std::mt19937_64 rng_;
  std::size_t counter_ = 0;
  std::size_t rejected_ = 0;
  int leaf_weight_ = 3;      // out of 10: how often term() stops at a variable
  int budget_ = 1 << 30;     // intro/elim nodes left for the current sample
};

/// Arbitrary (mostly ill-typed) ASTs over a small name pool, including
/// complemented names, for the parser round trip.
Term raw_term(std::mt19937_64& rng, int depth);
Type raw_type(std::mt19937_64& rng, int depth);

Formula random_formula(std::mt19937_64& rng, int depth);

struct RandomProof {
  LogicId logic;
  std::vector<Formula> assumptions;
  HilbertProof proof;
  Formula conclusion;
};

/// A checked Hilbert proof built bottom-up from assumptions and axioms.
RandomProof random_proof(std::mt19937_64& rng, LogicId logic, int steps);

/// Subterm at a child-index path, and replacement there.
Term subterm_at(const Term& m, const std::vector<std::size_t>& path);
Term replace_at(const Term& m, const std::vector<std::size_t>& path, const Term& replacement);

/// Types of every subterm position, read off the derivation.
std::vector<std::pair<std::vector<std::size_t>, Type>> typed_positions(const TypingDerivation& d);

/// One equation-rule rewrite (beta, box beta, eta or box eta, in either
/// direction) at a random position of a well-typed term, or nullopt.
std::optional<Term> equation_step(Generator& g, const Sample& s, const Term& m);

/// A pair provably equal under the equational theory: `m` and the result
/// of one to three equation steps.
std::optional<std::pair<Term, Term>> equal_pair(Generator& g, const Sample& s);

/// A pair that differs in an observable position: <P, x> against <P', y>
/// for distinct variables x, y of the same type.
struct UnequalPair {
  DualContext ctx;
  Term left;
  Term right;
  Type type;
};
std::optional<UnequalPair> unequal_pair(Generator& g);

}  // namespace modalc::testgen
