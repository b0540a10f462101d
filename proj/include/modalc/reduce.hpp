// Reduction on raw terms: the beta rules and their congruences, the
// commuting conversions, normalization under fuel, and the subformula check.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "modalc/syntax.hpp"
#include "modalc/typecheck.hpp"

namespace modalc {

enum class Relation {
  Plain,     // beta, product beta, box beta (and the fix rule)
  Commuting  // Plain plus the three letbox commuting conversions
};

enum class Strategy {
  LeftmostOutermost,
  RightmostInnermost
};

struct Step {
  std::vector<std::size_t> position;  // child indices from the root to the redex
  std::string rule;
  Term result;                        // the whole term after the step
};

/// One step of the relation under the strategy, or nullopt if normal.
std::optional<Step> step_with(const Term& m, Relation rel, Strategy strategy);

/// Leftmost-outermost plain step.
std::optional<Term> step(const Term& m);
/// Leftmost-outermost step including commuting conversions.
std::optional<Term> step_cc(const Term& m);

using ReductionTrace = std::vector<Step>;

struct Normalized {
  Term normal;
  ReductionTrace trace;
};

class FuelExhausted : public std::runtime_error {
 public:
  explicit FuelExhausted(std::size_t fuel)
      : std::runtime_error("no normal form within " + std::to_string(fuel) + " steps"), fuel_(fuel) {}
  FuelExhausted(std::size_t fuel, const std::string& why) : std::runtime_error(why), fuel_(fuel) {}
  std::size_t fuel() const { return fuel_; }

 private:
  std::size_t fuel_;
};

inline constexpr std::size_t kDefaultFuel = 10000;
/// Reduction also stops (with FuelExhausted) once the term outgrows these,
/// long before the recursive term functions would exhaust the stack.
inline constexpr std::size_t kMaxTermDepth = 2000;
inline constexpr std::size_t kMaxTermNodes = 200000;

/// Reduces to normal form, taking at most `fuel` steps. The trace is only
/// recorded when `record_trace` is set.
Normalized normalize(const Term& m, Relation rel, std::size_t fuel = kDefaultFuel,
                     Strategy strategy = Strategy::LeftmostOutermost, bool record_trace = true);

struct SubformulaVerdict {
  bool ok = true;
  std::vector<std::size_t> path;  // to the first node mentioning an offending type
  std::optional<Type> offending;
};

/// Whether every type in the derivation is a subexpression of the
/// conclusion type or of a type bound in the conclusion's contexts.
SubformulaVerdict subformula_check(const TypingDerivation& d);

}  // namespace modalc
