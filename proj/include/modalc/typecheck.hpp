// Syntax-directed type synthesis and derivation checking for DK, DK4, DGL,
// DT and DS4.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "modalc/syntax.hpp"

namespace modalc {

enum class SystemId { K, K4, GL, T, S4 };

std::string system_name(SystemId s);
std::optional<SystemId> parse_system_name(const std::string& s);
inline constexpr SystemId kAllSystems[] = {SystemId::K, SystemId::K4, SystemId::GL, SystemId::T, SystemId::S4};

/// Systems with the (box var) rule.
inline bool has_box_var(SystemId s) { return s == SystemId::T || s == SystemId::S4; }
/// Systems whose box introduction complements the body.
inline bool uses_complement(SystemId s) { return s == SystemId::K4 || s == SystemId::GL; }

enum class Rule {
  Var,
  BoxVar,
  ProdIntro,
  ProdElim1,
  ProdElim2,
  ArrowIntro,
  ArrowElim,
  BoxElim,
  BoxIntroK,
  BoxIntroK4,
  BoxIntroGL,
  BoxIntroS4,
};

std::string rule_name(Rule r);

struct Judgment {
  DualContext ctx;
  Term term;
  Type type;
};

struct TypingDerivation {
  Rule rule;
  Judgment conclusion;
  std::vector<TypingDerivation> premises;

  std::size_t node_count() const;
};

enum class TypeErrorKind { UnboundVariable, ZoneViolation, TypeMismatch, IllFormedContext, WrongConstructForSystem };

std::string type_error_kind_name(TypeErrorKind k);

class TypeError : public std::runtime_error {
 public:
  TypeError(TypeErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  TypeErrorKind kind() const { return kind_; }

 private:
  TypeErrorKind kind_;
};

/// Disjointness of the two zones; for K4 and GL also that no zone holds a
/// variable together with its complement.
bool well_defined(const DualContext& ctx, SystemId sys);

/// Builds the derivation of ctx |- m. Throws TypeError.
TypingDerivation infer(SystemId sys, const DualContext& ctx, const Term& m);

/// Convenience: the synthesized type, or nullopt on any TypeError.
std::optional<Type> type_of(SystemId sys, const DualContext& ctx, const Term& m);

struct DerivationVerdict {
  bool ok = true;
  std::vector<std::size_t> path;  // premise indices from the root to the first bad node
  std::string reason;
};

DerivationVerdict check_derivation(const TypingDerivation& d, SystemId sys);

}  // namespace modalc
