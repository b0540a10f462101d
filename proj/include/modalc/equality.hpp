// Equality of well-typed terms for K, K4, T and S4 by rewriting to a
// candidate canonical form: beta, box beta and commuting conversions to
// normal form, then eta-contraction, then comparison up to alpha.
//
// The procedure is sound; `equal == false` means "not proved equal".
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "modalc/syntax.hpp"
#include "modalc/typecheck.hpp"

namespace modalc {

struct EqVerdict {
  bool equal = false;
  Term left_normal;
  Term right_normal;
  std::vector<std::string> trace;  // rule names applied, left side first
};

class IllTyped : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedSystem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Innermost-first, leftmost eta-contraction to a fixpoint:
/// \x:A. M x  =>  M   (x not free in M)
/// let box u = M in box u  =>  M
Term eta_contract(const Term& m, std::vector<std::string>* trace = nullptr);

/// The canonical form used by eq_terms: alternate beta/cc normalization and
/// eta-contraction, then eta-expand each letbox of arrow type
///   let box u = M in N  =>  \e:A. let box u = M in N e
/// and start over, until nothing changes. `m` must be well typed under ctx.
Term canonical_form(SystemId sys, const DualContext& ctx, const Term& m, std::vector<std::string>* trace = nullptr);

EqVerdict eq_terms(SystemId sys, const DualContext& ctx, const Term& m, const Term& n, const Type& ty);

}  // namespace modalc
