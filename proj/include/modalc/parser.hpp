// Concrete syntax: an ASCII grammar for types, terms, judgments and Hilbert
// proof scripts, and the matching pretty-printers.
//
//   Type     ::= ident | "(" Type ")" | "[]" Type | Type "*" Type | Type "->" Type
//   Term     ::= ident["'"] | "\" ident["'"] ":" Type "." Term | Term Term
//              | "<" Term "," Term ">" | "fst" Term | "snd" Term | "box" Term
//              | "let" "box" ident["'"] "=" Term "in" Term
//              | "fix" ident["'"] ":" Type "." Term | "(" Term ")"
//   Judgment ::= Bindings ";" Bindings "|-" Term [":" Type]
//   Bindings ::= empty | ident["'"] ":" Type ("," ident["'"] ":" Type)*
//
// Precedence: [] over * over ->; -> is right-associative and * is
// left-associative. Application is left-associative; fst, snd and box take
// a single argument-level operand, so "box f x" is "(box f) x". Lambda, let
// and fix extend as far to the right as possible. "#" starts a line comment.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "modalc/hilbert.hpp"
#include "modalc/syntax.hpp"

namespace modalc {

struct SourceLocation {
  std::size_t line = 1;
  std::size_t column = 1;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(SourceLocation loc, std::vector<std::string> expected, std::string found);

  SourceLocation location() const { return loc_; }
  const std::vector<std::string>& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  SourceLocation loc_;
  std::vector<std::string> expected_;
  std::string found_;
};

struct SourceJudgment {
  DualContext ctx;
  Term term;
  std::optional<Type> type;
  SourceLocation location;
};

/// "ctx |- M = N : A", the input of equality queries.
struct SourceEquation {
  DualContext ctx;
  Term left;
  Term right;
  Type type;
  SourceLocation location;
};

Type parse_type(std::string_view text);
Term parse_term(std::string_view text);
SourceJudgment parse_judgment(std::string_view text);
SourceEquation parse_equation(std::string_view text);

/// Splits a file into blank-line separated blocks and parses each as a
/// judgment. Locations refer to the whole file.
std::vector<SourceJudgment> parse_judgments(std::string_view text);

/// Blank-line separated, non-empty blocks with the line each starts on.
std::vector<std::pair<std::size_t, std::string>> split_blocks(std::string_view text);

std::string print_type(const Type& t);
std::string print_term(const Term& m);
std::string print_context(const Context& c);
std::string print_dual_context(const DualContext& c);
std::string print_judgment(const DualContext& ctx, const Term& m, const Type& t);

// ---------------------------------------------------------------------------
// Hilbert formulas and proof scripts.
//
//   Formula ::= ident | "bot" | "(" Formula ")" | "[]" Formula
//             | Formula "*" Formula | Formula "+" Formula | Formula "->" Formula
//
// with precedence [] over * (and) over + (or) over ->.
//
// A proof script is a sequence of blocks
//
//   assume F1, F2, ...      (the list may be empty)
//   prove G
//   Proof
//
//   Proof ::= "(" "assn" nat ")" | "(" "ax" schema Arg* ")"
//           | "(" "mp" Proof Proof ")" | "(" "nec" Proof ")"
//   Arg   ::= ident | "bot" | "[]" Arg | "(" Formula ")"
//
// Schema names: K 4 T GL k s pair fst snd inl inr case efq.

Formula parse_formula(std::string_view text);
std::string print_formula(const Formula& f);

struct HilbertScript {
  std::vector<Formula> assumptions;
  Formula goal;
  HilbertProof proof;
  SourceLocation location;
};

std::vector<HilbertScript> parse_hilbert_scripts(std::string_view text);
std::string print_hilbert_proof(const HilbertProof& p);
std::string print_hilbert_script(const std::vector<Formula>& assumptions, const Formula& goal,
                                 const HilbertProof& p);

}  // namespace modalc
