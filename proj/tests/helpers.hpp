// Shorthands shared by the unit tests.
#pragma once

#include <string>

#include "modalc/parser.hpp"
#include "modalc/syntax.hpp"
#include "modalc/typecheck.hpp"

namespace th {

inline modalc::Term tm(const std::string& s) { return modalc::parse_term(s); }
inline modalc::Type ty(const std::string& s) { return modalc::parse_type(s); }
inline modalc::VarName v(const std::string& s) {
  return s.back() == '\'' ? modalc::VarName(s.substr(0, s.size() - 1), true) : modalc::VarName(s, false);
}
inline modalc::DualContext ctx(const std::string& s) { return modalc::parse_judgment(s + " |- x").ctx; }

}  // namespace th
