#include "modalc/parser.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace modalc {

namespace {

std::string describe_expected(const std::vector<std::string>& expected) {
  std::string out;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i) out += i + 1 == expected.size() ? " or " : ", ";
    out += expected[i];
  }
  return out;
}

std::string format_parse_error(SourceLocation loc, const std::vector<std::string>& expected,
                               const std::string& found) {
  std::ostringstream os;
  os << "line " << loc.line << ", column " << loc.column << ": ";
  if (expected.empty())
    os << found;
  else
    os << "expected " << describe_expected(expected) << " but found " << found;
  return os.str();
}

}  // namespace

ParseError::ParseError(SourceLocation loc, std::vector<std::string> expected, std::string found)
    : std::runtime_error(format_parse_error(loc, expected, found)),
      loc_(loc),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

namespace {

enum class Tok { Ident, Number, Symbol, End };

struct Token {
  Tok kind;
  std::string text;
  SourceLocation loc;
};

const std::set<std::string> kTermKeywords = {"fst", "snd", "box", "let", "in", "fix"};

std::vector<Token> lex(std::string_view src, SourceLocation start = {}) {
  std::vector<Token> out;
  std::size_t line = start.line, col = start.column;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    SourceLocation loc{line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      if (j < src.size() && src[j] == '\'') ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), loc});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Number, std::string(src.substr(i, j - i)), loc});
      advance(j - i);
      continue;
    }
    static const char* kTwo[] = {"[]", "->", "|-"};
    bool matched = false;
    for (const char* s : kTwo) {
      if (src.substr(i, 2) == s) {
        out.push_back({Tok::Symbol, s, loc});
        advance(2);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    static const std::string kOne = "*+()\\:.<,>;='";
    if (kOne.find(c) != std::string::npos) {
      out.push_back({Tok::Symbol, std::string(1, c), loc});
      advance(1);
      continue;
    }
    throw ParseError(loc, {}, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::End, "", {line, col}});
  return out;
}

VarName var_of(const std::string& text) {
  if (!text.empty() && text.back() == '\'') return VarName(text.substr(0, text.size() - 1), true);
  return VarName(text, false);
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  bool at_symbol(std::string_view s) const { return peek().kind == Tok::Symbol && peek().text == s; }
  bool at_word(std::string_view s) const { return peek().kind == Tok::Ident && peek().text == s; }
  bool at_end() const { return peek().kind == Tok::End; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(t.loc, std::move(expected), found);
  }
  [[noreturn]] void fail_message(const std::string& msg, SourceLocation loc) const { throw ParseError(loc, {}, msg); }

  void expect_symbol(std::string_view s) {
    if (!at_symbol(s)) fail({"'" + std::string(s) + "'"});
    ++pos_;
  }
  void expect_word(std::string_view s) {
    if (!at_word(s)) fail({"'" + std::string(s) + "'"});
    ++pos_;
  }
  void expect_end() {
    if (!at_end()) fail({"end of input"});
  }

  bool is_term_ident(const Token& t) const { return t.kind == Tok::Ident && !kTermKeywords.count(t.text); }

  VarName identifier() {
    if (!is_term_ident(peek())) fail({"identifier"});
    return var_of(toks_[pos_++].text);
  }

  // Plain identifier without a prime, used for atom names.
  std::string atom_name() {
    const Token& t = peek();
    if (t.kind != Tok::Ident || t.text.back() == '\'' || kTermKeywords.count(t.text)) fail({"type name"});
    ++pos_;
    return t.text;
  }

  // -- types --
  Type type() {
    Type left = prod_type();
    if (at_symbol("->")) {
      ++pos_;
      return Type::arrow(left, type());
    }
    return left;
  }
  Type prod_type() {
    Type t = unary_type();
    while (at_symbol("*")) {
      ++pos_;
      t = Type::prod(t, unary_type());
    }
    return t;
  }
  Type unary_type() {
    if (at_symbol("[]")) {
      ++pos_;
      return Type::box(unary_type());
    }
    if (at_symbol("(")) {
      ++pos_;
      Type t = type();
      expect_symbol(")");
      return t;
    }
    if (peek().kind == Tok::Ident && peek().text.back() != '\'' && !kTermKeywords.count(peek().text))
      return Type::atom(toks_[pos_++].text);
    fail({"type name", "'[]'", "'('"});
  }

  // -- terms --
  Term term() {
    if (at_symbol("\\")) {
      ++pos_;
      VarName x = identifier();
      expect_symbol(":");
      Type a = type();
      expect_symbol(".");
      return Term::lam(x, a, term());
    }
    if (at_word("let")) {
      ++pos_;
      expect_word("box");
      VarName u = identifier();
      expect_symbol("=");
      Term bound = term();
      expect_word("in");
      return Term::letbox(u, bound, term());
    }
    if (at_word("fix")) {
      SourceLocation loc = peek().loc;
      ++pos_;
      VarName z = identifier();
      expect_symbol(":");
      Type a = type();
      if (!a.is(TypeKind::Box)) fail_message("fix annotation must be a boxed type, got " + print_type(a), loc);
      expect_symbol(".");
      return Term::fixbox(z, a, term());
    }
    return application();
  }

  bool starts_unary() const {
    const Token& t = peek();
    if (is_term_ident(t)) return true;
    if (t.kind == Tok::Ident) return t.text == "fst" || t.text == "snd" || t.text == "box";
    return t.kind == Tok::Symbol && (t.text == "(" || t.text == "<");
  }

  Term application() {
    Term t = unary();
    while (starts_unary()) t = Term::app(t, unary());
    return t;
  }

  Term unary() {
    if (at_word("fst")) {
      ++pos_;
      return Term::proj(1, unary());
    }
    if (at_word("snd")) {
      ++pos_;
      return Term::proj(2, unary());
    }
    if (at_word("box")) {
      ++pos_;
      return Term::box(unary());
    }
    if (is_term_ident(peek())) return Term::var(var_of(toks_[pos_++].text));
    if (at_symbol("(")) {
      ++pos_;
      Term t = term();
      expect_symbol(")");
      return t;
    }
    if (at_symbol("<")) {
      ++pos_;
      Term a = term();
      expect_symbol(",");
      Term b = term();
      expect_symbol(">");
      return Term::pair(a, b);
    }
    fail({"identifier", "'('", "'<'", "'\\'", "'fst'", "'snd'", "'box'", "'let'", "'fix'"});
  }

  // -- judgments --
  Context bindings() {
    Context c;
    if (at_symbol(";") || at_symbol("|-")) return c;
    for (;;) {
      SourceLocation loc = peek().loc;
      VarName v = identifier();
      expect_symbol(":");
      Type t = type();
      if (c.contains(v)) fail_message("variable " + v.str() + " bound twice in one context", loc);
      c.push(v, t);
      if (!at_symbol(",")) return c;
      ++pos_;
    }
  }

  DualContext dual_context() {
    SourceLocation loc = peek().loc;
    DualContext ctx;
    ctx.modal = bindings();
    expect_symbol(";");
    ctx.intuitionistic = bindings();
    for (const auto& b : ctx.modal)
      if (ctx.intuitionistic.contains(b.name))
        fail_message("variable " + b.name.str() + " occurs in both the modal and the intuitionistic zone", loc);
    expect_symbol("|-");
    return ctx;
  }

  // -- formulas --
  Formula formula() {
    Formula left = or_formula();
    if (at_symbol("->")) {
      ++pos_;
      return Formula::implies(left, formula());
    }
    return left;
  }
  Formula or_formula() {
    Formula f = and_formula();
    while (at_symbol("+")) {
      ++pos_;
      f = Formula::disj(f, and_formula());
    }
    return f;
  }
  Formula and_formula() {
    Formula f = unary_formula();
    while (at_symbol("*")) {
      ++pos_;
      f = Formula::conj(f, unary_formula());
    }
    return f;
  }
  Formula unary_formula() {
    if (at_symbol("[]")) {
      ++pos_;
      return Formula::box(unary_formula());
    }
    if (at_symbol("(")) {
      ++pos_;
      Formula f = formula();
      expect_symbol(")");
      return f;
    }
    if (at_word("bot")) {
      ++pos_;
      return Formula::falsity();
    }
    if (peek().kind == Tok::Ident && peek().text.back() != '\'') return Formula::atom(toks_[pos_++].text);
    fail({"formula", "'[]'", "'('", "'bot'"});
  }

  // -- proofs --
  HilbertProof proof() {
    expect_symbol("(");
    if (peek().kind != Tok::Ident) fail({"'assn'", "'ax'", "'mp'", "'nec'"});
    std::string head = toks_[pos_].text;
    HilbertProof p;
    if (head == "assn") {
      ++pos_;
      if (peek().kind != Tok::Number) fail({"assumption index"});
      p = HilbertProof::assn(std::stoul(toks_[pos_++].text));
    } else if (head == "ax") {
      ++pos_;
      SourceLocation loc = peek().loc;
      if (peek().kind != Tok::Ident && peek().kind != Tok::Number) fail({"schema name"});
      auto schema = parse_schema_name(toks_[pos_].text);
      if (!schema) fail_message("unknown axiom schema '" + toks_[pos_].text + "'", loc);
      ++pos_;
      std::vector<Formula> args;
      while (!at_symbol(")")) args.push_back(unary_formula());
      if (args.size() != schema_arity(*schema))
        fail_message("schema " + schema_name(*schema) + " takes " + std::to_string(schema_arity(*schema)) +
                         " formulas, got " + std::to_string(args.size()),
                     loc);
      p = HilbertProof::ax(*schema, std::move(args));
    } else if (head == "mp") {
      ++pos_;
      HilbertProof major = proof();
      HilbertProof minor = proof();
      p = HilbertProof::mp(major, minor);
    } else if (head == "nec") {
      ++pos_;
      p = HilbertProof::nec(proof());
    } else {
      fail({"'assn'", "'ax'", "'mp'", "'nec'"});
    }
    expect_symbol(")");
    return p;
  }

  HilbertScript script() {
    HilbertScript s;
    s.location = peek().loc;
    expect_word("assume");
    if (!at_word("prove")) {
      s.assumptions.push_back(formula());
      while (at_symbol(",")) {
        ++pos_;
        s.assumptions.push_back(formula());
      }
    }
    expect_word("prove");
    s.goal = formula();
    s.proof = proof();
    return s;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

SourceJudgment judgment_from(Parser& p) {
  SourceJudgment j;
  j.location = p.peek().loc;
  j.ctx = p.dual_context();
  j.term = p.term();
  if (p.at_symbol(":")) {
    p.expect_symbol(":");
    j.type = p.type();
  }
  p.expect_end();
  return j;
}

// -- printing --

std::string type_str(const Type& t, int prec) {
  switch (t.kind()) {
    case TypeKind::Atom: return t.name();
    case TypeKind::Box: return "[]" + type_str(t.first(), 2);
    case TypeKind::Prod: {
      std::string s = type_str(t.first(), 1) + " * " + type_str(t.second(), 2);
      return prec > 1 ? "(" + s + ")" : s;
    }
    case TypeKind::Arrow: {
      std::string s = type_str(t.first(), 1) + " -> " + type_str(t.second(), 0);
      return prec > 0 ? "(" + s + ")" : s;
    }
  }
  return {};
}

enum class Pos { Top, AppLeft, Arg };

std::string term_str(const Term& m, Pos pos) {
  auto wrap = [](std::string s, bool parens) { return parens ? "(" + s + ")" : s; };
  switch (m.kind()) {
    case TermKind::Var: return m.name().str();
    case TermKind::Lam:
      return wrap("\\" + m.name().str() + ":" + print_type(m.annot()) + ". " + term_str(m.first(), Pos::Top),
                  pos != Pos::Top);
    case TermKind::FixBox:
      return wrap("fix " + m.name().str() + ":" + print_type(m.annot()) + ". " + term_str(m.first(), Pos::Top),
                  pos != Pos::Top);
    case TermKind::LetBox:
      return wrap("let box " + m.name().str() + " = " + term_str(m.first(), Pos::Top) + " in " +
                      term_str(m.second(), Pos::Top),
                  pos != Pos::Top);
    case TermKind::App:
      return wrap(term_str(m.first(), Pos::AppLeft) + " " + term_str(m.second(), Pos::Arg), pos == Pos::Arg);
    case TermKind::Pair:
      return "<" + term_str(m.first(), Pos::Top) + ", " + term_str(m.second(), Pos::Top) + ">";
    case TermKind::Proj:
      return (m.index() == 1 ? "fst " : "snd ") + term_str(m.first(), Pos::Arg);
    case TermKind::Box:
      return "box " + term_str(m.first(), Pos::Arg);
  }
  return {};
}

std::string formula_str(const Formula& f, int prec) {
  switch (f.kind()) {
    case FormulaKind::Atom: return f.name();
    case FormulaKind::Falsity: return "bot";
    case FormulaKind::Box: return "[]" + formula_str(f.first(), 3);
    case FormulaKind::And: {
      std::string s = formula_str(f.first(), 2) + " * " + formula_str(f.second(), 3);
      return prec > 2 ? "(" + s + ")" : s;
    }
    case FormulaKind::Or: {
      std::string s = formula_str(f.first(), 1) + " + " + formula_str(f.second(), 2);
      return prec > 1 ? "(" + s + ")" : s;
    }
    case FormulaKind::Implies: {
      std::string s = formula_str(f.first(), 1) + " -> " + formula_str(f.second(), 0);
      return prec > 0 ? "(" + s + ")" : s;
    }
  }
  return {};
}

std::string formula_arg(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Atom:
    case FormulaKind::Falsity: return formula_str(f, 3);
    case FormulaKind::Box: return "[]" + formula_arg(f.first());
    default: return "(" + formula_str(f, 0) + ")";
  }
}

void proof_str(const HilbertProof& p, std::string& out) {
  switch (p.kind()) {
    case ProofKind::Assn:
      out += "(assn " + std::to_string(p.index()) + ")";
      return;
    case ProofKind::Ax:
      out += "(ax " + schema_name(p.schema());
      for (const auto& a : p.args()) out += " " + formula_arg(a);
      out += ")";
      return;
    case ProofKind::MP:
      out += "(mp ";
      proof_str(p.major(), out);
      out += " ";
      proof_str(p.minor(), out);
      out += ")";
      return;
    case ProofKind::Nec:
      out += "(nec ";
      proof_str(p.sub(), out);
      out += ")";
      return;
  }
}

}  // namespace

Type parse_type(std::string_view text) {
  Parser p(lex(text));
  Type t = p.type();
  p.expect_end();
  return t;
}

Term parse_term(std::string_view text) {
  Parser p(lex(text));
  Term t = p.term();
  p.expect_end();
  return t;
}

SourceJudgment parse_judgment(std::string_view text) {
  Parser p(lex(text));
  return judgment_from(p);
}

SourceEquation parse_equation(std::string_view text) {
  Parser p(lex(text));
  SourceEquation e;
  e.location = p.peek().loc;
  e.ctx = p.dual_context();
  e.left = p.term();
  p.expect_symbol("=");
  e.right = p.term();
  p.expect_symbol(":");
  e.type = p.type();
  p.expect_end();
  return e;
}

std::vector<std::pair<std::size_t, std::string>> split_blocks(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string>> blocks;
  std::string current;
  std::size_t start = 0, line = 0;
  bool has_content = false;
  std::size_t i = 0;
  while (i <= text.size()) {
    std::size_t nl = text.find('\n', i);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view ln = text.substr(i, nl - i);
    ++line;
    bool blank = std::all_of(ln.begin(), ln.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
    if (blank) {
      if (has_content) blocks.emplace_back(start, current);
      current.clear();
      has_content = false;
    } else {
      if (current.empty()) start = line;
      current.append(ln);
      current.push_back('\n');
      std::string_view code = ln.substr(0, ln.find('#'));
      if (!std::all_of(code.begin(), code.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); }))
        has_content = true;
    }
    i = nl + 1;
  }
  if (has_content) blocks.emplace_back(start, current);
  return blocks;
}

std::vector<SourceJudgment> parse_judgments(std::string_view text) {
  std::vector<SourceJudgment> out;
  for (const auto& [line, block] : split_blocks(text)) {
    Parser p(lex(block, {line, 1}));
    out.push_back(judgment_from(p));
  }
  return out;
}

std::string print_type(const Type& t) { return type_str(t, 0); }
std::string print_term(const Term& m) { return term_str(m, Pos::Top); }

std::string print_context(const Context& c) {
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ", ";
    out += c[i].name.str() + ":" + print_type(c[i].type);
  }
  return out;
}

std::string print_dual_context(const DualContext& c) {
  std::string d = print_context(c.modal), g = print_context(c.intuitionistic);
  std::string out = d.empty() ? ";" : d + " ;";
  if (!g.empty()) out += " " + g;
  return out;
}

std::string print_judgment(const DualContext& ctx, const Term& m, const Type& t) {
  return print_dual_context(ctx) + " |- " + print_term(m) + " : " + print_type(t);
}

Formula parse_formula(std::string_view text) {
  Parser p(lex(text));
  Formula f = p.formula();
  p.expect_end();
  return f;
}

std::string print_formula(const Formula& f) { return formula_str(f, 0); }

std::vector<HilbertScript> parse_hilbert_scripts(std::string_view text) {
  Parser p(lex(text));
  std::vector<HilbertScript> out;
  while (!p.at_end()) out.push_back(p.script());
  return out;
}

std::string print_hilbert_proof(const HilbertProof& p) {
  std::string out;
  proof_str(p, out);
  return out;
}

std::string print_hilbert_script(const std::vector<Formula>& assumptions, const Formula& goal,
                                 const HilbertProof& p) {
  std::string out = "assume";
  for (std::size_t i = 0; i < assumptions.size(); ++i) out += (i ? ", " : " ") + print_formula(assumptions[i]);
  out += "\nprove " + print_formula(goal) + "\n";
  proof_str(p, out);
  out += "\n";
  return out;
}

}  // namespace modalc
