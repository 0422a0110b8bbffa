#include <algorithm>
#include <cctype>
#include <set>

#include "lp01/syntax.hpp"

namespace lp01 {
namespace {

enum class Tok : std::uint8_t {
  kIdent,
  kInt,
  kLParen,
  kRParen,
  kComma,
  kDot,
  kDefine,
  kAnd,
  kOr,
  kImplies,
  kSlash,
  kLevel,
  kEnd,
};

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::kEnd: return "end of input";
    case Tok::kIdent: return "'" + t.text + "'";
    case Tok::kInt: return "number " + t.text;
    default: return "'" + t.text + "'";
  }
}

bool is_keyword(std::string_view s) {
  return s == "tt" || s == "ff" || s == "exists" || s == "forall" || s == "blind";
}

// Names ending in `_<digits>` are reserved for prover-generated variables.
bool has_generated_suffix(std::string_view s) {
  auto us = s.rfind('_');
  if (us == std::string_view::npos || us == 0 || us + 1 == s.size()) return false;
  return std::all_of(s.begin() + static_cast<std::ptrdiff_t>(us) + 1, s.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

bool is_upper_ident(std::string_view s) { return !s.empty() && std::isupper(static_cast<unsigned char>(s[0])); }

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  std::uint32_t line = 1;
  std::uint32_t col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == '%') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    SourceSpan at{line, col};
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      out.push_back({Tok::kIdent, std::string(text.substr(i, j - i)), at});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      out.push_back({Tok::kInt, std::string(text.substr(i, j - i)), at});
      advance(j - i);
      continue;
    }
    auto starts = [&](std::string_view s) { return text.substr(i, s.size()) == s; };
    if (starts(":=")) {
      out.push_back({Tok::kDefine, ":=", at});
      advance(2);
    } else if (starts("=>")) {
      out.push_back({Tok::kImplies, "=>", at});
      advance(2);
    } else if (starts("#level")) {
      out.push_back({Tok::kLevel, "#level", at});
      advance(6);
    } else {
      Tok k;
      switch (c) {
        case '(': k = Tok::kLParen; break;
        case ')': k = Tok::kRParen; break;
        case ',': k = Tok::kComma; break;
        case '.': k = Tok::kDot; break;
        case '&': k = Tok::kAnd; break;
        case '|': k = Tok::kOr; break;
        case '/': k = Tok::kSlash; break;
        default:
          throw ParseError(at, std::string("unexpected character '") + c + "'");
      }
      out.push_back({k, std::string(1, c), at});
      advance(1);
    }
  }
  out.push_back({Tok::kEnd, "", SourceSpan{line, col}});
  return out;
}

enum class Mode : std::uint8_t {
  kClause,  // uppercase names are clause variables
  kGoal,    // uppercase names are free, reported as CloseError
  kTree,    // generated names resolve through a VarTable
};

class Parser {
 public:
  Parser(std::string_view text, Mode mode, const VarTable* vars = nullptr)
      : tokens_(lex(text)), mode_(mode), vars_(vars) {}

  Program program() {
    Program p;
    while (!at(Tok::kEnd)) {
      if (at(Tok::kLevel)) {
        level_decl(p);
      } else {
        p.clauses.push_back(clause());
      }
    }
    return p;
  }

  Formula goal() {
    Formula f = formula();
    expect_end();
    if (!free_.empty()) {
      std::vector<std::string> names;
      for (const auto& [name, span] : free_) names.push_back(name);
      throw CloseError(free_.front().second, std::move(names));
    }
    return f;
  }

  Formula tree_formula() {
    Formula f = formula();
    expect_end();
    return f;
  }

  Term tree_term() {
    Term t = term();
    expect_end();
    return t;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_ident(std::string_view s) const { return at(Tok::kIdent) && peek().text == s; }
  const Token& next() { return tokens_[pos_ == tokens_.size() - 1 ? pos_ : pos_++]; }

  [[noreturn]] void fail(const std::string& what, std::vector<std::string> expected) const {
    const Token& t = peek();
    const bool structural = t.kind == Tok::kEnd || t.kind == Tok::kDot || t.kind == Tok::kDefine;
    if (structural && !open_parens_.empty()) {
      throw ParseError(open_parens_.back(), "unclosed '(' before " + describe(t), std::move(expected));
    }
    throw ParseError(t.span, what + ", found " + describe(t), std::move(expected));
  }

  const Token& expect(Tok k, const std::string& name) {
    if (!at(k)) fail("unexpected token", {name});
    return next();
  }

  void expect_end() {
    if (!at(Tok::kEnd)) fail("unexpected token", {"end of input"});
  }

  void level_decl(Program& p) {
    const SourceSpan span = next().span;
    const Token& name = expect(Tok::kIdent, "predicate name");
    if (is_upper_ident(name.text) || is_keyword(name.text)) {
      throw ParseError(name.span, "'" + name.text + "' is not a predicate name");
    }
    expect(Tok::kSlash, "'/'");
    const Token& arity = expect(Tok::kInt, "arity");
    const Token& level = expect(Tok::kInt, "level");
    if (level.text != "0" && level.text != "1") {
      throw ParseError(level.span, "level must be 0 or 1", {"0", "1"});
    }
    expect(Tok::kDot, "'.'");
    PredicateKey key{name.text, static_cast<std::size_t>(std::stoul(arity.text))};
    auto [it, inserted] = p.levels.emplace(key, level.text == "1" ? 1 : 0);
    if (!inserted && it->second != (level.text == "1" ? 1 : 0)) {
      throw ParseError(span, "conflicting level declarations for " + name.text + "/" + arity.text);
    }
  }

  Clause clause() {
    const SourceSpan span = peek().span;
    if (at_ident("tt") || at_ident("ff")) {
      throw ParseError(span, "clause head must be an atom, not '" + peek().text + "'");
    }
    head_vars_.clear();
    Term head = atom_term(/*in_head=*/true);
    expect(Tok::kDefine, "':='");
    Formula body = formula();
    expect(Tok::kDot, "'.'");
    return Clause{std::move(head), std::move(body), span};
  }

  Formula formula() {
    Formula lhs = disjunction();
    if (at(Tok::kImplies)) {
      next();
      return Formula::implies(std::move(lhs), formula());
    }
    return lhs;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (at(Tok::kOr)) {
      next();
      f = Formula::disj(std::move(f), conjunction());
    }
    return f;
  }

  Formula conjunction() {
    Formula f = unary();
    while (at(Tok::kAnd)) {
      next();
      f = Formula::conj(std::move(f), unary());
    }
    return f;
  }

  Formula unary() {
    if (at(Tok::kLParen)) {
      open_parens_.push_back(next().span);
      Formula f = formula();
      expect(Tok::kRParen, "')'");
      open_parens_.pop_back();
      return f;
    }
    if (!at(Tok::kIdent)) fail("expected a formula", {"formula"});
    const std::string& word = peek().text;
    if (word == "tt") {
      next();
      return Formula::top();
    }
    if (word == "ff") {
      next();
      return Formula::bot();
    }
    if (word == "exists" || word == "forall" || word == "blind") {
      const Token& q = next();
      const FormulaKind kind = word == "exists"   ? FormulaKind::kExists
                               : word == "forall" ? FormulaKind::kForall
                                                  : FormulaKind::kBlind;
      const Token& v = expect(Tok::kIdent, "variable name");
      if (is_upper_ident(v.text) || is_keyword(v.text) || has_generated_suffix(v.text)) {
        throw ParseError(v.span, "'" + v.text + "' cannot be a quantified variable",
                         {"lowercase variable name"});
      }
      expect(Tok::kDot, "'.'");
      bound_.push_back(v.text);
      Formula body = formula();
      bound_.pop_back();
      return Formula::quantified(kind, v.text, std::move(body), q.span);
    }
    return Formula::atom(atom_term(/*in_head=*/false));
  }

  Term atom_term(bool in_head) {
    if (!at(Tok::kIdent)) fail("expected an atom", {"atom"});
    const Token& name = next();
    if (is_upper_ident(name.text) || is_keyword(name.text) || has_generated_suffix(name.text) ||
        is_bound(name.text)) {
      throw ParseError(name.span, "'" + name.text + "' is not a predicate name", {"predicate name"});
    }
    return Term::app(name.text, arguments(in_head));
  }

  std::vector<Term> arguments(bool in_head) {
    std::vector<Term> args;
    if (!at(Tok::kLParen)) return args;
    open_parens_.push_back(next().span);
    args.push_back(term(in_head));
    while (at(Tok::kComma)) {
      next();
      args.push_back(term(in_head));
    }
    expect(Tok::kRParen, "')'");
    open_parens_.pop_back();
    return args;
  }

  bool is_bound(const std::string& name) const {
    return std::find(bound_.begin(), bound_.end(), name) != bound_.end();
  }

  Term term(bool in_head = false) {
    if (!at(Tok::kIdent)) fail("expected a term", {"term"});
    const Token& name = next();
    if (is_keyword(name.text)) throw ParseError(name.span, "keyword '" + name.text + "' used as a term", {"term"});
    if (has_generated_suffix(name.text)) {
      if (mode_ != Mode::kTree) {
        throw ParseError(name.span, "'" + name.text + "': names ending in _<digits> are reserved");
      }
      auto it = vars_->find(name.text);
      if (it == vars_->end()) throw ParseError(name.span, "unknown generated variable '" + name.text + "'");
      return Term::variable(it->second);
    }
    if (is_upper_ident(name.text)) {
      switch (mode_) {
        case Mode::kClause:
          if (in_head) {
            head_vars_.insert(name.text);
          } else if (!head_vars_.contains(name.text)) {
            throw CloseError(name.span, {name.text});
          }
          break;
        case Mode::kGoal:
          if (std::none_of(free_.begin(), free_.end(), [&](const auto& f) { return f.first == name.text; })) {
            free_.emplace_back(name.text, name.span);
          }
          break;
        case Mode::kTree:
          break;
      }
      if (at(Tok::kLParen)) fail("a variable cannot take arguments", {"',' or ')'"});
      return Term::variable(Var::source(name.text));
    }
    if (is_bound(name.text)) {
      if (at(Tok::kLParen)) fail("a variable cannot take arguments", {"',' or ')'"});
      return Term::variable(Var::source(name.text));
    }
    return Term::app(name.text, arguments(in_head));
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  Mode mode_;
  const VarTable* vars_;
  std::vector<std::string> bound_;
  std::set<std::string> head_vars_;
  std::vector<std::pair<std::string, SourceSpan>> free_;
  std::vector<SourceSpan> open_parens_;
};

}  // namespace

Program parse_program(std::string_view text) { return Parser(text, Mode::kClause).program(); }

Formula parse_goal(std::string_view text) { return Parser(text, Mode::kGoal).goal(); }

Formula parse_formula(std::string_view text, const VarTable& vars) {
  return Parser(text, Mode::kTree, &vars).tree_formula();
}

Term parse_term(std::string_view text, const VarTable& vars) {
  return Parser(text, Mode::kTree, &vars).tree_term();
}

bool is_constant_name(std::string_view text) {
  if (text.empty() || !std::islower(static_cast<unsigned char>(text[0]))) return false;
  if (!std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isalnum(c) || c == '_'; })) {
    return false;
  }
  return !is_keyword(text) && !has_generated_suffix(text);
}

}  // namespace lp01
