#include "lp01/syntax.hpp"

namespace lp01 {
namespace {

int precedence(FormulaKind k) {
  switch (k) {
    case FormulaKind::kImplies: return 1;
    case FormulaKind::kOr: return 2;
    case FormulaKind::kAnd: return 3;
    case FormulaKind::kExists:
    case FormulaKind::kForall:
    case FormulaKind::kBlind: return 0;
    default: return 4;
  }
}

std::string_view keyword(FormulaKind k) {
  switch (k) {
    case FormulaKind::kExists: return "exists";
    case FormulaKind::kForall: return "forall";
    case FormulaKind::kBlind: return "blind";
    case FormulaKind::kAnd: return " & ";
    case FormulaKind::kOr: return " | ";
    case FormulaKind::kImplies: return " => ";
    case FormulaKind::kTop: return "tt";
    case FormulaKind::kBot: return "ff";
    case FormulaKind::kAtom: return "";
  }
  return "";
}

// `min_prec` is the binding strength the context demands; `open_tail` says
// nothing follows this formula inside the current parenthesis level, so a
// quantifier may extend to the right without brackets.
void emit(std::string& out, const Formula& f, int min_prec, bool open_tail) {
  const FormulaKind k = f.kind();
  switch (k) {
    case FormulaKind::kTop:
    case FormulaKind::kBot:
      out += keyword(k);
      return;
    case FormulaKind::kAtom:
      out += format(f.atom());
      return;
    case FormulaKind::kExists:
    case FormulaKind::kForall:
    case FormulaKind::kBlind:
      if (!open_tail) out += '(';
      out += keyword(k);
      out += ' ';
      out += f.bound_var();
      out += ". ";
      emit(out, f.body(), 0, true);
      if (!open_tail) out += ')';
      return;
    case FormulaKind::kAnd:
    case FormulaKind::kOr:
    case FormulaKind::kImplies: {
      const int p = precedence(k);
      const bool parens = p < min_prec;
      const bool tail = parens || open_tail;
      if (parens) out += '(';
      const bool right_assoc = k == FormulaKind::kImplies;
      emit(out, f.left(), right_assoc ? p + 1 : p, false);
      out += keyword(k);
      emit(out, f.right(), right_assoc ? p : p + 1, tail);
      if (parens) out += ')';
      return;
    }
  }
}

}  // namespace

std::string format(const Var& v) { return v.display(); }

std::string format(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::kVar: return t.var().display();
    case Term::Kind::kConst: return t.functor();
    case Term::Kind::kApp: {
      std::string out = t.functor() + "(";
      bool first = true;
      for (const Term& a : t.args()) {
        if (!first) out += ',';
        first = false;
        out += format(a);
      }
      return out + ")";
    }
  }
  return {};
}

std::string format(const Formula& f) {
  std::string out;
  emit(out, f, 0, true);
  return out;
}

std::string format(const Clause& c) { return format(c.head) + " := " + format(c.body) + "."; }

std::string format(const Program& p) {
  std::string out;
  for (const auto& [key, level] : p.levels) {
    out += "#level " + key.name + "/" + std::to_string(key.arity) + " " + std::to_string(level) + ".\n";
  }
  for (const Clause& c : p.clauses) out += format(c) + "\n";
  return out;
}

std::string format(const Subst& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& [v, t] : s) {
    if (!first) out += ", ";
    first = false;
    out += "(" + v.display() + "," + format(t) + ")";
  }
  return out + "}";
}

}  // namespace lp01
