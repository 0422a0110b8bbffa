#include "lp01/syntax.hpp"

namespace lp01 {
namespace {

bool has_level1_atom(const Formula& f, const Program& p) {
  switch (f.kind()) {
    case FormulaKind::kAtom: return p.level_of(f.atom()) > 0;
    case FormulaKind::kTop:
    case FormulaKind::kBot: return false;
    case FormulaKind::kExists:
    case FormulaKind::kForall:
    case FormulaKind::kBlind: return has_level1_atom(f.body(), p);
    default: return has_level1_atom(f.left(), p) || has_level1_atom(f.right(), p);
  }
}

// Every implication antecedent must be a level-0 formula over level-0 atoms,
// since it ends up on the left of the sequent.
void check_antecedents(const Formula& f, const Program& p, SourceSpan span, const std::string& where) {
  switch (f.kind()) {
    case FormulaKind::kAtom:
    case FormulaKind::kTop:
    case FormulaKind::kBot:
      return;
    case FormulaKind::kExists:
    case FormulaKind::kForall:
    case FormulaKind::kBlind:
      check_antecedents(f.body(), p, f.span().line ? f.span() : span, where);
      return;
    case FormulaKind::kImplies:
      if (!f.left().is_level0_shape()) {
        throw LevelError(span, where,
                         "antecedent '" + format(f.left()) + "' contains =>, forall or blind");
      }
      if (has_level1_atom(f.left(), p)) {
        throw LevelError(span, where, "antecedent '" + format(f.left()) + "' mentions a level-1 atom");
      }
      [[fallthrough]];
    default:
      check_antecedents(f.left(), p, span, where);
      check_antecedents(f.right(), p, span, where);
  }
}

}  // namespace

int level_of(const Formula& f, const Program& p) {
  return (!f.is_level0_shape() || has_level1_atom(f, p)) ? 1 : 0;
}

void check_levels(const Program& p) {
  for (const Clause& c : p.clauses) {
    const std::string where = "clause '" + format(c) + "'";
    const int head = p.level_of(c.head);
    const int body = level_of(c.body, p);
    if (body > head) {
      const PredicateKey key = predicate_of(c.head);
      throw LevelError(c.span, where,
                       "body is level 1 but head predicate " + key.name + "/" +
                           std::to_string(key.arity) + " is level 0");
    }
    check_antecedents(c.body, p, c.span, where);
  }
}

void check_levels(const Program& p, const Formula& goal) {
  check_levels(p);
  check_antecedents(goal, p, SourceSpan{}, "goal '" + format(goal) + "'");
}

}  // namespace lp01
