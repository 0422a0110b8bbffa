#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lp01/error.hpp"
#include "lp01/term.hpp"

namespace lp01 {

enum class FormulaKind : std::uint8_t {
  kTop,
  kBot,
  kAtom,
  kAnd,
  kOr,
  kImplies,
  kExists,
  kForall,
  kBlind,
};

/// Goal formula. One type covers both strata; `is_level0_shape` tells whether
/// a formula fits the level-0 grammar (no implication, forall, blind forall).
class Formula {
 public:
  static Formula top();
  static Formula bot();
  static Formula atom(Term a);
  static Formula conj(Formula l, Formula r);
  static Formula disj(Formula l, Formula r);
  static Formula implies(Formula antecedent, Formula consequent);
  static Formula quantified(FormulaKind q, std::string var, Formula body, SourceSpan span = {});

  FormulaKind kind() const noexcept;
  bool is_quantifier() const noexcept;
  bool is_binary() const noexcept;

  const Term& atom() const;
  const Formula& left() const;
  const Formula& right() const;
  const std::string& bound_var() const;
  const Formula& body() const;
  /// Position of a quantifier in source text; zero when unknown.
  SourceSpan span() const;

  bool is_level0_shape() const;

  /// Body of a quantifier with its bound variable replaced by `t`.
  Formula instantiate(const Term& t) const;
  /// Applies `s` to every atom. Bindings of source variables are not applied
  /// under a quantifier that rebinds the same name.
  Formula substitute(const Subst& s) const;

  void collect_vars(std::vector<Var>& out) const;
  bool mentions(const Var& v) const;

  /// Structural equality; source spans are ignored.
  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct PredicateKey {
  std::string name;
  std::size_t arity = 0;

  friend auto operator<=>(const PredicateKey&, const PredicateKey&) = default;
  friend bool operator==(const PredicateKey&, const PredicateKey&) = default;
};

PredicateKey predicate_of(const Term& atom);

/// Definition clause `head := body.` Head variables are source variables.
struct Clause {
  Term head;
  Formula body;
  SourceSpan span;

  std::vector<Var> variables() const;

  friend bool operator==(const Clause& a, const Clause& b) {
    return a.head == b.head && a.body == b.body;
  }
};

struct Program {
  std::vector<Clause> clauses;
  std::map<PredicateKey, int> levels;

  /// Declared level of the atom's predicate, 0 by default.
  int level_of(const Term& atom) const;

  friend bool operator==(const Program&, const Program&) = default;
};

/// Resolves generated variable names (`x_0`) when reading formulas back from
/// tree files. Keys are display names.
using VarTable = std::map<std::string, Var, std::less<>>;

Program parse_program(std::string_view text);
/// Parses a closed goal; free variables raise CloseError.
Formula parse_goal(std::string_view text);
/// Parses a formula that may mention generated variables from `vars`.
Formula parse_formula(std::string_view text, const VarTable& vars);
Term parse_term(std::string_view text, const VarTable& vars);

/// True for identifiers usable as a constant: lowercase initial, letters,
/// digits and underscores, not a keyword, not a generated-variable name.
bool is_constant_name(std::string_view text);

std::string format(const Var& v);
std::string format(const Term& t);
std::string format(const Formula& f);
std::string format(const Clause& c);
std::string format(const Program& p);
/// `{(x_0,tom), (y_0,mary)}`
std::string format(const Subst& s);

/// 1 if the formula contains an implication, forall, blind forall or a
/// level-1 atom; otherwise 0.
int level_of(const Formula& f, const Program& p);

/// Throws LevelError when a clause body outranks its head or when an
/// implication antecedent is not a level-0 formula over level-0 atoms.
void check_levels(const Program& p);
void check_levels(const Program& p, const Formula& goal);

}  // namespace lp01
