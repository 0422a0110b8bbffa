#include <algorithm>
#include <stdexcept>

#include "lp01/syntax.hpp"

namespace lp01 {

struct Formula::Node {
  FormulaKind kind;
  std::optional<Term> atom;
  std::string var;
  std::vector<Formula> sub;  // binary: {left, right}; quantifier: {body}
  SourceSpan span;
};

Formula Formula::top() {
  static const Formula f(std::make_shared<const Node>(Node{FormulaKind::kTop, {}, {}, {}, {}}));
  return f;
}

Formula Formula::bot() {
  static const Formula f(std::make_shared<const Node>(Node{FormulaKind::kBot, {}, {}, {}, {}}));
  return f;
}

Formula Formula::atom(Term a) {
  if (a.is_var()) throw std::invalid_argument("an atom cannot be a variable");
  return Formula(std::make_shared<const Node>(Node{FormulaKind::kAtom, std::move(a), {}, {}, {}}));
}

Formula Formula::conj(Formula l, Formula r) {
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::kAnd, {}, {}, {std::move(l), std::move(r)}, {}}));
}

Formula Formula::disj(Formula l, Formula r) {
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::kOr, {}, {}, {std::move(l), std::move(r)}, {}}));
}

Formula Formula::implies(Formula antecedent, Formula consequent) {
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::kImplies, {}, {}, {std::move(antecedent), std::move(consequent)}, {}}));
}

Formula Formula::quantified(FormulaKind q, std::string var, Formula body, SourceSpan span) {
  if (q != FormulaKind::kExists && q != FormulaKind::kForall && q != FormulaKind::kBlind) {
    throw std::invalid_argument("not a quantifier kind");
  }
  return Formula(std::make_shared<const Node>(Node{q, {}, std::move(var), {std::move(body)}, span}));
}

FormulaKind Formula::kind() const noexcept { return node_->kind; }

bool Formula::is_quantifier() const noexcept {
  auto k = node_->kind;
  return k == FormulaKind::kExists || k == FormulaKind::kForall || k == FormulaKind::kBlind;
}

bool Formula::is_binary() const noexcept {
  auto k = node_->kind;
  return k == FormulaKind::kAnd || k == FormulaKind::kOr || k == FormulaKind::kImplies;
}

const Term& Formula::atom() const {
  if (!node_->atom) throw std::logic_error("Formula::atom on non-atom");
  return *node_->atom;
}

const Formula& Formula::left() const {
  if (!is_binary()) throw std::logic_error("Formula::left on non-binary formula");
  return node_->sub[0];
}

const Formula& Formula::right() const {
  if (!is_binary()) throw std::logic_error("Formula::right on non-binary formula");
  return node_->sub[1];
}

const std::string& Formula::bound_var() const {
  if (!is_quantifier()) throw std::logic_error("Formula::bound_var on non-quantifier");
  return node_->var;
}

const Formula& Formula::body() const {
  if (!is_quantifier()) throw std::logic_error("Formula::body on non-quantifier");
  return node_->sub[0];
}

SourceSpan Formula::span() const { return node_->span; }

bool Formula::is_level0_shape() const {
  switch (node_->kind) {
    case FormulaKind::kImplies:
    case FormulaKind::kForall:
    case FormulaKind::kBlind:
      return false;
    default:
      return std::all_of(node_->sub.begin(), node_->sub.end(),
                         [](const Formula& f) { return f.is_level0_shape(); });
  }
}

Formula Formula::instantiate(const Term& t) const {
  Subst s;
  s.insert(Var::source(bound_var()), t);
  return body().substitute(s);
}

Formula Formula::substitute(const Subst& s) const {
  if (s.empty()) return *this;
  switch (node_->kind) {
    case FormulaKind::kTop:
    case FormulaKind::kBot:
      return *this;
    case FormulaKind::kAtom: {
      Term t = s.apply(*node_->atom);
      return t == *node_->atom ? *this : atom(std::move(t));
    }
    case FormulaKind::kAnd:
    case FormulaKind::kOr:
    case FormulaKind::kImplies: {
      Formula l = node_->sub[0].substitute(s);
      Formula r = node_->sub[1].substitute(s);
      if (l.node_ == node_->sub[0].node_ && r.node_ == node_->sub[1].node_) return *this;
      return Formula(std::make_shared<const Node>(
          Node{node_->kind, {}, {}, {std::move(l), std::move(r)}, node_->span}));
    }
    case FormulaKind::kExists:
    case FormulaKind::kForall:
    case FormulaKind::kBlind: {
      const Var shadowed = Var::source(node_->var);
      Formula b = [&] {
        if (!s.binds(shadowed)) return node_->sub[0].substitute(s);
        Subst inner = s;
        inner.erase(shadowed);
        return node_->sub[0].substitute(inner);
      }();
      if (b.node_ == node_->sub[0].node_) return *this;
      return quantified(node_->kind, node_->var, std::move(b), node_->span);
    }
  }
  return *this;
}

void Formula::collect_vars(std::vector<Var>& out) const {
  if (node_->atom) node_->atom->collect_vars(out);
  for (const Formula& f : node_->sub) f.collect_vars(out);
}

bool Formula::mentions(const Var& v) const {
  if (node_->atom && node_->atom->occurs(v)) return true;
  return std::any_of(node_->sub.begin(), node_->sub.end(),
                     [&](const Formula& f) { return f.mentions(v); });
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.atom == y.atom && x.var == y.var && x.sub == y.sub;
}

PredicateKey predicate_of(const Term& atom) { return PredicateKey{atom.functor(), atom.arity()}; }

std::vector<Var> Clause::variables() const {
  std::vector<Var> out;
  head.collect_vars(out);
  return out;
}

int Program::level_of(const Term& atom) const {
  auto it = levels.find(predicate_of(atom));
  return it == levels.end() ? 0 : it->second;
}

}  // namespace lp01
