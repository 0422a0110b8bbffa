#include <limits>
#include <set>

#include "lp01/prover.hpp"
#include "lp01/unify.hpp"

namespace lp01 {
namespace {

struct Fail {
  std::string reason;
};

void require(bool cond, const std::string& reason) {
  if (!cond) throw Fail{reason};
}

bool mentions(const ProofFormula& pf, const Var& v) {
  for (const auto& [w, t] : pf.sigma) {
    if (w == v || t.occurs(v)) return true;
  }
  for (const Formula& f : pf.context) {
    if (f.mentions(v)) return true;
  }
  return pf.goal.mentions(v);
}

std::vector<Formula> rest_of(const std::vector<Formula>& ctx) { return {ctx.begin() + 1, ctx.end()}; }

class Validator {
 public:
  Validator(const ProofTree& tree, const Program& program) : tree_(tree), program_(program) {}

  std::optional<Malformed> run() {
    if (tree_.nodes.empty()) return Malformed{0, "empty tree"};
    std::size_t i = 0;
    try {
      check_shape(i);
      const ProofFormula& root = tree_.root().formula;
      i = tree_.root_index();
      require(root.sigma.empty(), "root answer substitution is not empty");
      require(root.context.empty(), "root context is not empty");
      for (i = 0; i < tree_.nodes.size(); ++i) check_node(i);
    } catch (const Fail& f) {
      return Malformed{i, f.reason};
    }
    return std::nullopt;
  }

 private:
  // Children must be contiguous post-order blocks: the last child sits right
  // before its parent and each earlier child ends where the next one starts.
  void check_shape(std::size_t& i) {
    std::vector<std::size_t> start(tree_.nodes.size());
    for (i = 0; i < tree_.nodes.size(); ++i) {
      const auto& ch = tree_.nodes[i].children;
      for (std::size_t d : ch) require(d >= 1 && d <= i, "child distance " + std::to_string(d) + " out of range");
      if (ch.empty()) {
        start[i] = i;
        continue;
      }
      require(i - ch.back() == i - 1, "last child is not the preceding node");
      for (std::size_t k = 0; k + 1 < ch.size(); ++k) {
        const std::size_t c = i - ch[k];
        const std::size_t next = i - ch[k + 1];
        require(c + 1 == start[next], "children are not contiguous subtrees");
      }
      start[i] = start[i - ch.front()];
    }
    i = tree_.root_index();
    require(start[i] == 0, "nodes outside the root's subtree");
  }

  void introduce(const Var& v, const ProofFormula& at, VarKind kind) {
    require(v.kind == kind, "variable " + v.display() + " has kind " + std::string(to_string(v.kind)) +
                                ", expected " + std::string(to_string(kind)));
    require(introduced_.insert(v).second, "variable " + v.display() + " introduced twice");
    require(!mentions(at, v), "variable " + v.display() + " is not fresh");
  }

  void check_renaming(const Subst& ren, const Clause& c, const ProofFormula& at, VarKind kind) {
    const std::vector<Var> vars = c.variables();
    require(ren.size() == vars.size(), "renaming does not cover the clause variables");
    for (const Var& v : vars) {
      const Term* t = ren.lookup(v);
      require(t && t->is_var(), "renaming of " + v.display() + " is not a variable");
      introduce(t->var(), at, kind);
    }
  }

  void check_node(std::size_t i) {
    const ProofNode& n = tree_.nodes[i];
    const ProofFormula& pf = n.formula;
    const std::vector<std::size_t> kids = tree_.child_indices(i);
    auto child = [&](std::size_t k) -> const ProofFormula& { return tree_.nodes[kids[k]].formula; };
    auto arity = [&](std::size_t m) {
      require(kids.size() == m, std::string(to_string(n.rule)) + " node needs " + std::to_string(m) + " children");
    };

    for (std::size_t k = 0; k < kids.size(); ++k) {
      require(extends(child(k).sigma, pf.sigma), "child " + std::to_string(kids[k]) + " does not extend sigma");
      if (n.rule != RuleTag::kDefL) {
        require(!tree_.nodes[kids[k]].meta.case_info, "case data on a child of a non-defL node");
      }
    }

    if (is_left_rule(n.rule)) {
      require(!pf.context.empty(), "left rule with an empty context");
      for (std::size_t k = 0; k < kids.size(); ++k) require(child(k).goal == pf.goal, "left rule changed the goal");
    } else {
      require(pf.context.empty(), "right rule applied while the context is not empty");
    }

    const Formula* head = pf.context.empty() ? nullptr : &pf.context.front();
    auto head_is = [&](FormulaKind k) {
      require(head->kind() == k, std::string(to_string(n.rule)) + " does not match context head");
    };
    auto goal_is = [&](FormulaKind k) {
      require(pf.goal.kind() == k, std::string(to_string(n.rule)) + " does not match the goal");
    };

    switch (n.rule) {
      case RuleTag::kBotL:
        head_is(FormulaKind::kBot);
        arity(0);
        break;
      case RuleTag::kTopL:
        head_is(FormulaKind::kTop);
        arity(1);
        require(child(0).context == rest_of(pf.context), "topL premise context");
        break;
      case RuleTag::kAndL:
        head_is(FormulaKind::kAnd);
        arity(1);
        require(child(0).context ==
                    push_context(head->left(), push_context(head->right(), rest_of(pf.context))),
                "andL premise context");
        break;
      case RuleTag::kOrL:
        head_is(FormulaKind::kOr);
        arity(2);
        require(child(0).context == push_context(head->left(), rest_of(pf.context)), "orL first premise context");
        require(child(1).context == push_context(head->right(), rest_of(pf.context)), "orL second premise context");
        break;
      case RuleTag::kExistsL: {
        head_is(FormulaKind::kExists);
        arity(1);
        require(n.meta.fresh.has_value(), "existsL without a fresh variable");
        introduce(*n.meta.fresh, pf, VarKind::kBlindEigen);
        require(child(0).context ==
                    push_context(head->instantiate(Term::variable(*n.meta.fresh)), rest_of(pf.context)),
                "existsL premise context");
        break;
      }
      case RuleTag::kDefL:
        head_is(FormulaKind::kAtom);
        check_defl(n, kids);
        break;
      case RuleTag::kTopR:
        goal_is(FormulaKind::kTop);
        arity(0);
        break;
      case RuleTag::kDefR:
        goal_is(FormulaKind::kAtom);
        arity(1);
        check_defr(n, child(0));
        break;
      case RuleTag::kAndR:
        goal_is(FormulaKind::kAnd);
        arity(2);
        require(child(0).context.empty() && child(0).goal == pf.goal.left(), "andR first premise");
        require(child(1).context.empty() && child(1).goal == pf.goal.right(), "andR second premise");
        break;
      case RuleTag::kOrR: {
        goal_is(FormulaKind::kOr);
        arity(1);
        require(n.meta.disjunct == 0 || n.meta.disjunct == 1, "orR without a disjunct choice");
        const Formula& d = *n.meta.disjunct == 0 ? pf.goal.left() : pf.goal.right();
        require(child(0).context.empty() && child(0).goal == d, "orR premise");
        break;
      }
      case RuleTag::kImpR:
        goal_is(FormulaKind::kImplies);
        arity(1);
        require(child(0).context == push_context(pf.goal.left(), {}), "impR premise context");
        require(child(0).goal == pf.goal.right(), "impR premise goal");
        break;
      case RuleTag::kForallR:
      case RuleTag::kBlindR:
      case RuleTag::kExistsR: {
        const FormulaKind q = n.rule == RuleTag::kForallR  ? FormulaKind::kForall
                              : n.rule == RuleTag::kBlindR ? FormulaKind::kBlind
                                                           : FormulaKind::kExists;
        const VarKind kind = n.rule == RuleTag::kForallR  ? VarKind::kEigen
                             : n.rule == RuleTag::kBlindR ? VarKind::kBlindEigen
                                                          : VarKind::kLogic;
        goal_is(q);
        arity(1);
        require(n.meta.fresh.has_value(), "quantifier node without a fresh variable");
        introduce(*n.meta.fresh, pf, kind);
        require(child(0).context.empty(), "quantifier premise context");
        require(child(0).goal == pf.goal.instantiate(Term::variable(*n.meta.fresh)), "quantifier premise goal");
        break;
      }
    }
  }

  void check_defr(const ProofNode& n, const ProofFormula& premise) {
    const ProofFormula& pf = n.formula;
    require(n.meta.clause && *n.meta.clause < program_.clauses.size(), "defR without a valid clause");
    const Clause& c = program_.clauses[*n.meta.clause];
    check_renaming(n.meta.renaming, c, pf, VarKind::kLogic);
    const Term head = n.meta.renaming.apply(c.head);
    auto theta = unify(pf.goal.atom(), head, pf.sigma, {true, UnifyMode::kRigidEigen});
    require(theta.has_value(), "defR clause head does not unify with the goal");
    require(extends(premise.sigma, compose(pf.sigma, *theta)), "defR premise does not extend the unifier");
    require(premise.goal == c.body.substitute(n.meta.renaming), "defR premise is not the clause body");
  }

  void check_defl(const ProofNode& n, const std::vector<std::size_t>& kids) {
    const ProofFormula& pf = n.formula;
    const Term& atom = pf.context.front().atom();
    const PredicateKey key = predicate_of(atom);

    // Which clauses have a head that unifies with the atom at all.
    std::vector<std::size_t> expected;
    std::uint32_t scratch = std::numeric_limits<std::uint32_t>::max();
    for (std::size_t j = 0; j < program_.clauses.size(); ++j) {
      const Clause& c = program_.clauses[j];
      if (predicate_of(c.head) != key) continue;
      Subst ren;
      for (const Var& v : c.variables()) {
        ren.insert(v, Term::variable(Var{v.name, scratch--, 0, VarKind::kBlindEigen}));
      }
      if (unify(atom, ren.apply(c.head), pf.sigma)) expected.push_back(j);
    }
    require(expected.size() == kids.size(), "defL has " + std::to_string(kids.size()) + " cases, expected " +
                                                std::to_string(expected.size()));

    for (std::size_t k = 0; k < kids.size(); ++k) {
      const ProofNode& ch = tree_.nodes[kids[k]];
      require(ch.meta.case_info.has_value(), "defL child without case data");
      const CaseInfo& ci = *ch.meta.case_info;
      require(ci.clause == expected[k], "defL case " + std::to_string(k) + " uses the wrong clause");
      const Clause& c = program_.clauses[ci.clause];
      check_renaming(ci.renaming, c, pf, VarKind::kBlindEigen);
      const Term head = ci.renaming.apply(c.head);
      const Subst branch = compose(pf.sigma, ci.unifier);
      require(branch.apply(atom) == branch.apply(head), "defL case unifier does not unify");
      auto mgu = unify(atom, head, pf.sigma);
      require(mgu.has_value(), "defL case does not unify");
      const Subst general = compose(pf.sigma, *mgu);
      require(extends(general, branch) && extends(branch, general), "defL case unifier is not most general");
      require(extends(ch.formula.sigma, branch), "defL case does not extend its unifier");
      require(ch.formula.context == push_context(c.body.substitute(ci.renaming), rest_of(pf.context)),
              "defL case context");
    }
  }

  const ProofTree& tree_;
  const Program& program_;
  std::set<Var> introduced_;
};

}  // namespace

std::optional<Malformed> validate_tree(const ProofTree& tree, const Program& program) {
  return Validator(tree, program).run();
}

}  // namespace lp01
