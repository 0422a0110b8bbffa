#include "lp01/prover.hpp"

#include <array>
#include <functional>
#include <memory>
#include <set>
#include <stdexcept>

#include "large_stack.hpp"
#include "lp01/unify.hpp"

namespace lp01 {

namespace {

constexpr std::array<std::string_view, 15> kRuleNames = {
    "",      "botL",  "topL", "defL", "andL",    "orL",    "existsL", "topR",
    "defR",  "andR",  "orR",  "impR", "forallR", "blindR", "existsR",
};

}  // namespace

std::string_view to_string(RuleTag rule) { return kRuleNames.at(static_cast<std::size_t>(rule)); }

std::optional<RuleTag> rule_from_string(std::string_view name) {
  for (std::size_t i = 1; i < kRuleNames.size(); ++i) {
    if (kRuleNames[i] == name) return static_cast<RuleTag>(i);
  }
  return std::nullopt;
}

bool is_left_rule(RuleTag rule) { return static_cast<int>(rule) <= static_cast<int>(RuleTag::kExistsL); }

std::string_view to_string(ProveStatus status) {
  switch (status) {
    case ProveStatus::kProved: return "proved";
    case ProveStatus::kNotProvable: return "not provable";
    case ProveStatus::kDepthExceeded: return "depth exceeded";
  }
  return "?";
}

std::vector<std::size_t> ProofTree::child_indices(std::size_t i) const {
  std::vector<std::size_t> out;
  for (std::size_t d : nodes.at(i).children) out.push_back(i - d);
  return out;
}

std::vector<Formula> push_context(const Formula& g, std::vector<Formula> context) {
  if (g.kind() == FormulaKind::kTop) return context;
  context.insert(context.begin(), g);
  return context;
}

namespace {

std::vector<Formula> tail(const std::vector<Formula>& context) {
  return {context.begin() + 1, context.end()};
}

Subst rename_clause(const Clause& c, VarSupply& vars, VarKind kind) {
  Subst ren;
  for (const Var& v : c.variables()) ren.insert(v, vars.fresh_term(v.name, kind));
  return ren;
}

}  // namespace

std::optional<LeftStep> step_left(const ProofFormula& pf, VarSupply& vars) {
  if (pf.context.empty()) return std::nullopt;
  const Formula& head = pf.context.front();
  const std::vector<Formula> rest = tail(pf.context);
  switch (head.kind()) {
    case FormulaKind::kBot:
      return LeftStep{RuleTag::kBotL, {}, std::nullopt};
    case FormulaKind::kTop:
      return LeftStep{RuleTag::kTopL, {rest}, std::nullopt};
    case FormulaKind::kAtom:
      return LeftStep{RuleTag::kDefL, {}, std::nullopt};
    case FormulaKind::kAnd:
      return LeftStep{RuleTag::kAndL, {push_context(head.left(), push_context(head.right(), rest))},
                      std::nullopt};
    case FormulaKind::kOr:
      return LeftStep{RuleTag::kOrL, {push_context(head.left(), rest), push_context(head.right(), rest)},
                      std::nullopt};
    case FormulaKind::kExists: {
      Var y = vars.fresh(head.bound_var(), VarKind::kBlindEigen);
      return LeftStep{RuleTag::kExistsL, {push_context(head.instantiate(Term::variable(y)), rest)}, y};
    }
    case FormulaKind::kImplies:
    case FormulaKind::kForall:
    case FormulaKind::kBlind:
      break;
  }
  throw std::logic_error("level-1 formula on the left: " + format(head));
}

std::vector<DefLBranch> defl_expand(const ProofFormula& pf, const Program& program, VarSupply& vars,
                                    bool occurs_check) {
  const Term& atom = pf.context.at(0).atom();
  const std::vector<Formula> rest = tail(pf.context);
  const PredicateKey key = predicate_of(atom);
  std::vector<DefLBranch> out;
  for (std::size_t i = 0; i < program.clauses.size(); ++i) {
    const Clause& c = program.clauses[i];
    if (predicate_of(c.head) != key) continue;
    Subst ren = rename_clause(c, vars, VarKind::kBlindEigen);
    auto theta = unify(atom, ren.apply(c.head), pf.sigma, {occurs_check, UnifyMode::kFlexible});
    if (!theta) continue;
    ProofFormula child{compose(pf.sigma, *theta), push_context(c.body.substitute(ren), rest), pf.goal};
    out.push_back(DefLBranch{i, std::move(ren), std::move(*theta), std::move(child)});
  }
  return out;
}

namespace {

struct SearchNode;
using NodePtr = std::shared_ptr<const SearchNode>;

struct SearchNode {
  ProofFormula pf;
  RuleTag rule;
  NodeMeta meta;
  std::vector<NodePtr> children;
};

NodePtr make_node(const ProofFormula& pf, RuleTag rule, NodeMeta meta = {}, std::vector<NodePtr> children = {}) {
  return std::make_shared<const SearchNode>(SearchNode{pf, rule, std::move(meta), std::move(children)});
}

struct StepLimitReached {};

class Search {
 public:
  /// Receives the answer substitution after a subproof and the subproof's
  /// root. Returning false asks for the next alternative.
  using Cont = std::function<bool(const Subst&, const NodePtr&)>;

  Search(const Program& program, const ProverOptions& options) : program_(program), options_(options) {}

  bool solve(const ProofFormula& pf, const Cont& k) {
    if (++steps_ > options_.max_steps) throw StepLimitReached{};
    return pf.context.empty() ? right(pf, k) : left(pf, k);
  }

  std::uint64_t steps() const { return steps_; }

 private:
  struct Branch {
    ProofFormula start;
    std::optional<CaseInfo> info;
  };

  struct CaseSplit {
    const ProofFormula& parent;
    RuleTag rule;
    std::vector<Branch> branches;
    std::set<Var> case_bound;
    std::uint32_t outer_limit;
  };

  bool left(const ProofFormula& pf, const Cont& k) {
    const std::uint32_t outer_limit = vars_.next_serial();
    if (pf.context.front().kind() == FormulaKind::kAtom) {
      CaseSplit cs{pf, RuleTag::kDefL, {}, {}, outer_limit};
      for (DefLBranch& b : defl_expand(pf, program_, vars_, options_.occurs_check)) {
        for (const auto& [v, unused] : b.unifier) cs.case_bound.insert(v);
        cs.branches.push_back(Branch{std::move(b.child), CaseInfo{b.clause, std::move(b.renaming), std::move(b.unifier)}});
      }
      return run_cases(cs, 0, Subst{}, {}, k);
    }

    LeftStep step = *step_left(pf, vars_);
    switch (step.rule) {
      case RuleTag::kBotL:
        return k(pf.sigma, make_node(pf, RuleTag::kBotL));
      case RuleTag::kOrL: {
        CaseSplit cs{pf, RuleTag::kOrL, {}, {}, outer_limit};
        for (auto& ctx : step.premises) cs.branches.push_back(Branch{{pf.sigma, std::move(ctx), pf.goal}, std::nullopt});
        return run_cases(cs, 0, Subst{}, {}, k);
      }
      default: {
        NodeMeta meta;
        if (step.fresh) {
          meta.fresh = step.fresh;
          meta.source_var = pf.context.front().bound_var();
        }
        const RuleTag rule = step.rule;
        return solve({pf.sigma, std::move(step.premises.front()), pf.goal},
                     [&](const Subst& out, const NodePtr& c) { return k(out, make_node(pf, rule, meta, {c})); });
      }
    }
  }

  // Case analysis: every branch must be proved. Logic variables that existed
  // before the split and that no case unifier binds must get one value across
  // all branches, so their bindings are carried from each branch to the next.
  bool run_cases(const CaseSplit& cs, std::size_t idx, const Subst& carry, std::vector<NodePtr> done,
                 const Cont& k) {
    if (idx == cs.branches.size()) {
      return k(compose(cs.parent.sigma, carry), make_node(cs.parent, cs.rule, {}, std::move(done)));
    }
    const Branch& b = cs.branches[idx];
    ProofFormula start = b.start;
    for (const auto& [v, t] : carry) {
      auto theta = unify(Term::variable(v), t, start.sigma, {options_.occurs_check, UnifyMode::kFlexible});
      if (!theta) return false;
      start.sigma = compose(start.sigma, *theta);
    }
    return solve(start, [&](const Subst& out, const NodePtr& c) {
      Subst next;
      for (const auto& [v, t] : out) {
        if (v.kind == VarKind::kLogic && v.serial < cs.outer_limit && !cs.parent.sigma.binds(v) &&
            !cs.case_bound.contains(v)) {
          next.insert(v, t);
        }
      }
      NodePtr child = c;
      if (b.info) {
        SearchNode tagged = *c;
        tagged.meta.case_info = b.info;
        child = std::make_shared<const SearchNode>(std::move(tagged));
      }
      std::vector<NodePtr> so_far = done;
      so_far.push_back(std::move(child));
      return run_cases(cs, idx + 1, next, std::move(so_far), k);
    });
  }

  bool right(const ProofFormula& pf, const Cont& k) {
    const Formula& goal = pf.goal;
    switch (goal.kind()) {
      case FormulaKind::kTop:
        return k(pf.sigma, make_node(pf, RuleTag::kTopR));
      case FormulaKind::kBot:
        return false;
      case FormulaKind::kAtom:
        return def_right(pf, k);
      case FormulaKind::kAnd:
        return solve({pf.sigma, {}, goal.left()}, [&](const Subst& s1, const NodePtr& c0) {
          return solve({s1, {}, goal.right()}, [&](const Subst& s2, const NodePtr& c1) {
            return k(s2, make_node(pf, RuleTag::kAndR, {}, {c0, c1}));
          });
        });
      case FormulaKind::kOr:
        for (int i = 0; i < 2; ++i) {
          const Formula& d = i == 0 ? goal.left() : goal.right();
          NodeMeta meta;
          meta.disjunct = i;
          if (solve({pf.sigma, {}, d}, [&](const Subst& out, const NodePtr& c) {
                return k(out, make_node(pf, RuleTag::kOrR, meta, {c}));
              })) {
            return true;
          }
        }
        return false;
      case FormulaKind::kImplies:
        return solve({pf.sigma, push_context(goal.left(), {}), goal.right()},
                     [&](const Subst& out, const NodePtr& c) { return k(out, make_node(pf, RuleTag::kImpR, {}, {c})); });
      case FormulaKind::kForall:
      case FormulaKind::kBlind:
      case FormulaKind::kExists: {
        const bool exists = goal.kind() == FormulaKind::kExists;
        const VarKind kind = exists ? VarKind::kLogic
                             : goal.kind() == FormulaKind::kForall ? VarKind::kEigen
                                                                   : VarKind::kBlindEigen;
        const RuleTag rule = exists ? RuleTag::kExistsR
                             : goal.kind() == FormulaKind::kForall ? RuleTag::kForallR
                                                                   : RuleTag::kBlindR;
        const Var y = vars_.fresh(goal.bound_var(), kind);
        const Term yt = Term::variable(y);
        return solve({pf.sigma, {}, goal.instantiate(yt)}, [&](const Subst& out, const NodePtr& c) {
          NodeMeta meta;
          meta.fresh = y;
          meta.source_var = goal.bound_var();
          if (exists) meta.witness = out.apply(yt);
          return k(out, make_node(pf, rule, std::move(meta), {c}));
        });
      }
    }
    return false;
  }

  bool def_right(const ProofFormula& pf, const Cont& k) {
    const Term& atom = pf.goal.atom();
    const PredicateKey key = predicate_of(atom);
    for (std::size_t i = 0; i < program_.clauses.size(); ++i) {
      const Clause& c = program_.clauses[i];
      if (predicate_of(c.head) != key) continue;
      Subst ren = rename_clause(c, vars_, VarKind::kLogic);
      auto theta = unify(atom, ren.apply(c.head), pf.sigma, {options_.occurs_check, UnifyMode::kRigidEigen});
      if (!theta) continue;
      NodeMeta meta;
      meta.clause = i;
      meta.renaming = ren;
      if (solve({compose(pf.sigma, *theta), {}, c.body.substitute(ren)}, [&](const Subst& out, const NodePtr& child) {
            return k(out, make_node(pf, RuleTag::kDefR, meta, {child}));
          })) {
        return true;
      }
    }
    return false;
  }

  const Program& program_;
  const ProverOptions& options_;
  VarSupply vars_;
  std::uint64_t steps_ = 0;
};

// A witness is pushed into the labels of its exists-R subtree only when its
// value is built from variables that existed before the witness itself.
bool settled_witness(const Var& w, const Term& t) {
  if (t.is_var() && t.var() == w) return false;
  std::vector<Var> vars;
  t.collect_vars(vars);
  for (const Var& v : vars) {
    if (!v.is_fresh() || v.serial >= w.serial) return false;
  }
  return true;
}

Subst with_witnesses(Subst sigma, const std::vector<std::pair<Var, Term>>& witnesses, bool occurs_check) {
  for (const auto& [w, t] : witnesses) {
    auto theta = unify(Term::variable(w), t, sigma, {occurs_check, UnifyMode::kFlexible});
    if (theta) sigma = compose(sigma, *theta);
  }
  return sigma;
}

// Lays the search tree out in post-order, first child first. Labels inside an
// exists-R subtree receive the witness binding, so each exists-R child reads
// sigma + {w -> t} with t the term the search settled on.
ProofTree flatten(const NodePtr& root, bool occurs_check) {
  struct Frame {
    const SearchNode* node;
    std::vector<std::pair<Var, Term>> witnesses;
    std::size_t next = 0;
    std::vector<std::size_t> child_positions;
  };
  ProofTree tree;
  std::vector<Frame> stack;
  stack.push_back(Frame{root.get(), {}, 0, {}});
  while (!stack.empty()) {
    Frame& top = stack.back();
    if (top.next < top.node->children.size()) {
      auto witnesses = top.witnesses;
      const SearchNode& n = *top.node;
      if (n.rule == RuleTag::kExistsR && n.meta.witness && settled_witness(*n.meta.fresh, *n.meta.witness)) {
        witnesses.emplace_back(*n.meta.fresh, *n.meta.witness);
      }
      const SearchNode* child = n.children[top.next++].get();
      stack.push_back(Frame{child, std::move(witnesses), 0, {}});
      continue;
    }
    const SearchNode& n = *top.node;
    ProofNode out{n.pf, {}, n.rule, n.meta};
    out.formula.sigma = with_witnesses(std::move(out.formula.sigma), top.witnesses, occurs_check);
    const std::size_t self = tree.nodes.size();
    for (std::size_t pos : top.child_positions) out.children.push_back(self - pos);
    tree.nodes.push_back(std::move(out));
    stack.pop_back();
    if (!stack.empty()) stack.back().child_positions.push_back(self);
  }
  return tree;
}

}  // namespace

ProveResult prove(const Program& program, const Formula& goal, const ProverOptions& options) {
  ProveResult result;
  detail::run_on_large_stack([&] {
    Search search(program, options);
    NodePtr found;
    try {
      const bool ok = search.solve(ProofFormula{{}, {}, goal}, [&](const Subst&, const NodePtr& root) {
        found = root;
        return true;
      });
      result.status = ok ? ProveStatus::kProved : ProveStatus::kNotProvable;
    } catch (const StepLimitReached&) {
      result.status = ProveStatus::kDepthExceeded;
    }
    result.steps = search.steps();
    if (found && result.status == ProveStatus::kProved) result.tree = flatten(found, options.occurs_check);
  });
  return result;
}

std::string format_listing(const ProofTree& tree) {
  std::string out;
  for (const ProofNode& n : tree.nodes) {
    const ProofFormula& pf = n.formula;
    out += pf.sigma.empty() ? "{}" : format(pf.sigma);
    out += ", ";
    if (pf.context.empty()) {
      out += "{}";
    } else {
      for (std::size_t i = 0; i < pf.context.size(); ++i) {
        if (i > 0) out += " : ";
        out += format(pf.context[i]);
      }
    }
    out += " |- " + format(pf.goal) + ", ";
    for (std::size_t d : n.children) out += std::to_string(d) + "::";
    out += "nil % ";
    out += to_string(n.rule);
    out += "\n";
  }
  return out;
}

}  // namespace lp01
