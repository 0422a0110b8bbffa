#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lp01/syntax.hpp"
#include "lp01/term.hpp"

namespace lp01 {

/// The fourteen rules of the proof phase, numbered as in the rule table.
enum class RuleTag : std::uint8_t {
  kBotL = 1,
  kTopL = 2,
  kDefL = 3,
  kAndL = 4,
  kOrL = 5,
  kExistsL = 6,
  kTopR = 7,
  kDefR = 8,
  kAndR = 9,
  kOrR = 10,
  kImpR = 11,
  kForallR = 12,
  kBlindR = 13,
  kExistsR = 14,
};

std::string_view to_string(RuleTag rule);
std::optional<RuleTag> rule_from_string(std::string_view name);
bool is_left_rule(RuleTag rule);

/// Sequent label (sigma, P, D). The context is a stack: element 0 is its head.
struct ProofFormula {
  Subst sigma;
  std::vector<Formula> context;
  Formula goal = Formula::top();

  friend bool operator==(const ProofFormula&, const ProofFormula&) = default;
};

/// Pushes `g` onto `context`, dropping it when it is tt.
std::vector<Formula> push_context(const Formula& g, std::vector<Formula> context);

/// The case a defL child covers: which clause, its renaming, and the unifier.
struct CaseInfo {
  std::size_t clause = 0;
  Subst renaming;
  Subst unifier;

  friend bool operator==(const CaseInfo&, const CaseInfo&) = default;
};

/// Rule-specific data kept on a node so the tree can be re-checked.
struct NodeMeta {
  /// Variable introduced by a quantifier rule.
  std::optional<Var> fresh;
  /// Quantified name as written in the goal (the `y` of `exists y`).
  std::string source_var;
  /// exists-R only: the value the witness had when its subtree closed.
  std::optional<Term> witness;
  /// defR: the clause used and how it was renamed.
  std::optional<std::size_t> clause;
  Subst renaming;
  /// Set on every child of a defL node.
  std::optional<CaseInfo> case_info;
  /// or-R: which disjunct was proved.
  std::optional<int> disjunct;

  friend bool operator==(const NodeMeta&, const NodeMeta&) = default;
};

struct ProofNode {
  ProofFormula formula;
  /// Distances to the children, first child first (it lies farthest back).
  std::vector<std::size_t> children;
  RuleTag rule = RuleTag::kTopR;
  NodeMeta meta;

  friend bool operator==(const ProofNode&, const ProofNode&) = default;
};

/// Post-order list of nodes; the root is the last element.
struct ProofTree {
  std::vector<ProofNode> nodes;

  std::size_t root_index() const { return nodes.size() - 1; }
  const ProofNode& root() const { return nodes.back(); }
  std::vector<std::size_t> child_indices(std::size_t i) const;

  friend bool operator==(const ProofTree&, const ProofTree&) = default;
};

struct ProverOptions {
  static constexpr std::uint64_t kDefaultMaxSteps = 100000;

  std::uint64_t max_steps = kDefaultMaxSteps;
  bool occurs_check = true;
};

enum class ProveStatus : std::uint8_t { kProved, kNotProvable, kDepthExceeded };

std::string_view to_string(ProveStatus status);

struct ProveResult {
  ProveStatus status = ProveStatus::kNotProvable;
  std::optional<ProofTree> tree;
  std::uint64_t steps = 0;
};

/// Depth-first search with chronological backtracking. Left rules run first
/// and never create choice points; choice points are the clause order of
/// defR and the disjunct order of or-R. Returns the first proof found.
ProveResult prove(const Program& program, const Formula& goal, const ProverOptions& options = {});

/// Result of one left rule on the head of a non-empty context. `premises`
/// holds the new contexts; for defL it is empty and the branches come from
/// defl_expand, for bot-L it is empty because the sequent is closed.
struct LeftStep {
  RuleTag rule;
  std::vector<std::vector<Formula>> premises;
  std::optional<Var> fresh;
};

std::optional<LeftStep> step_left(const ProofFormula& pf, VarSupply& vars);

struct DefLBranch {
  std::size_t clause;
  Subst renaming;
  Subst unifier;
  ProofFormula child;
};

/// One branch per clause, in program order, whose renamed head unifies with
/// the atom at the head of `pf.context`. An empty result closes the sequent.
std::vector<DefLBranch> defl_expand(const ProofFormula& pf, const Program& program, VarSupply& vars,
                                    bool occurs_check = true);

struct Malformed {
  std::size_t index;
  std::string reason;
};

/// Re-checks tree shape, sigma monotonicity and every node's rule.
std::optional<Malformed> validate_tree(const ProofTree& tree, const Program& program);

/// One line per node in list order: `sigma, P |- D, children % rule`.
std::string format_listing(const ProofTree& tree);

}  // namespace lp01
