#pragma once

#include <string>

#include "lp01/prover.hpp"

namespace lp01::testing {

inline constexpr const char* kEmpProgram = R"(emp(tom) := tt.
emp(pete) := tt.
boss(tom,bob) := tt.
boss(pete,bob) := tt.
wife(tom,mary) := tt.
wife(pete,ann) := tt.
wife(john,sue) := tt.
)";

inline constexpr const char* kWifeGoal = "forall x. emp(x) => exists y. wife(x,y)";
inline constexpr const char* kBlindGoal = "exists y. blind x. emp(x) => boss(x,y)";

inline Program emp_program() { return parse_program(kEmpProgram); }

inline ProofTree prove_tree(const Program& p, const std::string& goal) {
  ProveResult r = prove(p, parse_goal(goal));
  if (!r.tree) throw Error("expected a proof of " + goal);
  return std::move(*r.tree);
}

inline ProofTree example_tree() { return prove_tree(emp_program(), kWifeGoal); }

/// The value `name` is bound to in `s`, looked up by display name.
inline std::string binding(const Subst& s, const std::string& name) {
  for (const auto& [v, t] : s) {
    if (v.display() == name) return format(t);
  }
  return "";
}

}  // namespace lp01::testing
