// Prints one PASS/FAIL line per acceptance criterion and exits non-zero if any fails.
#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include "cli.hpp"
#include "lp01/executor.hpp"
#include "lp01/tree_io.hpp"
#include "lp01/unify.hpp"
#include "support/fixtures.hpp"
#include "support/least_model.hpp"
#include "support/random_cases.hpp"

using namespace lp01;
using namespace lp01::testing;

namespace {

struct Check {
  std::string failure;
  void expect(bool ok, const std::string& what) {
    if (!ok && failure.empty()) failure = what;
  }
};

struct Cli {
  int code;
  std::string out;
};

Cli run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "lp01");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::istringstream in;
  std::ostringstream out, err;
  const int code = cli::main(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str()};
}

const std::string kEmpFile = std::string(LP01_SOURCE_DIR) + "/programs/emp.lp01";

std::string distances(const ProofTree& t) {
  std::string out;
  for (const ProofNode& n : t.nodes) {
    if (!out.empty()) out += ", ";
    if (n.children.empty()) out += "nil";
    for (std::size_t k = 0; k < n.children.size(); ++k) out += (k ? "::" : "") + std::to_string(n.children[k]);
  }
  return out;
}

void check_example_tree(Check& c) {
  const Program p = emp_program();
  const ProveResult r = prove(p, parse_goal(kWifeGoal));
  c.expect(r.status == ProveStatus::kProved, "goal not proved");
  if (!r.tree) return;
  const ProofTree& t = *r.tree;
  c.expect(t.nodes.size() == 9, "node count " + std::to_string(t.nodes.size()));
  c.expect(distances(t) == "nil, 1, 1, nil, 1, 1, 4::1, 1, 1", "distances " + distances(t));
  const Subst& tom = t.nodes[1].formula.sigma;
  const Subst& pete = t.nodes[4].formula.sigma;
  const Var& w_tom = *t.nodes[2].meta.fresh;
  const Var& w_pete = *t.nodes[5].meta.fresh;
  c.expect(binding(tom, "x_0") == "tom" && format(tom.apply(Term::variable(w_tom))) == "mary",
           "tom branch " + format(tom));
  c.expect(binding(pete, "x_0") == "pete" && format(pete.apply(Term::variable(w_pete))) == "ann",
           "pete branch " + format(pete));
  c.expect(!validate_tree(t, p), "tree does not validate");
}

void game(Check& c, const std::string& answer, const std::string& witness) {
  ScriptedOracle o({answer});
  const ExecOutcome out = execute(example_tree(), o);
  c.expect(out.kind == ExecOutcome::Kind::kSuccess, "outcome " + std::string(to_string(out.kind)));
  c.expect(o.requests().size() == 1, std::to_string(o.requests().size()) + " read requests");
  c.expect(out.witnesses == std::vector<std::string>{witness}, "witnesses differ");
  const Cli r = run_cli({"run", kEmpFile, "--goal", kWifeGoal, "--script", answer});
  c.expect(r.code == 0 && r.out == witness + "\nsuccess\n", "cli printed '" + r.out + "'");
}

void blind(Check& c) {
  ScriptedOracle o({});
  const ExecOutcome out = execute(prove_tree(emp_program(), kBlindGoal), o);
  c.expect(out.kind == ExecOutcome::Kind::kSuccess, "outcome " + std::string(to_string(out.kind)));
  c.expect(o.requests().empty(), "asked the user");
  c.expect(out.witnesses == std::vector<std::string>{"y = bob"}, "witnesses differ");
}

void vacuous(Check& c) {
  ScriptedOracle o({"john"});
  const ExecOutcome out = execute(example_tree(), o);
  c.expect(out.kind == ExecOutcome::Kind::kVacuous, "outcome " + std::string(to_string(out.kind)));
  c.expect(out.falsified_instance && format(*out.falsified_instance) == "emp(john)", "falsified atom");
  c.expect(out.witnesses.empty() && o.events().empty(), "printed something");
  const Cli r = run_cli({"run", kEmpFile, "--goal", kWifeGoal, "--script", "john"});
  c.expect(r.code == 0 && r.out.find("emp(john)") != std::string::npos, "cli printed '" + r.out + "'");
}

void oracle_agreement(Check& c, bool negated) {
  CaseGenerator gen(negated ? 8080 : 4242);
  int cases = 0;
  for (; cases < 150; ++cases) {
    const RandomCase rc = gen.level0();
    const Program p = parse_program(rc.program);
    const Formula g = parse_goal(rc.goal);
    const bool holds = LeastModel(p, {g}).holds(g);
    const Formula goal = negated ? Formula::implies(g, Formula::bot()) : g;
    const ProveResult r = prove(p, goal);
    const bool proved = r.status == ProveStatus::kProved;
    c.expect(r.status != ProveStatus::kDepthExceeded, "step limit on " + rc.goal);
    c.expect(proved == (negated ? !holds : holds), "disagreement on goal " + rc.goal + " for\n" + rc.program);
  }
}

void divergence(Check& c) {
  const auto start = std::chrono::steady_clock::now();
  const ProveResult r = prove(parse_program("p := p."), parse_goal("p"), {.max_steps = 1000});
  const auto ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  c.expect(r.status == ProveStatus::kDepthExceeded, "status " + std::string(to_string(r.status)));
  c.expect(ms < 1000, std::to_string(ms) + " ms");
}

std::string event_stream(const std::vector<ExecEvent>& events) {
  std::string out;
  for (const ExecEvent& e : events) out += std::to_string(static_cast<int>(e.kind)) + e.text + std::to_string(e.index) + ";";
  return out;
}

void invariants(Check& c) {
  TermGenerator terms(17);
  for (int i = 0; i < 1000; ++i) {
    const Subst under = terms.solved_subst();
    const Term a = terms.term();
    const Term b = i % 2 ? terms.term() : under.apply(a);
    if (auto theta = unify(a, b, under)) {
      const Subst s = compose(under, *theta);
      c.expect(s.apply(a) == s.apply(b), "mgu does not unify");
      c.expect(s.is_solved() && s.apply(s.apply(a)) == s.apply(a), "not idempotent");
    }
    const Var& v = terms.vars()[i % terms.vars().size()];
    c.expect(!unify(Term::variable(v), Term::app("f", {terms.term(1), Term::variable(v)})), "occurs check");
  }

  CaseGenerator gen(99);
  for (int i = 0; i < 200; ++i) {
    const RandomCase rc = i % 2 ? gen.level0() : gen.level1();
    const Program p = parse_program(rc.program);
    const ProveResult r = prove(p, parse_goal(rc.goal), {.max_steps = 20000});
    if (!r.tree) continue;
    const ProofTree& t = *r.tree;
    const auto bad = validate_tree(t, p);
    c.expect(!bad, "invalid tree for " + rc.goal + (bad ? ": " + bad->reason : ""));
    for (std::size_t n = 0; n < t.nodes.size(); ++n) {
      for (std::size_t k : t.child_indices(n)) {
        c.expect(extends(t.nodes[k].formula.sigma, t.nodes[n].formula.sigma), "sigma shrinks");
      }
    }
    const std::vector<std::string> answers{"a", "b", "c", "b", "a", "c"};
    ScriptedOracle first(answers), second(answers);
    execute(t, first, {.trace = true});
    execute(t, second, {.trace = true});
    c.expect(event_stream(first.events()) == event_stream(second.events()), "replay differs");
  }
}

void persistence(Check& c) {
  auto round_trip = [&](const Program& p, const ProofTree& t) {
    const std::string bytes = serialize_tree({program_hash(p), t});
    const TreeDocument back = deserialize_tree(bytes);
    c.expect(back.tree == t, "tree changed");
    c.expect(!validate_tree(back.tree, p), "reloaded tree does not validate");
    c.expect(serialize_tree(back) == bytes, "bytes changed");
  };
  round_trip(emp_program(), example_tree());
  CaseGenerator gen(5150);
  int trees = 0;
  for (int i = 0; trees < 50 && i < 2000; ++i) {
    const RandomCase rc = i % 2 ? gen.level0() : gen.level1();
    const Program p = parse_program(rc.program);
    const ProveResult r = prove(p, parse_goal(rc.goal), {.max_steps = 20000});
    if (!r.tree) continue;
    round_trip(p, *r.tree);
    ++trees;
  }
  c.expect(trees == 50, "only " + std::to_string(trees) + " random trees");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
      {"example proof tree: 9 nodes, distances nil,1,1,nil,1,1,4::1,1,1, branch answers", check_example_tree},
      {"game replay pete: one read, prints y = ann", [](Check& c) { game(c, "pete", "y = ann"); }},
      {"game replay tom: prints y = mary", [](Check& c) { game(c, "tom", "y = mary"); }},
      {"blind quantifier: no reads, prints y = bob", blind},
      {"vacuous case: john falsifies emp, nothing printed", vacuous},
      {"oracle equivalence on 150 random level-0 programs", [](Check& c) { oracle_agreement(c, false); }},
      {"finite failure proves G => ff exactly when G fails", [](Check& c) { oracle_agreement(c, true); }},
      {"divergence guard: p := p stops within 1000 steps", divergence},
      {"invariant suites: mgu, idempotence, occurs check, sigma growth, validation, replay", invariants},
      {"persistence: example tree and 50 random trees", persistence},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Check c;
    const auto start = std::chrono::steady_clock::now();
    try {
      run(c);
    } catch (const std::exception& e) {
      c.failure = std::string("exception: ") + e.what();
    }
    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    if (ms >= 5000 && c.failure.empty()) c.failure = "took " + std::to_string(ms) + " ms";
    if (c.failure.empty()) {
      std::cout << "PASS  " << name << " (" << ms << " ms)\n";
    } else {
      std::cout << "FAIL  " << name << ": " << c.failure << "\n";
      ++failed;
    }
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
