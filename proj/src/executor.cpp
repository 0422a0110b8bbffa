#include "lp01/executor.hpp"

#include <algorithm>
#include <cctype>

#include "large_stack.hpp"

namespace lp01 {

const std::string* InputSubst::lookup(const Var& v) const {
  auto it = bindings_.find(v);
  return it == bindings_.end() ? nullptr : &it->second;
}

Subst InputSubst::as_subst() const {
  Subst s;
  for (const auto& [v, c] : bindings_) s.insert(v, Term::constant(c));
  return s;
}

std::string_view to_string(ExecOutcome::Kind kind) {
  switch (kind) {
    case ExecOutcome::Kind::kSuccess: return "success";
    case ExecOutcome::Kind::kVacuous: return "vacuous";
    case ExecOutcome::Kind::kAborted: return "aborted";
  }
  return "?";
}

bool agrees(const InputSubst& input, const Subst& branch_sigma) {
  for (const auto& [v, c] : input) {
    const Term t = branch_sigma.apply(Term::variable(v));
    if (t.is_var()) continue;
    if (!t.is_const() || t.functor() != c) return false;
  }
  return true;
}

std::string report_witness(const ProofTree& tree, std::size_t exists_node, std::size_t executed_leaf,
                           const InputSubst& input) {
  const ProofNode& q = tree.nodes.at(exists_node);
  const Subst& leaf = tree.nodes.at(executed_leaf).formula.sigma;
  const Term value = input.as_subst().apply(leaf.apply(Term::variable(*q.meta.fresh)));
  return q.meta.source_var + " = " + (value.is_var() ? std::string("_ (any value)") : format(value));
}

ScriptedOracle::ScriptedOracle(std::vector<std::string> answers, std::function<void(const ExecEvent&)> sink)
    : answers_(std::move(answers)), sink_(std::move(sink)) {}

std::vector<std::string> ScriptedOracle::parse_script(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::optional<std::string> ScriptedOracle::request_constant(const ReadRequest& request) {
  requests_.push_back(request);
  if (next_ >= answers_.size()) return std::nullopt;
  return answers_[next_++];
}

void ScriptedOracle::emit(const ExecEvent& event) {
  events_.push_back(event);
  if (sink_) sink_(event);
}

namespace {

class Game {
 public:
  Game(const ProofTree& tree, InteractionOracle& oracle, const ExecOptions& options)
      : tree_(tree), oracle_(oracle), options_(options) {}

  ExecOutcome run() {
    if (!tree_.nodes.empty() && play(tree_.root_index(), InputSubst{}) && vacuous_) {
      outcome_.kind = ExecOutcome::Kind::kVacuous;
    }
    return std::move(outcome_);
  }

 private:
  bool abort(std::string reason) {
    outcome_.kind = ExecOutcome::Kind::kAborted;
    outcome_.reason = std::move(reason);
    return false;
  }

  // Prints every witness still waiting, taking its value from this leaf.
  void flush(std::size_t leaf, const InputSubst& input) {
    for (std::size_t q : pending_) {
      std::string text = report_witness(tree_, q, leaf, input);
      oracle_.emit(ExecEvent{ExecEvent::Kind::kPrint, text, q, RuleTag::kExistsR});
      outcome_.witnesses.push_back(std::move(text));
    }
    pending_.clear();
  }

  bool play(std::size_t i, InputSubst input) {
    const ProofNode& n = tree_.nodes[i];
    if (options_.trace) oracle_.emit(ExecEvent{ExecEvent::Kind::kNodeEntered, {}, i, n.rule});
    const std::vector<std::size_t> kids = tree_.child_indices(i);
    if (kids.empty()) {
      flush(i, input);
      return true;
    }
    switch (n.rule) {
      case RuleTag::kForallR: {
        const Var& y = *n.meta.fresh;
        ReadRequest req{i, n.meta.source_var, y.display(), n.formula.goal.span(), format(n.formula.goal)};
        std::optional<std::string> answer = oracle_.request_constant(req);
        if (!answer) return abort("no answer for " + n.meta.source_var);
        if (!is_constant_name(*answer)) return abort("'" + *answer + "' is not a constant");
        ++outcome_.reads;
        input.set(y, *answer);
        outcome_.chosen.set(y, *answer);
        return play(kids[0], std::move(input));
      }
      case RuleTag::kExistsR: {
        pending_.push_back(i);
        const bool ok = play(kids[0], input);
        // A witness whose subtree reached no leaf is not printed.
        pending_.erase(std::remove(pending_.begin(), pending_.end(), i), pending_.end());
        return ok;
      }
      case RuleTag::kDefL: {
        bool any = false;
        for (std::size_t k : kids) {
          if (!agrees(input, tree_.nodes[k].formula.sigma)) continue;
          any = true;
          if (!play(k, input)) return false;
        }
        if (!any && !vacuous_) {
          vacuous_ = true;
          const Term atom = n.formula.sigma.apply(n.formula.context.front().atom());
          outcome_.falsified_atom = atom;
          outcome_.falsified_instance = input.as_subst().apply(atom);
        }
        return true;
      }
      default:
        for (std::size_t k : kids) {
          if (!play(k, input)) return false;
        }
        return true;
    }
  }

  const ProofTree& tree_;
  InteractionOracle& oracle_;
  const ExecOptions& options_;
  ExecOutcome outcome_;
  std::vector<std::size_t> pending_;
  bool vacuous_ = false;
};

}  // namespace

ExecOutcome execute(const ProofTree& tree, InteractionOracle& oracle, const ExecOptions& options) {
  ExecOutcome out;
  detail::run_on_large_stack([&] { out = Game(tree, oracle, options).run(); });
  return out;
}

}  // namespace lp01
