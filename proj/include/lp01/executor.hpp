#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lp01/prover.hpp"

namespace lp01 {

/// Input substitution: constants the user typed for forall-introduced
/// variables.
class InputSubst {
 public:
  void set(const Var& v, std::string constant) { bindings_.insert_or_assign(v, std::move(constant)); }
  const std::string* lookup(const Var& v) const;
  bool empty() const { return bindings_.empty(); }
  std::size_t size() const { return bindings_.size(); }
  std::map<Var, std::string>::const_iterator begin() const { return bindings_.begin(); }
  std::map<Var, std::string>::const_iterator end() const { return bindings_.end(); }

  Subst as_subst() const;

  friend bool operator==(const InputSubst&, const InputSubst&) = default;

 private:
  std::map<Var, std::string> bindings_;
};

/// What the executor asks of the user at a forall node.
struct ReadRequest {
  std::size_t node = 0;
  std::string variable;   // as written in the goal, e.g. "x"
  std::string generated;  // the proof's name for it, e.g. "x_0"
  SourceSpan span;        // of the quantifier, when known
  std::string goal;       // the quantified goal, formatted
};

struct ExecEvent {
  enum class Kind : std::uint8_t { kPrint, kNodeEntered };

  Kind kind = Kind::kPrint;
  std::string text;
  std::size_t index = 0;
  RuleTag rule = RuleTag::kTopR;
};

class InteractionOracle {
 public:
  virtual ~InteractionOracle() = default;
  /// One constant per request; nullopt means the user went away.
  virtual std::optional<std::string> request_constant(const ReadRequest& request) = 0;
  virtual void emit(const ExecEvent& event) = 0;
};

struct ExecOutcome {
  enum class Kind : std::uint8_t { kSuccess, kVacuous, kAborted };

  Kind kind = Kind::kSuccess;
  /// Every printed binding, in emission order.
  std::vector<std::string> witnesses;
  /// kVacuous: the left atom the user's choice falsified, before and after
  /// applying the input substitution.
  std::optional<Term> falsified_atom;
  std::optional<Term> falsified_instance;
  InputSubst chosen;
  /// kAborted
  std::string reason;
  std::size_t reads = 0;
};

std::string_view to_string(ExecOutcome::Kind kind);

struct ExecOptions {
  /// Emit a kNodeEntered event for every node the game visits.
  bool trace = false;
};

/// Answers read requests from a fixed list, in order. Running out of answers
/// is a disconnect; answers left over are reported through `unused()`.
class ScriptedOracle : public InteractionOracle {
 public:
  explicit ScriptedOracle(std::vector<std::string> answers,
                          std::function<void(const ExecEvent&)> sink = {});

  /// Splits `a, b c` on commas and whitespace.
  static std::vector<std::string> parse_script(std::string_view text);

  std::optional<std::string> request_constant(const ReadRequest& request) override;
  void emit(const ExecEvent& event) override;

  std::size_t unused() const { return answers_.size() - next_; }
  const std::vector<ReadRequest>& requests() const { return requests_; }
  const std::vector<ExecEvent>& events() const { return events_; }

 private:
  std::vector<std::string> answers_;
  std::size_t next_ = 0;
  std::function<void(const ExecEvent&)> sink_;
  std::vector<ReadRequest> requests_;
  std::vector<ExecEvent> events_;
};

/// Replays a proof tree from the root. Reads a constant at each forall node,
/// prints witnesses for exists nodes once an executed leaf fixes them, and at
/// defL nodes continues into every case that agrees with the input so far.
ExecOutcome execute(const ProofTree& tree, InteractionOracle& oracle, const ExecOptions& options = {});

/// For every v -> c in `input`, `branch_sigma` maps v to c or leaves it a
/// variable.
bool agrees(const InputSubst& input, const Subst& branch_sigma);

/// `y = ann`, or `y = _ (any value)` when the witness was never bound.
std::string report_witness(const ProofTree& tree, std::size_t exists_node, std::size_t executed_leaf,
                           const InputSubst& input);

}  // namespace lp01
