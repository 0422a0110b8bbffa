#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lp01 {

enum class VarKind : std::uint8_t {
  kSource,      // written in program text: clause variable or quantifier name
  kLogic,       // existential witness or renamed clause variable on the right
  kEigen,       // introduced by forall; the user supplies its value
  kBlindEigen,  // introduced by blind forall, exists-left or a defL renaming
};

std::string_view to_string(VarKind kind);

/// A variable. Source variables are identified by name; prover-fresh
/// variables by serial, which also orders them by creation time.
struct Var {
  std::string name;
  std::uint32_t serial = 0;
  std::uint32_t ordinal = 0;  // per-name counter, used for display only
  VarKind kind = VarKind::kSource;

  static Var source(std::string name) { return Var{std::move(name), 0, 0, VarKind::kSource}; }

  bool is_fresh() const noexcept { return kind != VarKind::kSource; }
  bool is_eigen() const noexcept {
    return kind == VarKind::kEigen || kind == VarKind::kBlindEigen;
  }

  /// `name` for source variables, `name_ordinal` (e.g. h_0) otherwise.
  std::string display() const;

  friend bool operator==(const Var& a, const Var& b) noexcept;
  friend std::strong_ordering operator<=>(const Var& a, const Var& b) noexcept;
};

/// True when `a` was created after `b`. Source variables count as newest.
bool newer_than(const Var& a, const Var& b) noexcept;

/// Immutable first-order term with shared structure. Copies are cheap.
class Term {
 public:
  enum class Kind : std::uint8_t { kVar, kConst, kApp };

  static Term variable(Var v);
  static Term constant(std::string name);
  /// An application with no arguments is a constant.
  static Term app(std::string functor, std::vector<Term> args);

  Kind kind() const noexcept;
  bool is_var() const noexcept { return kind() == Kind::kVar; }
  bool is_const() const noexcept { return kind() == Kind::kConst; }
  bool is_app() const noexcept { return kind() == Kind::kApp; }

  const Var& var() const;
  /// Constant name or functor.
  const std::string& functor() const;
  std::span<const Term> args() const;
  std::size_t arity() const noexcept;

  bool occurs(const Var& v) const;
  bool is_ground() const;
  /// Appends variables in left-to-right first-occurrence order, no duplicates.
  void collect_vars(std::vector<Var>& out) const;

  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Answer substitution kept in solved form: no variable of the domain occurs
/// in any range term, so applying once is the same as applying twice.
class Subst {
 public:
  using Map = std::map<Var, Term>;

  Subst() = default;
  Subst(std::initializer_list<std::pair<const Var, Term>> bindings);

  bool empty() const noexcept { return bindings_.empty(); }
  std::size_t size() const noexcept { return bindings_.size(); }
  const Term* lookup(const Var& v) const;
  bool binds(const Var& v) const { return bindings_.contains(v); }

  /// Adds v -> t (t taken as given). The caller keeps the solved form.
  void insert(Var v, Term t);
  void erase(const Var& v) { bindings_.erase(v); }

  Term apply(const Term& t) const;

  Map::const_iterator begin() const { return bindings_.begin(); }
  Map::const_iterator end() const { return bindings_.end(); }

  /// No domain variable occurs in a range term and nothing maps to itself.
  bool is_solved() const;

  friend bool operator==(const Subst&, const Subst&) = default;

 private:
  Map bindings_;
};

inline Term apply(const Subst& s, const Term& t) { return s.apply(t); }

/// Returns the substitution equivalent to applying `first` then `second`.
/// When `second` was computed under `first` the result stays solved.
Subst compose(const Subst& first, const Subst& second);

/// True iff `child` is an instance of `parent`: every binding of `parent`
/// still holds after resolving both sides through `child`.
bool extends(const Subst& child, const Subst& parent);

/// Issues fresh variables for one prover run.
class VarSupply {
 public:
  Var fresh(std::string_view hint, VarKind kind);
  Term fresh_term(std::string_view hint, VarKind kind) { return Term::variable(fresh(hint, kind)); }

  /// Serial the next fresh variable will receive.
  std::uint32_t next_serial() const noexcept { return serial_; }

 private:
  std::uint32_t serial_ = 0;
  std::map<std::string, std::uint32_t, std::less<>> ordinals_;
};

}  // namespace lp01
