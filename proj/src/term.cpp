#include "lp01/term.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace lp01 {

std::string_view to_string(VarKind kind) {
  switch (kind) {
    case VarKind::kSource: return "source";
    case VarKind::kLogic: return "logic";
    case VarKind::kEigen: return "eigen";
    case VarKind::kBlindEigen: return "blind";
  }
  return "?";
}

std::string Var::display() const {
  if (!is_fresh()) return name;
  return name + "_" + std::to_string(ordinal);
}

bool operator==(const Var& a, const Var& b) noexcept {
  if (a.is_fresh() != b.is_fresh()) return false;
  return a.is_fresh() ? a.serial == b.serial : a.name == b.name;
}

std::strong_ordering operator<=>(const Var& a, const Var& b) noexcept {
  if (a.is_fresh() != b.is_fresh()) return a.is_fresh() ? std::strong_ordering::greater : std::strong_ordering::less;
  if (a.is_fresh()) return a.serial <=> b.serial;
  return a.name.compare(b.name) <=> 0;
}

bool newer_than(const Var& a, const Var& b) noexcept {
  if (a.is_fresh() != b.is_fresh()) return !a.is_fresh();
  if (!a.is_fresh()) return a.name > b.name;
  return a.serial > b.serial;
}

struct Term::Node {
  Kind kind;
  Var var;
  std::string name;
  std::vector<Term> args;
  bool ground;
};

Term Term::variable(Var v) {
  return Term(std::make_shared<const Node>(Node{Kind::kVar, std::move(v), {}, {}, false}));
}

Term Term::constant(std::string name) {
  return Term(std::make_shared<const Node>(Node{Kind::kConst, {}, std::move(name), {}, true}));
}

Term Term::app(std::string functor, std::vector<Term> args) {
  if (args.empty()) return constant(std::move(functor));
  const bool ground = std::all_of(args.begin(), args.end(), [](const Term& a) { return a.node_->ground; });
  return Term(std::make_shared<const Node>(Node{Kind::kApp, {}, std::move(functor), std::move(args), ground}));
}

Term::Kind Term::kind() const noexcept { return node_->kind; }

const Var& Term::var() const {
  if (node_->kind != Kind::kVar) throw std::logic_error("Term::var on non-variable");
  return node_->var;
}

const std::string& Term::functor() const {
  if (node_->kind == Kind::kVar) throw std::logic_error("Term::functor on variable");
  return node_->name;
}

std::span<const Term> Term::args() const { return node_->args; }

std::size_t Term::arity() const noexcept { return node_->args.size(); }

bool Term::occurs(const Var& v) const {
  if (node_->ground) return false;
  switch (node_->kind) {
    case Kind::kVar: return node_->var == v;
    case Kind::kConst: return false;
    case Kind::kApp:
      return std::any_of(node_->args.begin(), node_->args.end(),
                         [&](const Term& a) { return a.occurs(v); });
  }
  return false;
}

bool Term::is_ground() const { return node_->ground; }

void Term::collect_vars(std::vector<Var>& out) const {
  switch (node_->kind) {
    case Kind::kVar:
      if (std::find(out.begin(), out.end(), node_->var) == out.end()) out.push_back(node_->var);
      return;
    case Kind::kConst: return;
    case Kind::kApp:
      if (node_->ground) return;
      for (const Term& a : node_->args) a.collect_vars(out);
      return;
  }
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->kind != b.node_->kind || a.node_->ground != b.node_->ground) return false;
  switch (a.node_->kind) {
    case Term::Kind::kVar: return a.node_->var == b.node_->var;
    case Term::Kind::kConst: return a.node_->name == b.node_->name;
    case Term::Kind::kApp: return a.node_->name == b.node_->name && a.node_->args == b.node_->args;
  }
  return false;
}

Subst::Subst(std::initializer_list<std::pair<const Var, Term>> bindings) : bindings_(bindings) {}

const Term* Subst::lookup(const Var& v) const {
  auto it = bindings_.find(v);
  return it == bindings_.end() ? nullptr : &it->second;
}

void Subst::insert(Var v, Term t) { bindings_.insert_or_assign(std::move(v), std::move(t)); }

Term Subst::apply(const Term& t) const {
  if (bindings_.empty() || t.is_ground()) return t;
  switch (t.kind()) {
    case Term::Kind::kVar: {
      // One step suffices in solved form, and stays finite on the cyclic
      // bindings that unification without occurs check can produce.
      const Term* bound = lookup(t.var());
      return bound ? *bound : t;
    }
    case Term::Kind::kConst: return t;
    case Term::Kind::kApp: {
      std::vector<Term> args;
      args.reserve(t.arity());
      bool changed = false;
      for (const Term& a : t.args()) {
        args.push_back(apply(a));
        changed = changed || !(args.back() == a);
      }
      return changed ? Term::app(t.functor(), std::move(args)) : t;
    }
  }
  return t;
}

bool Subst::is_solved() const {
  for (const auto& [v, t] : bindings_) {
    if (t.is_var() && t.var() == v) return false;
    for (const auto& [w, unused] : bindings_) {
      if (t.occurs(w)) return false;
    }
  }
  return true;
}

Subst compose(const Subst& first, const Subst& second) {
  Subst out;
  for (const auto& [v, t] : first) {
    Term r = second.apply(t);
    if (r.is_var() && r.var() == v) continue;
    out.insert(v, std::move(r));
  }
  for (const auto& [v, t] : second) {
    if (!first.binds(v)) out.insert(v, t);
  }
  return out;
}

bool extends(const Subst& child, const Subst& parent) {
  for (const auto& [v, t] : parent) {
    if (!(child.apply(Term::variable(v)) == child.apply(t))) return false;
  }
  return true;
}

Var VarSupply::fresh(std::string_view hint, VarKind kind) {
  assert(kind != VarKind::kSource);
  auto it = ordinals_.find(hint);
  if (it == ordinals_.end()) it = ordinals_.emplace(std::string(hint), 0).first;
  Var v{std::string(hint), serial_++, it->second++, kind};
  return v;
}

}  // namespace lp01
