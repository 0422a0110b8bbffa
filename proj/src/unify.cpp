#include "lp01/unify.hpp"

#include <utility>
#include <vector>

namespace lp01 {
namespace {

class Unifier {
 public:
  Unifier(const Subst& under, UnifyOptions options) : under_(under), options_(options) {}

  bool run(const Term& a, const Term& b) {
    pending_.emplace_back(under_.apply(a), under_.apply(b));
    while (!pending_.empty()) {
      auto [l, r] = std::move(pending_.back());
      pending_.pop_back();
      if (!step(theta_.apply(l), theta_.apply(r))) return false;
    }
    return options_.mode != UnifyMode::kRigidEigen || respects_eigen_order();
  }

  Subst take() { return std::move(theta_); }

 private:
  bool bindable(const Var& v) const {
    return options_.mode == UnifyMode::kFlexible || !v.is_eigen();
  }

  bool step(const Term& l, const Term& r) {
    if (l == r) return true;
    if (l.is_var() && r.is_var()) {
      const Var& x = l.var();
      const Var& y = r.var();
      const bool bx = bindable(x);
      const bool by = bindable(y);
      if (bx && by) return newer_than(x, y) ? bind(x, r) : bind(y, l);
      if (bx) return bind(x, r);
      if (by) return bind(y, l);
      return false;
    }
    if (l.is_var()) return bindable(l.var()) && bind(l.var(), r);
    if (r.is_var()) return bindable(r.var()) && bind(r.var(), l);
    if (l.functor() != r.functor() || l.arity() != r.arity()) return false;
    auto la = l.args();
    auto ra = r.args();
    for (std::size_t i = la.size(); i-- > 0;) pending_.emplace_back(la[i], ra[i]);
    return true;
  }

  bool bind(const Var& v, const Term& t) {
    if (options_.occurs_check && t.occurs(v)) return false;
    Subst single;
    single.insert(v, t);
    theta_ = compose(theta_, single);
    return true;
  }

  // Every logic variable whose value this unification changed may only
  // mention eigenvariables that are older than itself.
  bool respects_eigen_order() const {
    Subst combined = compose(under_, theta_);
    std::vector<Var> vars;
    for (const auto& [v, t] : combined) {
      if (v.kind != VarKind::kLogic) continue;
      const Term* before = under_.lookup(v);
      if (before && *before == t) continue;
      vars.clear();
      t.collect_vars(vars);
      for (const Var& w : vars) {
        if (w.is_eigen() && w.serial > v.serial) return false;
      }
    }
    return true;
  }

  const Subst& under_;
  UnifyOptions options_;
  Subst theta_;
  std::vector<std::pair<Term, Term>> pending_;
};

}  // namespace

std::optional<Subst> unify(const Term& a, const Term& b, const Subst& under, UnifyOptions options) {
  Unifier u(under, options);
  if (!u.run(a, b)) return std::nullopt;
  return u.take();
}

}  // namespace lp01
