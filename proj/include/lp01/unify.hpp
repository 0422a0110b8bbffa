#pragma once

#include <optional>

#include "lp01/term.hpp"

namespace lp01 {

enum class UnifyMode : std::uint8_t {
  /// Every variable may be bound. Used for case analysis on the left.
  kFlexible,
  /// Eigenvariables behave like constants, and a logic variable may only be
  /// bound to eigenvariables created before it. Used for goals on the right.
  kRigidEigen,
};

struct UnifyOptions {
  bool occurs_check = true;
  UnifyMode mode = UnifyMode::kFlexible;
};

/// Most general unifier of `a` and `b` under `under`.
///
/// Returns only the new bindings, in solved form relative to `under`, so
/// `compose(under, *result)` is the extended answer substitution. When two
/// variables meet, the newer one is bound to the older one. Returns nullopt on
/// a clash, an occurs-check violation, or (rigid mode) an eigenvariable
/// constraint violation.
std::optional<Subst> unify(const Term& a, const Term& b, const Subst& under = {},
                           UnifyOptions options = {});

}  // namespace lp01
