#pragma once

#include <cstddef>
#include <functional>

namespace lp01::detail {

/// Runs `fn` to completion on a thread with a `bytes`-sized stack and
/// rethrows anything it throws. Proof search and tree replay recurse once per
/// rule application, so their depth follows the step limit.
void run_on_large_stack(const std::function<void()>& fn, std::size_t bytes = std::size_t{1} << 30);

}  // namespace lp01::detail
