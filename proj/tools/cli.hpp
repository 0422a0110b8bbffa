#pragma once

#include <iosfwd>

namespace lp01::cli {

enum ExitCode : int {
  kOk = 0,
  kNotProvable = 1,
  kUsage = 2,
  kDepthExceeded = 3,
  kAborted = 4,
};

/// Entry point behind the `lp01` binary. Results go to `out`, diagnostics and
/// prompts to `err`; interactive answers are read from `in`.
int main(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace lp01::cli
