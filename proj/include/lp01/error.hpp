#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lp01 {

/// 1-based position in program or goal text. A zero line means "unknown".
struct SourceSpan {
  std::uint32_t line = 0;
  std::uint32_t column = 0;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

std::string to_string(SourceSpan span);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(SourceSpan span, std::string message,
             std::vector<std::string> expected = {});

  SourceSpan span() const { return span_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  SourceSpan span_;
  std::vector<std::string> expected_;
};

/// A goal mentions variables that no quantifier binds.
class CloseError : public Error {
 public:
  CloseError(SourceSpan span, std::vector<std::string> free_vars);

  SourceSpan span() const { return span_; }
  const std::vector<std::string>& free_vars() const { return free_vars_; }

 private:
  SourceSpan span_;
  std::vector<std::string> free_vars_;
};

/// The level-0/level-1 discipline is violated. `where` names the clause or
/// subformula at fault.
class LevelError : public Error {
 public:
  LevelError(SourceSpan span, std::string where, const std::string& reason);

  SourceSpan span() const { return span_; }
  const std::string& where() const { return where_; }

 private:
  SourceSpan span_;
  std::string where_;
};

}  // namespace lp01
