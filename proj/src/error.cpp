#include "lp01/error.hpp"

namespace lp01 {

std::string to_string(SourceSpan span) {
  return std::to_string(span.line) + ":" + std::to_string(span.column);
}

namespace {

std::string parse_message(SourceSpan span, const std::string& message,
                          const std::vector<std::string>& expected) {
  std::string out = to_string(span) + ": " + message;
  if (!expected.empty()) {
    out += " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i > 0) out += i + 1 == expected.size() ? " or " : ", ";
      out += expected[i];
    }
    out += ")";
  }
  return out;
}

std::string close_message(SourceSpan span, const std::vector<std::string>& vars) {
  std::string out = to_string(span) + ": goal is not closed; free variable";
  if (vars.size() > 1) out += "s";
  for (std::size_t i = 0; i < vars.size(); ++i) out += (i ? ", " : " ") + vars[i];
  return out;
}

}  // namespace

ParseError::ParseError(SourceSpan span, std::string message, std::vector<std::string> expected)
    : Error(parse_message(span, message, expected)), span_(span), expected_(std::move(expected)) {}

CloseError::CloseError(SourceSpan span, std::vector<std::string> free_vars)
    : Error(close_message(span, free_vars)), span_(span), free_vars_(std::move(free_vars)) {}

LevelError::LevelError(SourceSpan span, std::string where, const std::string& reason)
    : Error(to_string(span) + ": level error in " + where + ": " + reason),
      span_(span),
      where_(std::move(where)) {}

}  // namespace lp01
