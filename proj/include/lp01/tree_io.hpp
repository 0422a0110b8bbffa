#pragma once

#include <string>
#include <string_view>

#include "lp01/error.hpp"
#include "lp01/prover.hpp"

namespace lp01 {

class TreeFormatError : public Error {
 public:
  enum class Kind : std::uint8_t { kVersionMismatch, kCorrupt };

  TreeFormatError(Kind kind, const std::string& message) : Error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

inline constexpr int kTreeFormatVersion = 1;

struct TreeDocument {
  std::string program_hash;
  ProofTree tree;

  friend bool operator==(const TreeDocument&, const TreeDocument&) = default;
};

/// `fnv1a64:<16 hex digits>` over the program's canonical text.
std::string program_hash(const Program& program);

/// JSON text, byte-identical for equal documents.
std::string serialize_tree(const TreeDocument& doc);
/// Throws TreeFormatError.
TreeDocument deserialize_tree(std::string_view bytes);

}  // namespace lp01
