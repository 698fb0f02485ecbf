#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace recur {

enum class ErrorKind {
  usage,
  parse,
  alphabet_mismatch,
  length_mismatch,
  cap_exceeded,
  invariant,
  unsupported,
  degenerate,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind; the CLI maps kinds
/// onto its exit-code contract.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace recur
