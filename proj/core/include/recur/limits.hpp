#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace recur {

/// Resource bounds shared by every enumerating operation.
struct Limits {
  static constexpr std::uint64_t kDefaultCap = std::uint64_t{1} << 26;

  std::uint64_t enumeration_cap = kDefaultCap;
  unsigned workers = 1;

  /// Defaults overridden by RECUR_WORKERS and RECUR_ENUM_CAP.
  static Limits from_environment();
};

/// Returns base^exponent, or throws cap_exceeded when it exceeds the cap.
/// `what` names the enumeration in the error message.
std::uint64_t checked_word_count(std::size_t base, std::size_t exponent,
                                 const Limits& limits, std::string_view what);

/// base^exponent saturated at UINT64_MAX.
std::uint64_t saturating_pow(std::size_t base, std::size_t exponent) noexcept;

}  // namespace recur
