#include "recur/limits.hpp"

#include <cstdlib>
#include <limits>
#include <string>

#include "recur/error.hpp"

namespace recur {
namespace {

std::uint64_t env_number(const char* name, std::uint64_t fallback) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return fallback;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0' || value == 0) {
    throw Error(ErrorKind::usage, std::string(name) + " must be a positive integer, got '" + raw + "'");
  }
  return value;
}

std::string describe_count(std::size_t base, std::size_t exponent) {
  return std::to_string(base) + "^" + std::to_string(exponent);
}

}  // namespace

Limits Limits::from_environment() {
  Limits limits;
  limits.workers = static_cast<unsigned>(env_number("RECUR_WORKERS", limits.workers));
  limits.enumeration_cap = env_number("RECUR_ENUM_CAP", limits.enumeration_cap);
  return limits;
}

std::uint64_t saturating_pow(std::size_t base, std::size_t exponent) noexcept {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t result = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (base != 0 && result > kMax / base) return kMax;
    result *= base;
  }
  return result;
}

std::uint64_t checked_word_count(std::size_t base, std::size_t exponent,
                                 const Limits& limits, std::string_view what) {
  const std::uint64_t count = saturating_pow(base, exponent);
  if (count > limits.enumeration_cap) {
    throw Error(ErrorKind::cap_exceeded,
                std::string(what) + ": enumerating " + describe_count(base, exponent) +
                    " words exceeds the cap of " + std::to_string(limits.enumeration_cap));
  }
  return count;
}

}  // namespace recur
