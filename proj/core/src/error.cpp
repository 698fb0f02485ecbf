#include "recur/error.hpp"

namespace recur {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::usage: return "usage";
    case ErrorKind::parse: return "parse";
    case ErrorKind::alphabet_mismatch: return "alphabet_mismatch";
    case ErrorKind::length_mismatch: return "length_mismatch";
    case ErrorKind::cap_exceeded: return "cap_exceeded";
    case ErrorKind::invariant: return "invariant";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::degenerate: return "degenerate";
  }
  return "unknown";
}

}  // namespace recur
