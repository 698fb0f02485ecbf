#pragma once

#include <cstdint>
#include <random>

namespace recur {

/// Per-stream seed: base seed XOR logical stream index. Streams are fixed
/// blocks of work, not threads, so results do not depend on worker count.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept {
  return base ^ stream;
}

/// 64-bit Mersenne Twister with a portable [0,1) conversion (the standard
/// distributions are implementation-defined and would break cross-platform
/// reproducibility).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// 53 random mantissa bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace recur
