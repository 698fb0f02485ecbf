#pragma once

#include <cmath>
#include <limits>

namespace recur {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

/// log(exp(a) + exp(b)) without overflow or underflow.
double log_add(double a, double b) noexcept;

/// Safe log: log(0) is -inf rather than a domain error.
inline double safe_log(double x) noexcept { return x > 0.0 ? std::log(x) : kNegInf; }

/// Streaming log-sum-exp. Terms are accumulated relative to the running
/// maximum, so the result is independent of scale but does depend on the
/// order of `add` calls; callers that need bit-reproducibility fix the order.
class LogSum {
 public:
  void add(double log_term) noexcept;
  void merge(const LogSum& other) noexcept;

  [[nodiscard]] double log() const noexcept;
  [[nodiscard]] double value() const noexcept { return std::exp(log()); }
  [[nodiscard]] bool empty() const noexcept { return max_ == kNegInf; }

 private:
  double max_ = kNegInf;
  double scaled_ = 0.0;
};

}  // namespace recur
