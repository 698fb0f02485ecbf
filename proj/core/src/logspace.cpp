#include "recur/logspace.hpp"

namespace recur {

double log_add(double a, double b) noexcept {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

void LogSum::add(double log_term) noexcept {
  if (log_term == kNegInf) return;
  if (log_term > max_) {
    scaled_ = scaled_ * std::exp(max_ - log_term) + 1.0;
    max_ = log_term;
  } else {
    scaled_ += std::exp(log_term - max_);
  }
}

void LogSum::merge(const LogSum& other) noexcept {
  if (other.empty()) return;
  if (empty()) {
    *this = other;
    return;
  }
  if (other.max_ > max_) {
    scaled_ = scaled_ * std::exp(max_ - other.max_) + other.scaled_;
    max_ = other.max_;
  } else {
    scaled_ += other.scaled_ * std::exp(other.max_ - max_);
  }
}

double LogSum::log() const noexcept {
  if (empty()) return kNegInf;
  return max_ + std::log(scaled_);
}

}  // namespace recur
