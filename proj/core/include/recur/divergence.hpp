#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "recur/limits.hpp"
#include "recur/measure.hpp"

namespace recur {

/// Requested evaluation strategy. `closed` accepts closed forms and transfer
/// products but never falls back to enumeration.
enum class Method { automatic, enumeration, closed };

/// How a value was actually obtained.
enum class MethodTag { closed_form, transfer, enumeration };

std::string_view to_string(MethodTag tag) noexcept;
/// Accepts "auto", "enum", "closed"; throws usage otherwise.
Method parse_method(std::string_view text);

/// A rate that may be +infinity (when E(k) = 0). Serialized as "inf".
struct Rate {
  double value = 0.0;
  bool infinite = false;

  static Rate inf() noexcept { return {0.0, true}; }
  /// -(1/k) log E(k) from log E(k).
  static Rate from_log(double log_e, double k) noexcept;

  friend bool operator<(const Rate& a, const Rate& b) noexcept {
    if (a.infinite || b.infinite) return !a.infinite && b.infinite;
    return a.value < b.value;
  }
  friend bool operator==(const Rate& a, const Rate& b) noexcept {
    return a.infinite == b.infinite && (a.infinite || a.value == b.value);
  }
};

/// E(1..kmax) in the log domain.
struct DivergenceSeq {
  std::size_t kmax = 0;
  std::vector<double> log_values;  // index k-1
  std::vector<MethodTag> methods;

  [[nodiscard]] double log_value(std::size_t k) const { return k == 0 ? 0.0 : log_values.at(k - 1); }
  [[nodiscard]] double value(std::size_t k) const { return std::exp(log_value(k)); }
  [[nodiscard]] Rate rate(std::size_t k) const {
    return Rate::from_log(log_value(k), static_cast<double>(k));
  }
};

struct RateEstimate {
  std::size_t window_lo = 0;
  std::size_t window_hi = 0;
  Rate liminf_est;
  Rate limsup_est;
  std::optional<Rate> exact_rate;
  /// "closed_form", "spectral" or "renyi2" when exact_rate is set.
  std::string provenance;
};

struct RateReport {
  RateEstimate estimate;
  DivergenceSeq sequence;
};

/// The three evaluators below return log E(k).
///
/// Lexicographic enumeration of all k-words. Throws cap_exceeded and
/// alphabet_mismatch.
double divergence_enum(const Measure& mu, const Measure& nu, std::size_t k,
                       const Limits& limits = {});
/// E(1)^k; both measures must be iid (unsupported otherwise).
double divergence_iid(const Measure& mu, const Measure& nu, std::size_t k);
/// w^T H^(k-1) 1 with H = P_mu o P_nu and w = pi_mu o pi_nu; both markov.
double divergence_markov(const Measure& mu, const Measure& nu, std::size_t k);

/// E(1..kmax) with the method chosen per measure pair.
DivergenceSeq divergence_sequence(const Measure& mu, const Measure& nu, std::size_t kmax,
                                  Method method = Method::automatic, const Limits& limits = {});
/// log E(k).
double divergence(const Measure& mu, const Measure& nu, std::size_t k,
                  Method method = Method::automatic, const Limits& limits = {});

/// Rate sequence with window extrema over [kmax/2, kmax] and the exact rate
/// when a closed or spectral form applies.
RateReport divergence_rate(const Measure& mu, const Measure& nu, std::size_t kmax,
                           Method method = Method::automatic, const Limits& limits = {});

/// Closed-form or spectral limiting rate, if one applies.
std::optional<Rate> exact_rate(const Measure& mu, const Measure& nu);

/// Renyi entropy of order 2 (nats); iid or markov only.
double renyi2(const Measure& mu);

struct GapCheck {
  std::size_t i = 0;
  std::size_t g = 0;
  std::size_t j = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  [[nodiscard]] double slack() const noexcept { return rhs - lhs; }
};

inline constexpr double kGapTolerance = 1e-12;

/// RHS - LHS of the gap inequality E(i+g+j) <= sum over omega, zeta of
/// mu nu(omega and zeta at offset i+g). Throws invariant below -1e-12.
double check_gap_inequality(const Measure& mu, const Measure& nu, std::size_t i, std::size_t g,
                            std::size_t j, const Limits& limits = {});

/// Both sides for every (i, g, j) with i + g + j = k, 1 <= k <= kmax, from a
/// single enumeration per k. No tolerance check is applied.
std::vector<GapCheck> gap_inequality_table(const Measure& mu, const Measure& nu, std::size_t kmax,
                                           const Limits& limits = {});

/// Upper bound on sum_{m > m_max} E(m), when one can be certified.
std::optional<double> divergence_tail_bound(const Measure& mu, const Measure& nu,
                                            std::size_t m_max);

/// Lower bound on lim_k E(k).
double divergence_floor(const Measure& mu, const Measure& nu);

}  // namespace recur
