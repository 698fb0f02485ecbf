#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "recur/divergence.hpp"
#include "recur/limits.hpp"
#include "recur/measure.hpp"
#include "recur/overlap.hpp"

namespace recur {

/// Shared configuration for the Monte Carlo and bound drivers.
struct ExperimentConfig {
  std::optional<Measure> mu;
  std::optional<Measure> nu;
  /// Strictly increasing prefix lengths.
  std::vector<std::size_t> schedule;
  std::size_t samples = 10000;
  std::vector<double> epsilons{0.05, 0.1, 0.2, 0.4};
  std::uint64_t seed = 1;
  /// Concentration threshold: reports P(T_n / n < threshold).
  double threshold = 0.9;

  /// Throws usage when an invariant fails or a measure is missing.
  void validate() const;
};

/// Samples per logical stream; seeds derive from (base seed, stream).
inline constexpr std::size_t kSamplesPerStream = 512;

/// Stream index for block b of schedule entry i.
constexpr std::uint64_t stream_index(std::size_t entry, std::size_t block) noexcept {
  return (static_cast<std::uint64_t>(entry) << 32U) | static_cast<std::uint64_t>(block);
}

struct ConcentrationRow {
  std::size_t n = 0;
  std::size_t samples = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double min = 0.0;
  double q05 = 0.0;
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
  double q95 = 0.0;
  double max = 0.0;
  /// Empirical P(T_n / n < threshold) and its standard error.
  double frac_below = 0.0;
  double frac_below_se = 0.0;
  /// sum_{j = ceil((1 - threshold) n)}^{n-1} E(j), when E has a closed form.
  std::optional<double> exact_bound;
};

struct ConcentrationReport {
  double threshold = 0.9;
  std::vector<ConcentrationRow> rows;
  std::vector<std::string> warnings;
};

ConcentrationReport concentration_experiment(const ExperimentConfig& cfg,
                                             const Limits& limits = {});

/// ceil(n * eps) with a guard against representation error.
std::size_t ldp_index(std::size_t n, double eps);

struct LdpPoint {
  double epsilon = 0.0;
  std::size_t k = 0;
  Rate lower_rate;
  Rate upper_rate;
  /// epsilon R when the exact rate is known.
  std::optional<Rate> reference;
};

struct LdpCurve {
  std::size_t n = 0;
  std::optional<Rate> rate;
  std::vector<LdpPoint> points;
};

/// Finite-n rate bounds from E(ceil(n eps)) <= P(T/n < 1 - eps) <=
/// sum_{j >= ceil(n eps)} E(j). Needs a closed or transfer form for E.
LdpPoint ldp_bounds(const Measure& mu, const Measure& nu, double epsilon, std::size_t n);
LdpCurve ldp_curve(const Measure& mu, const Measure& nu, const std::vector<double>& epsilons,
                   std::size_t n);

struct NonconvergenceRow {
  std::size_t k = 0;
  std::size_t hits = 0;
  std::size_t agree = 0;
  double frequency = 0.0;
  double std_error = 0.0;
};

struct NonconvergenceReport {
  std::size_t n = 0;
  std::size_t samples = 0;
  double e1 = 0.0;
  /// P_hat(T_{n+1} = T_n) with its standard error.
  double p_same = 0.0;
  double p_same_se = 0.0;
  /// P_hat(T_n < n).
  double p_overlap = 0.0;
  std::vector<NonconvergenceRow> rows;
};

NonconvergenceReport nonconvergence_probe(const Measure& mu, const Measure& nu, std::size_t n,
                                          std::size_t samples, std::uint64_t seed,
                                          const Limits& limits = {});

struct BlockEndRate {
  std::size_t k = 0;
  Symbol symbol = 0;
  Rate rate;
};

struct OscillationReport {
  double p = 0.0;
  RateReport rates;
  /// Rates at the last position of every block within [1, kmax].
  std::vector<BlockEndRate> block_ends;
};

/// mu concentrated on the blocks sequence, nu Bernoulli(p).
OscillationReport rate_oscillation_demo(double p, std::size_t kmax);

/// Smallest g in [0, g_max] such that omega gap xi is admissible for some
/// gap word of length g.
std::optional<std::size_t> vwsp_gap(const Word& omega, const Word& xi,
                                    const AdmissibilityOracle& oracle, std::size_t g_max,
                                    const Limits& limits = {});
/// Same search with support membership under m, evaluated incrementally.
std::optional<std::size_t> vwsp_gap(const Measure& m, const Word& omega, const Word& xi,
                                    std::size_t g_max, const Limits& limits = {});

struct VwspProfile {
  std::size_t n = 0;
  std::size_t pairs = 0;
  std::size_t not_found = 0;
  std::size_t max_gap = 0;
  /// One pair attaining max_gap.
  std::vector<Symbol> worst_omega;
  std::vector<Symbol> worst_xi;
};

/// Minimal gaps over every pair of admissible n-words.
VwspProfile vwsp_profile(const Measure& m, std::size_t n, std::size_t g_max,
                         const Limits& limits = {});

}  // namespace recur
