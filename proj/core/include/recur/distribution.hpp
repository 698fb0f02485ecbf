#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "recur/limits.hpp"
#include "recur/measure.hpp"

namespace recur {

/// Exact law of n - T for T the shortest path between independent
/// mu- and nu-prefixes of length n.
struct DistributionTable {
  std::size_t n = 0;
  /// tail[k] = P(n - T >= k) for k = 0..n; tail[0] = 1 and tail[n] = 0.
  std::vector<double> tail;
  /// pmf[t] = P(T = t) for t = 1..n; pmf[0] is unused and 0.
  std::vector<double> pmf;
  double avoiding_mass = 0.0;
  /// Per k = 1..n-1: E(k) and a_{k,n} (empty for brute-force tables).
  std::vector<double> divergence;
  std::vector<double> a_coeff;
  std::vector<std::string> warnings;
};

/// S[m][f]: mu nu mass of m-words whose longest proper border is f,
/// m = 1..max_len, f = 0..m-1. One pruned depth-first pass.
struct BorderMassTable {
  std::size_t max_len = 0;
  std::vector<std::vector<double>> mass;

  /// Sum of S[m][f] over f.
  [[nodiscard]] double total(std::size_t m) const;
  /// Mass of m-words with no border length in [k, m-1].
  [[nodiscard]] double below(std::size_t m, std::size_t k) const;
};

BorderMassTable border_mass_table(const Measure& mu, const Measure& nu, std::size_t max_len,
                                  const Limits& limits = {});

/// a_{k,n} for k = 1..n-1 (index k; index 0 unused).
std::vector<double> a_coefficients(const Measure& mu, const Measure& nu, std::size_t n,
                                   const Limits& limits = {});
double a_coeff(const Measure& mu, const Measure& nu, std::size_t k, std::size_t n,
               const Limits& limits = {});

/// tail(k) = E(k) + a_{k,n}. Warns (does not fail) when nu's complete
/// grammar is unverifiable or either measure is not stationary. Throws
/// invariant when differencing loses more than 1e-10 of mass.
DistributionTable law_exact(const Measure& mu, const Measure& nu, std::size_t n,
                            const Limits& limits = {});

/// All pairs of n-words weighted by mu(x) nu(y), binned by shortest path.
DistributionTable law_bruteforce(const Measure& mu, const Measure& nu, std::size_t n,
                                 const Limits& limits = {});

/// max over t of |pmf_a(t) - pmf_b(t)| and over k of the tail difference.
double max_discrepancy(const DistributionTable& a, const DistributionTable& b);

struct LimitReport {
  std::size_t k = 0;
  std::size_t m_max = 0;
  double divergence = 0.0;
  /// E(k) + sum_{m=k+1}^{m_max} of the a_k summands.
  double partial_tail = 0.0;
  /// Upper bound on the neglected summands; empty when none can be certified.
  std::optional<double> truncation_bound;
  /// Lower bound on P(n - T = infinity) in the limit.
  double defect_lower_bound = 0.0;
  /// The limit is a proper distribution and the truncation is controlled.
  bool certified = false;
};

LimitReport law_limit(const Measure& mu, const Measure& nu, std::size_t k, std::size_t m_max,
                      const Limits& limits = {});

/// P(T = n) = 1 - E(1) - a_{1,n}.
double avoiding_pairs_prob(const Measure& mu, const Measure& nu, std::size_t n,
                           const Limits& limits = {});

}  // namespace recur
