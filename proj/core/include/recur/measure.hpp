#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "recur/alphabet.hpp"
#include "recur/limits.hpp"
#include "recur/logspace.hpp"
#include "recur/matrix.hpp"
#include "recur/rng.hpp"

namespace recur {

enum class MeasureKind { iid, markov, dirac, mixture, renewal };

std::string_view to_string(MeasureKind kind) noexcept;

/// Probability of a cylinder, carried in the log domain. Values below
/// e^-700 are only meaningful through `log_prob`.
struct CylinderProb {
  static constexpr double kLinearFloor = -700.0;

  double log_prob = kNegInf;

  [[nodiscard]] bool positive() const noexcept { return log_prob != kNegInf; }
  [[nodiscard]] bool log_only() const noexcept { return positive() && log_prob < kLinearFloor; }
  [[nodiscard]] double prob() const noexcept { return log_prob < kLinearFloor ? 0.0 : std::exp(log_prob); }
};

/// Incremental cylinder probabilities for depth-first enumeration: push
/// extends the current word by one symbol, pop removes the last one.
class PrefixEvaluator {
 public:
  virtual ~PrefixEvaluator() = default;
  virtual void push(Symbol s) = 0;
  virtual void pop() = 0;
  /// Log-probability of the current word; 0 for the empty word.
  [[nodiscard]] virtual double log_prob() const = 0;
  [[nodiscard]] virtual std::size_t depth() const = 0;
};

class Measure;

struct IidModel {
  std::vector<double> probs;
  std::vector<double> log_probs;
  std::vector<double> cumulative;
};

struct MarkovModel {
  Matrix transition;
  std::vector<double> stationary;
  Matrix log_transition;
  std::vector<double> log_stationary;
  std::vector<double> stationary_cumulative;
  Matrix cumulative;
  /// ||pi P - pi||_1 after construction.
  double stationary_residual = 0.0;
};

struct DiracModel {
  enum class Pattern { periodic, blocks };

  Pattern pattern = Pattern::periodic;
  /// One period of the sequence (periodic pattern only).
  std::vector<Symbol> period;

  /// x_i of the sequence the measure is concentrated on.
  [[nodiscard]] Symbol symbol_at(std::uint64_t i) const noexcept;
};

struct RenewalModel {
  /// Branch probabilities q_0..q_{y_max}; q_{y_max} is 0.
  std::vector<double> q;
  /// Stationary law of the hidden chain, proportional to prod_{i<y} q_i.
  std::vector<double> stationary;
  std::vector<double> stationary_cumulative;

  [[nodiscard]] std::size_t y_max() const noexcept { return q.size() - 1; }
};

struct MixtureModel;

/// A stationary process model over a finite alphabet. Immutable; copies share
/// state and may be used from any number of threads.
class Measure {
 public:
  static constexpr std::size_t kDefaultYMax = 4096;

  /// Throws invariant unless probs is a probability vector over the alphabet.
  static Measure iid(Alphabet alphabet, std::vector<double> probs);
  /// Over {0,1} with P(1) = p.
  static Measure bernoulli(double p);
  static Measure uniform(Alphabet alphabet);
  /// Rejects non-stochastic or reducible transition matrices; the stationary
  /// vector is computed here.
  static Measure markov(Alphabet alphabet, Matrix transition);
  /// Concentrated on the periodic sequence period period period ...
  static Measure dirac_periodic(Word period);
  /// Concentrated on 0^2 1^4 0^8 1^16 ... (block s has length 2^s).
  static Measure dirac_blocks();
  static Measure mixture(double lambda, Measure first, Measure second);
  /// Renewal image of the house-of-cards chain: X=1 exactly when the hidden
  /// state is 0. q shorter than y_max+1 is extended with its last entry;
  /// q_{y_max} is forced to 0.
  static Measure house_of_cards(std::vector<double> q, std::size_t y_max = kDefaultYMax);
  /// q_y = 1 on every interval [n^2, n^2 + n] (n >= 0), q_free elsewhere.
  static Measure house_of_cards_forced_squares(double q_free, std::size_t y_max = kDefaultYMax);

  [[nodiscard]] MeasureKind kind() const noexcept;
  [[nodiscard]] const Alphabet& alphabet() const noexcept;

  /// Null unless the measure is of the matching kind.
  [[nodiscard]] const IidModel* iid_model() const noexcept;
  [[nodiscard]] const MarkovModel* markov_model() const noexcept;
  [[nodiscard]] const DiracModel* dirac_model() const noexcept;
  [[nodiscard]] const MixtureModel* mixture_model() const noexcept;
  [[nodiscard]] const RenewalModel* renewal_model() const noexcept;

  /// Cylinder probability of a word of symbol indices (no alphabet check).
  [[nodiscard]] CylinderProb cylinder(std::span<const Symbol> word) const;
  [[nodiscard]] std::unique_ptr<PrefixEvaluator> evaluator() const;

  /// Appends a sampled prefix of length n.
  void sample_into(std::size_t n, Rng& rng, std::vector<Symbol>& out) const;

  /// Shift-invariance of the cylinder family. Dirac measures are prefix
  /// indicators and are stationary only on constant sequences.
  [[nodiscard]] bool stationary() const noexcept;

  [[nodiscard]] std::string describe() const;

  /// Same model and parameters.
  [[nodiscard]] bool same_law(const Measure& other) const;

 private:
  struct Model;
  explicit Measure(std::shared_ptr<const Model> model) : model_(std::move(model)) {}

  std::shared_ptr<const Model> model_;
};

struct MixtureModel {
  double lambda = 0.5;
  Measure first;
  Measure second;
};

// ---- operations -----------------------------------------------------------

/// Cylinder probability; throws alphabet_mismatch if w is over another alphabet.
CylinderProb cylinder_prob(const Measure& m, const Word& w);

/// Prefix of length n distributed as the n-marginal of m. Throws usage for n = 0.
Word sample_prefix(const Measure& m, std::size_t n, Rng& rng);

/// Shannon entropy rate (nats). iid and markov only; others throw unsupported.
double shannon_entropy(const Measure& m);

/// Every word of length n has positive probability. Closed forms for iid,
/// markov and mixtures; enumeration (subject to the cap) otherwise.
bool is_complete_grammar(const Measure& m, std::size_t n, const Limits& limits = {});

/// w lies in the support of m.
bool admissible(const Measure& m, const Word& w);

/// sup over omega in X^i, xi in X^j of m(omega, gap g, xi) / (m(omega) m(xi)).
/// Pairs with m(omega) = 0 or m(xi) = 0 are skipped.
double psi_plus(const Measure& m, std::size_t g, std::size_t i, std::size_t j,
                const Limits& limits = {});

struct SublogViolation {
  std::size_t i = 0;
  std::size_t j = 0;
  double log_psi = 0.0;
  double bound = 0.0;
};

/// Pairs (i, j), i, j >= 1, 2 <= i + j <= max_ij, with
/// log psi_g(i, j) > K (i + j) / log(i + j)^(1 + eps).
std::vector<SublogViolation> check_sublog(const Measure& m, std::size_t g, double K, double eps,
                                          std::size_t max_ij, const Limits& limits = {});

}  // namespace recur
