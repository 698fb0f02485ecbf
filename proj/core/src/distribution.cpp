#include "recur/distribution.hpp"

#include <algorithm>
#include <cmath>

#include "recur/detail/enumerate.hpp"
#include "recur/divergence.hpp"
#include "recur/error.hpp"
#include "recur/overlap.hpp"
#include "recur/parallel.hpp"

namespace recur {

namespace {

constexpr double kMassTolerance = 1e-10;

/// Concentrated on one sequence, so pruned enumeration visits a single path.
bool thin_support(const Measure& m) { return m.kind() == MeasureKind::dirac; }

void check_pair_cap(const Measure& mu, const Measure& nu, std::size_t len, const Limits& limits,
                    std::string_view what) {
  if (thin_support(mu) || thin_support(nu)) return;
  checked_word_count(mu.alphabet().size(), len, limits, what);
}

class BorderVisitor {
 public:
  BorderVisitor(const Measure& mu, const Measure& nu, std::size_t max_len)
      : a_(mu.evaluator()), b_(nu.evaluator()), mass_(max_len + 1) {
    for (std::size_t m = 1; m <= max_len; ++m) mass_[m].assign(m, 0.0);
  }

  bool push(Symbol s) {
    a_->push(s);
    b_->push(s);
    const std::size_t i = word_.size();
    word_.push_back(s);
    std::size_t k = 0;
    if (i > 0) {
      k = fail_[i - 1];
      while (k > 0 && word_[k] != s) k = fail_[k - 1];
      if (word_[k] == s) ++k;
    }
    fail_.push_back(k);
    return a_->log_prob() != kNegInf && b_->log_prob() != kNegInf;
  }

  void pop() {
    a_->pop();
    b_->pop();
    word_.pop_back();
    fail_.pop_back();
  }

  void node(std::span<const Symbol> word) {
    mass_[word.size()][fail_.back()] += std::exp(a_->log_prob() + b_->log_prob());
  }

  [[nodiscard]] const std::vector<std::vector<double>>& mass() const { return mass_; }

 private:
  std::unique_ptr<PrefixEvaluator> a_;
  std::unique_ptr<PrefixEvaluator> b_;
  std::vector<Symbol> word_;
  std::vector<std::size_t> fail_;
  std::vector<std::vector<double>> mass_;
};

void add_warnings(const Measure& mu, const Measure& nu, std::size_t n, const Limits& limits,
                  std::vector<std::string>& warnings) {
  try {
    if (!is_complete_grammar(nu, n, limits)) {
      warnings.push_back("nu lacks complete grammar at length " + std::to_string(n) +
                         "; the tail identity may not hold");
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::cap_exceeded) throw;
    warnings.push_back("complete grammar of nu unverifiable: " + std::string(e.what()));
  }
  if (!mu.stationary()) warnings.emplace_back("mu is not stationary");
  if (!nu.stationary()) warnings.emplace_back("nu is not stationary");
}

/// Fills pmf and avoiding mass from tail by differencing.
void finish_from_tail(DistributionTable& t) {
  const std::size_t n = t.n;
  t.pmf.assign(n + 1, 0.0);
  double total = 0.0;
  for (std::size_t s = 1; s <= n; ++s) {
    double p = t.tail[n - s] - t.tail[n - s + 1];
    if (p < 0.0) {
      if (p < -kMassTolerance) {
        throw Error(ErrorKind::invariant, "negative point mass " + std::to_string(p) + " at T = " +
                                              std::to_string(s));
      }
      p = 0.0;
    }
    t.pmf[s] = p;
    total += p;
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw Error(ErrorKind::invariant, "pmf mass deviates from 1 by " + std::to_string(total - 1.0));
  }
  t.avoiding_mass = 1.0 - (n > 1 ? t.tail[1] : 0.0);
}

struct Support {
  std::vector<Symbol> words;  // flattened, n symbols each
  std::vector<double> probs;
};

Support support_words(const Measure& m, std::size_t n) {
  Support out;
  const std::size_t s = m.alphabet().size();
  auto eval = m.evaluator();
  std::vector<Symbol> word;
  auto rec = [&](auto&& self) -> void {
    if (eval->log_prob() == kNegInf) return;
    if (word.size() == n) {
      out.words.insert(out.words.end(), word.begin(), word.end());
      out.probs.push_back(std::exp(eval->log_prob()));
      return;
    }
    for (Symbol a = 0; a < s; ++a) {
      word.push_back(a);
      eval->push(a);
      self(self);
      eval->pop();
      word.pop_back();
    }
  };
  rec(rec);
  return out;
}

}  // namespace

double BorderMassTable::total(std::size_t m) const {
  double acc = 0.0;
  for (double v : mass.at(m)) acc += v;
  return acc;
}

double BorderMassTable::below(std::size_t m, std::size_t k) const {
  double acc = 0.0;
  const auto& row = mass.at(m);
  for (std::size_t f = 0; f < std::min(k, row.size()); ++f) acc += row[f];
  return acc;
}

BorderMassTable border_mass_table(const Measure& mu, const Measure& nu, std::size_t max_len,
                                  const Limits& limits) {
  require_same_alphabet(mu.alphabet(), nu.alphabet(), "border mass enumeration");
  check_pair_cap(mu, nu, max_len, limits, "border mass enumeration");
  BorderMassTable out;
  out.max_len = max_len;
  out.mass.resize(max_len + 1);
  for (std::size_t m = 1; m <= max_len; ++m) out.mass[m].assign(m, 0.0);
  if (max_len == 0) return out;
  const auto visitors = detail::walk_words(mu.alphabet().size(), max_len, limits,
                                           [&] { return BorderVisitor(mu, nu, max_len); });
  for (const auto& v : visitors) {
    for (std::size_t m = 1; m <= max_len; ++m) {
      for (std::size_t f = 0; f < m; ++f) out.mass[m][f] += v.mass()[m][f];
    }
  }
  return out;
}

std::vector<double> a_coefficients(const Measure& mu, const Measure& nu, std::size_t n,
                                   const Limits& limits) {
  if (n == 0) throw Error(ErrorKind::usage, "a_coefficients: n must be at least 1");
  std::vector<double> a(n, 0.0);
  const auto table = border_mass_table(mu, nu, n - 1, limits);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    for (std::size_t m = k + 1; m < n; ++m) a[k] += table.below(m, k);
  }
  return a;
}

double a_coeff(const Measure& mu, const Measure& nu, std::size_t k, std::size_t n,
               const Limits& limits) {
  if (k == 0 || k >= n) throw Error(ErrorKind::usage, "a_coeff: need 1 <= k <= n-1");
  if (k == n - 1) return 0.0;
  return a_coefficients(mu, nu, n, limits)[k];
}

DistributionTable law_exact(const Measure& mu, const Measure& nu, std::size_t n,
                            const Limits& limits) {
  if (n == 0) throw Error(ErrorKind::usage, "law_exact: n must be at least 1");
  DistributionTable t;
  t.n = n;
  add_warnings(mu, nu, n, limits, t.warnings);
  const auto table = border_mass_table(mu, nu, n - 1, limits);
  t.tail.assign(n + 1, 0.0);
  t.tail[0] = 1.0;
  t.divergence.assign(n, 0.0);
  t.a_coeff.assign(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    t.divergence[k] = table.total(k);
    for (std::size_t m = k + 1; m < n; ++m) t.a_coeff[k] += table.below(m, k);
    t.tail[k] = t.divergence[k] + t.a_coeff[k];
  }
  finish_from_tail(t);
  return t;
}

DistributionTable law_bruteforce(const Measure& mu, const Measure& nu, std::size_t n,
                                 const Limits& limits) {
  if (n == 0) throw Error(ErrorKind::usage, "law_bruteforce: n must be at least 1");
  require_same_alphabet(mu.alphabet(), nu.alphabet(), "law_bruteforce");
  const std::size_t s = mu.alphabet().size();
  const std::size_t span_mu = thin_support(mu) ? 0 : n;
  const std::size_t span_nu = thin_support(nu) ? 0 : n;
  checked_word_count(s, span_mu + span_nu, limits, "brute-force pair enumeration");

  const Support xs = support_words(mu, n);
  const Support ys = support_words(nu, n);
  constexpr std::size_t kChunks = 64;
  const std::size_t count = xs.probs.size();
  std::vector<std::vector<double>> partial(kChunks, std::vector<double>(n + 1, 0.0));
  for_each_chunk(kChunks, limits.workers, [&](std::size_t c) {
    const std::size_t lo = count * c / kChunks;
    const std::size_t hi = count * (c + 1) / kChunks;
    auto& bins = partial[c];
    for (std::size_t xi = lo; xi < hi; ++xi) {
      const std::span<const Symbol> x(xs.words.data() + xi * n, n);
      for (std::size_t yi = 0; yi < ys.probs.size(); ++yi) {
        const std::span<const Symbol> y(ys.words.data() + yi * n, n);
        bins[shortest_path(x, y)] += xs.probs[xi] * ys.probs[yi];
      }
    }
  });

  DistributionTable t;
  t.n = n;
  t.pmf.assign(n + 1, 0.0);
  for (const auto& bins : partial) {
    for (std::size_t v = 1; v <= n; ++v) t.pmf[v] += bins[v];
  }
  t.tail.assign(n + 1, 0.0);
  t.tail[0] = 1.0;
  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t v = 1; v <= n - k; ++v) t.tail[k] += t.pmf[v];
  }
  t.avoiding_mass = t.pmf[n];
  return t;
}

double max_discrepancy(const DistributionTable& a, const DistributionTable& b) {
  if (a.n != b.n) throw Error(ErrorKind::length_mismatch, "max_discrepancy: tables differ in n");
  double worst = std::abs(a.avoiding_mass - b.avoiding_mass);
  for (std::size_t v = 1; v <= a.n; ++v) worst = std::max(worst, std::abs(a.pmf[v] - b.pmf[v]));
  for (std::size_t k = 0; k <= a.n; ++k) worst = std::max(worst, std::abs(a.tail[k] - b.tail[k]));
  return worst;
}

LimitReport law_limit(const Measure& mu, const Measure& nu, std::size_t k, std::size_t m_max,
                      const Limits& limits) {
  if (k == 0) throw Error(ErrorKind::usage, "law_limit: k must be at least 1");
  if (m_max < k) throw Error(ErrorKind::usage, "law_limit: m_max must be at least k");
  LimitReport out;
  out.k = k;
  out.m_max = m_max;
  const auto table = border_mass_table(mu, nu, m_max, limits);
  out.divergence = table.total(k);
  out.partial_tail = out.divergence;
  for (std::size_t m = k + 1; m <= m_max; ++m) out.partial_tail += table.below(m, k);
  out.truncation_bound = divergence_tail_bound(mu, nu, m_max);
  out.defect_lower_bound = divergence_floor(mu, nu);
  out.certified = out.truncation_bound.has_value() && out.defect_lower_bound == 0.0;
  return out;
}

double avoiding_pairs_prob(const Measure& mu, const Measure& nu, std::size_t n,
                           const Limits& limits) {
  return law_exact(mu, nu, n, limits).avoiding_mass;
}

}  // namespace recur
