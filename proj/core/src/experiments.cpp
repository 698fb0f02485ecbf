#include "recur/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "recur/error.hpp"
#include "recur/parallel.hpp"
#include "recur/rng.hpp"

namespace recur {

namespace {

std::size_t block_count(std::size_t samples) {
  return (samples + kSamplesPerStream - 1) / kSamplesPerStream;
}

double quantile(const std::vector<double>& sorted, double q) {
  const auto n = static_cast<double>(sorted.size());
  const auto rank = static_cast<std::size_t>(std::ceil(q * n));
  return sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1];
}

double proportion_se(double p, std::size_t n) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

std::optional<DivergenceSeq> closed_sequence(const Measure& mu, const Measure& nu, std::size_t kmax) {
  try {
    return divergence_sequence(mu, nu, kmax, Method::closed);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::unsupported) throw;
    return std::nullopt;
  }
}

std::vector<std::vector<Symbol>> admissible_words(const Measure& m, std::size_t n) {
  std::vector<std::vector<Symbol>> out;
  const std::size_t s = m.alphabet().size();
  auto eval = m.evaluator();
  std::vector<Symbol> word;
  auto rec = [&](auto&& self) -> void {
    if (eval->log_prob() == kNegInf) return;
    if (word.size() == n) {
      out.push_back(word);
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

void ExperimentConfig::validate() const {
  if (!mu || !nu) throw Error(ErrorKind::usage, "experiment: both mu and nu are required");
  require_same_alphabet(mu->alphabet(), nu->alphabet(), "experiment");
  if (samples == 0) throw Error(ErrorKind::usage, "experiment: samples must be at least 1");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i] == 0) throw Error(ErrorKind::usage, "experiment: schedule entries must be positive");
    if (i > 0 && schedule[i] <= schedule[i - 1]) {
      throw Error(ErrorKind::usage, "experiment: schedule must be strictly increasing");
    }
  }
  for (double e : epsilons) {
    if (!(e > 0.0 && e < 1.0)) throw Error(ErrorKind::usage, "experiment: epsilons must lie in (0, 1)");
  }
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw Error(ErrorKind::usage, "experiment: threshold must lie in (0, 1]");
  }
}

ConcentrationReport concentration_experiment(const ExperimentConfig& cfg, const Limits& limits) {
  cfg.validate();
  const Measure& mu = *cfg.mu;
  const Measure& nu = *cfg.nu;
  ConcentrationReport report;
  report.threshold = cfg.threshold;
  try {
    if (shannon_entropy(mu) <= 0.0) report.warnings.emplace_back("mu has zero entropy");
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::unsupported) throw;
    report.warnings.emplace_back("entropy of mu not computable for this model");
  }

  for (std::size_t e = 0; e < cfg.schedule.size(); ++e) {
    const std::size_t n = cfg.schedule[e];
    std::vector<double> ratio(cfg.samples);
    for_each_chunk(block_count(cfg.samples), limits.workers, [&](std::size_t b) {
      Rng rng(derive_seed(cfg.seed, stream_index(e, b)));
      std::vector<Symbol> x;
      std::vector<Symbol> y;
      const std::size_t hi = std::min(cfg.samples, (b + 1) * kSamplesPerStream);
      for (std::size_t i = b * kSamplesPerStream; i < hi; ++i) {
        x.clear();
        y.clear();
        mu.sample_into(n, rng, x);
        nu.sample_into(n, rng, y);
        ratio[i] = static_cast<double>(shortest_path(x, y)) / static_cast<double>(n);
      }
    });

    ConcentrationRow row;
    row.n = n;
    row.samples = cfg.samples;
    double sum = 0.0;
    std::size_t below = 0;
    for (double r : ratio) {
      sum += r;
      if (r < cfg.threshold) ++below;
    }
    const double count = static_cast<double>(cfg.samples);
    row.mean = sum / count;
    double sq = 0.0;
    for (double r : ratio) sq += (r - row.mean) * (r - row.mean);
    row.std_error = cfg.samples > 1 ? std::sqrt(sq / (count - 1.0) / count) : 0.0;
    row.frac_below = static_cast<double>(below) / count;
    row.frac_below_se = proportion_se(row.frac_below, cfg.samples);
    std::sort(ratio.begin(), ratio.end());
    row.min = ratio.front();
    row.max = ratio.back();
    row.q05 = quantile(ratio, 0.05);
    row.q25 = quantile(ratio, 0.25);
    row.median = quantile(ratio, 0.5);
    row.q75 = quantile(ratio, 0.75);
    row.q95 = quantile(ratio, 0.95);

    const std::size_t k = ldp_index(n, 1.0 - cfg.threshold);
    if (n < 2 || k >= n) {
      row.exact_bound = 0.0;
    } else if (auto seq = closed_sequence(mu, nu, n - 1)) {
      double bound = 0.0;
      for (std::size_t j = std::max<std::size_t>(k, 1); j < n; ++j) bound += seq->value(j);
      row.exact_bound = bound;
    }
    report.rows.push_back(row);
  }
  return report;
}

std::size_t ldp_index(std::size_t n, double eps) {
  return static_cast<std::size_t>(std::ceil(static_cast<double>(n) * eps - 1e-9));
}

LdpCurve ldp_curve(const Measure& mu, const Measure& nu, const std::vector<double>& epsilons,
                   std::size_t n) {
  if (n < 2) throw Error(ErrorKind::usage, "ldp: n must be at least 2");
  LdpCurve curve;
  curve.n = n;
  curve.rate = exact_rate(mu, nu);
  const DivergenceSeq seq = divergence_sequence(mu, nu, n - 1, Method::closed);
  const double dn = static_cast<double>(n);
  for (double eps : epsilons) {
    if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorKind::usage, "ldp: epsilon must lie in (0, 1)");
    LdpPoint pt;
    pt.epsilon = eps;
    pt.k = std::max<std::size_t>(1, ldp_index(n, eps));
    if (pt.k > n - 1) {
      throw Error(ErrorKind::usage, "ldp: ceil(n eps) must not exceed n - 1");
    }
    LogSum tail;
    for (std::size_t j = pt.k; j < n; ++j) tail.add(seq.log_value(j));
    const double log_sum = tail.log();
    const double log_single = seq.log_value(pt.k);
    pt.lower_rate = log_sum == kNegInf ? Rate::inf() : Rate{std::abs(log_sum) / dn, false};
    pt.upper_rate = log_single == kNegInf ? Rate::inf() : Rate{std::abs(log_single) / dn, false};
    if (curve.rate) {
      pt.reference = curve.rate->infinite ? Rate::inf() : Rate{eps * curve.rate->value, false};
    }
    curve.points.push_back(pt);
  }
  return curve;
}

LdpPoint ldp_bounds(const Measure& mu, const Measure& nu, double epsilon, std::size_t n) {
  return ldp_curve(mu, nu, {epsilon}, n).points.front();
}

NonconvergenceReport nonconvergence_probe(const Measure& mu, const Measure& nu, std::size_t n,
                                          std::size_t samples, std::uint64_t seed,
                                          const Limits& limits) {
  require_same_alphabet(mu.alphabet(), nu.alphabet(), "nonconvergence_probe");
  if (n == 0 || samples == 0) {
    throw Error(ErrorKind::usage, "nonconvergence_probe: n and samples must be positive");
  }
  std::vector<std::uint32_t> t_n(samples);
  std::vector<std::uint32_t> t_next(samples);
  for_each_chunk(block_count(samples), limits.workers, [&](std::size_t b) {
    Rng rng(derive_seed(seed, stream_index(0, b)));
    std::vector<Symbol> x;
    std::vector<Symbol> y;
    const std::size_t hi = std::min(samples, (b + 1) * kSamplesPerStream);
    for (std::size_t i = b * kSamplesPerStream; i < hi; ++i) {
      x.clear();
      y.clear();
      mu.sample_into(n + 1, rng, x);
      nu.sample_into(n + 1, rng, y);
      const std::span<const Symbol> xs(x);
      const std::span<const Symbol> ys(y);
      t_n[i] = static_cast<std::uint32_t>(shortest_path(xs.first(n), ys.first(n)));
      t_next[i] = static_cast<std::uint32_t>(shortest_path(xs, ys));
    }
  });

  NonconvergenceReport report;
  report.n = n;
  report.samples = samples;
  report.e1 = std::exp(divergence(mu, nu, 1, Method::automatic, limits));
  std::vector<std::size_t> hits(n + 1, 0);
  std::vector<std::size_t> agree(n + 1, 0);
  std::size_t same = 0;
  std::size_t overlap = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    ++hits[t_n[i]];
    if (t_n[i] == t_next[i]) {
      ++agree[t_n[i]];
      ++same;
    }
    if (t_n[i] < n) ++overlap;
  }
  const double count = static_cast<double>(samples);
  report.p_same = static_cast<double>(same) / count;
  report.p_same_se = proportion_se(report.p_same, samples);
  report.p_overlap = static_cast<double>(overlap) / count;
  for (std::size_t k = 1; k <= n; ++k) {
    if (hits[k] == 0) continue;
    NonconvergenceRow row{k, hits[k], agree[k], 0.0, 0.0};
    row.frequency = static_cast<double>(agree[k]) / static_cast<double>(hits[k]);
    row.std_error = proportion_se(row.frequency, hits[k]);
    report.rows.push_back(row);
  }
  return report;
}

OscillationReport rate_oscillation_demo(double p, std::size_t kmax) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorKind::usage, "oscillation: p must lie in (0, 1)");
  OscillationReport out;
  out.p = p;
  out.rates = divergence_rate(Measure::dirac_blocks(), Measure::bernoulli(p), kmax);
  for (unsigned s = 1;; ++s) {
    const std::size_t k = (std::size_t{1} << (s + 1)) - 2;
    if (k > kmax) break;
    out.block_ends.push_back({k, s % 2 == 1 ? 0U : 1U, out.rates.sequence.rate(k)});
  }
  return out;
}

std::optional<std::size_t> vwsp_gap(const Word& omega, const Word& xi,
                                    const AdmissibilityOracle& oracle, std::size_t g_max,
                                    const Limits& limits) {
  require_same_alphabet(omega.alphabet(), xi.alphabet(), "vwsp_gap");
  for (std::size_t g = 0; g <= g_max; ++g) {
    if (find_gap_filling(omega.symbols(), xi.symbols(), g, omega.alphabet().size(), oracle, limits)) {
      return g;
    }
  }
  return std::nullopt;
}

std::optional<std::size_t> vwsp_gap(const Measure& m, const Word& omega, const Word& xi,
                                    std::size_t g_max, const Limits& limits) {
  require_same_alphabet(m.alphabet(), omega.alphabet(), "vwsp_gap");
  require_same_alphabet(m.alphabet(), xi.alphabet(), "vwsp_gap");
  const std::size_t s = m.alphabet().size();
  auto eval = m.evaluator();
  for (Symbol a : omega.symbols()) eval->push(a);
  if (eval->log_prob() == kNegInf) return std::nullopt;

  auto tail_fits = [&] {
    std::size_t pushed = 0;
    bool ok = true;
    for (Symbol a : xi.symbols()) {
      eval->push(a);
      ++pushed;
      if (eval->log_prob() == kNegInf) {
        ok = false;
        break;
      }
    }
    for (std::size_t i = 0; i < pushed; ++i) eval->pop();
    return ok;
  };
  auto search = [&](auto&& self, std::size_t left) -> bool {
    if (left == 0) return tail_fits();
    for (Symbol a = 0; a < s; ++a) {
      eval->push(a);
      const bool found = eval->log_prob() != kNegInf && self(self, left - 1);
      eval->pop();
      if (found) return true;
    }
    return false;
  };
  for (std::size_t g = 0; g <= g_max; ++g) {
    checked_word_count(s, g, limits, "gap enumeration");
    if (search(search, g)) return g;
  }
  return std::nullopt;
}

VwspProfile vwsp_profile(const Measure& m, std::size_t n, std::size_t g_max,
                         const Limits& limits) {
  if (n == 0) throw Error(ErrorKind::usage, "vwsp_profile: n must be at least 1");
  checked_word_count(m.alphabet().size(), 2 * n, limits, "vwsp pair enumeration");
  const auto words = admissible_words(m, n);
  VwspProfile out;
  out.n = n;
  for (const auto& a : words) {
    for (const auto& b : words) {
      ++out.pairs;
      const auto g = vwsp_gap(m, Word(m.alphabet(), a), Word(m.alphabet(), b), g_max, limits);
      if (!g) {
        ++out.not_found;
        continue;
      }
      if (out.worst_omega.empty() || *g > out.max_gap) {
        out.max_gap = *g;
        out.worst_omega = a;
        out.worst_xi = b;
      }
    }
  }
  return out;
}

}  // namespace recur
