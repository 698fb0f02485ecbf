#include <algorithm>
#include <cmath>

#include "recur/detail/enumerate.hpp"
#include "recur/error.hpp"
#include "recur/measure.hpp"

namespace recur {

namespace {

bool all_positive(std::span<const double> values) {
  return std::all_of(values.begin(), values.end(), [](double v) { return v > 0.0; });
}

/// Log cylinder probabilities of every word of length `length`, indexed
/// lexicographically.
std::vector<double> word_log_probs(const Measure& m, std::size_t length) {
  const std::size_t s = m.alphabet().size();
  std::vector<double> out;
  out.reserve(saturating_pow(s, length));
  auto eval = m.evaluator();
  std::vector<Symbol> word;
  auto rec = [&](auto&& self) -> void {
    if (word.size() == length) {
      out.push_back(eval->log_prob());
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

struct SupportProbe {
  std::unique_ptr<PrefixEvaluator> eval;
  bool hole = false;

  bool push(Symbol s) {
    eval->push(s);
    if (eval->log_prob() == kNegInf) hole = true;
    return !hole;
  }
  void pop() { eval->pop(); }
  void node(std::span<const Symbol>) {}
};

}  // namespace

CylinderProb cylinder_prob(const Measure& m, const Word& w) {
  require_same_alphabet(m.alphabet(), w.alphabet(), "cylinder_prob");
  return m.cylinder(w.symbols());
}

Word sample_prefix(const Measure& m, std::size_t n, Rng& rng) {
  if (n == 0) throw Error(ErrorKind::usage, "sample_prefix: length must be at least 1");
  std::vector<Symbol> out;
  out.reserve(n);
  m.sample_into(n, rng, out);
  return Word(m.alphabet(), std::move(out));
}

double shannon_entropy(const Measure& m) {
  auto term = [](double p) { return p > 0.0 ? -p * std::log(p) : 0.0; };
  if (const auto* iid = m.iid_model()) {
    double h = 0.0;
    for (double p : iid->probs) h += term(p);
    return h;
  }
  if (const auto* mk = m.markov_model()) {
    double h = 0.0;
    for (std::size_t a = 0; a < mk->stationary.size(); ++a) {
      double row = 0.0;
      for (double p : mk->transition.row(a)) row += term(p);
      h += mk->stationary[a] * row;
    }
    return h;
  }
  throw Error(ErrorKind::unsupported, "entropy unavailable for " +
                                          std::string(to_string(m.kind())) + " measures");
}

bool is_complete_grammar(const Measure& m, std::size_t n, const Limits& limits) {
  if (n == 0) throw Error(ErrorKind::usage, "is_complete_grammar: length must be at least 1");
  if (const auto* iid = m.iid_model()) return all_positive(iid->probs);
  if (const auto* mk = m.markov_model()) {
    if (n == 1) return all_positive(mk->stationary);
    for (std::size_t r = 0; r < mk->transition.rows(); ++r) {
      if (!all_positive(mk->transition.row(r))) return false;
    }
    return true;
  }
  if (const auto* mix = m.mixture_model()) {
    if ((mix->first.kind() != MeasureKind::renewal && mix->first.kind() != MeasureKind::dirac &&
         is_complete_grammar(mix->first, n, limits)) ||
        (mix->second.kind() != MeasureKind::renewal && mix->second.kind() != MeasureKind::dirac &&
         is_complete_grammar(mix->second, n, limits))) {
      return true;
    }
  }
  const std::size_t s = m.alphabet().size();
  checked_word_count(s, n, limits, "complete-grammar check");
  auto probes = detail::walk_words(s, n, limits, [&] { return SupportProbe{m.evaluator()}; });
  return std::none_of(probes.begin(), probes.end(), [](const SupportProbe& p) { return p.hole; });
}

bool admissible(const Measure& m, const Word& w) { return cylinder_prob(m, w).positive(); }

double psi_plus(const Measure& m, std::size_t g, std::size_t i, std::size_t j,
                const Limits& limits) {
  if (i == 0 || j == 0) throw Error(ErrorKind::usage, "psi_plus: i and j must be at least 1");
  if (m.kind() == MeasureKind::iid) return 1.0;
  if (const auto* mk = m.markov_model()) {
    const Matrix step = mk->transition.power(g + 1);
    double best = 0.0;
    for (std::size_t a = 0; a < step.rows(); ++a) {
      for (std::size_t b = 0; b < step.cols(); ++b) {
        best = std::max(best, step(a, b) / mk->stationary[b]);
      }
    }
    return best;
  }

  const std::size_t s = m.alphabet().size();
  checked_word_count(s, i + g + j, limits, "psi_plus enumeration");
  const std::vector<double> xi_logs = word_log_probs(m, j);
  if (std::all_of(xi_logs.begin(), xi_logs.end(), [](double v) { return v == kNegInf; })) {
    throw Error(ErrorKind::degenerate, "psi_plus: every word of length " + std::to_string(j) +
                                           " has measure zero");
  }

  // For each omega, accumulate m(omega gap xi) over gaps per xi.
  double best_log = kNegInf;
  auto eval = m.evaluator();
  std::vector<LogSum> joint(xi_logs.size());
  std::vector<Symbol> tail;
  auto extend_tail = [&](auto&& self, std::size_t xi_index) -> void {
    if (eval->log_prob() == kNegInf) return;
    const std::size_t depth = tail.size();
    if (depth == g + j) {
      joint[xi_index].add(eval->log_prob());
      return;
    }
    for (Symbol a = 0; a < s; ++a) {
      tail.push_back(a);
      eval->push(a);
      self(self, depth >= g ? xi_index * s + a : xi_index);
      eval->pop();
      tail.pop_back();
    }
  };
  auto extend_head = [&](auto&& self, std::size_t depth) -> void {
    if (eval->log_prob() == kNegInf) return;
    if (depth == i) {
      const double log_omega = eval->log_prob();
      std::fill(joint.begin(), joint.end(), LogSum{});
      extend_tail(extend_tail, 0);
      for (std::size_t x = 0; x < joint.size(); ++x) {
        if (xi_logs[x] == kNegInf || joint[x].empty()) continue;
        best_log = std::max(best_log, joint[x].log() - log_omega - xi_logs[x]);
      }
      return;
    }
    for (Symbol a = 0; a < s; ++a) {
      eval->push(a);
      self(self, depth + 1);
      eval->pop();
    }
  };
  extend_head(extend_head, 0);
  return best_log == kNegInf ? 0.0 : std::exp(best_log);
}

std::vector<SublogViolation> check_sublog(const Measure& m, std::size_t g, double K, double eps,
                                          std::size_t max_ij, const Limits& limits) {
  if (!(K > 0.0) || !(eps > 0.0)) {
    throw Error(ErrorKind::usage, "check_sublog: K and eps must be positive");
  }
  std::vector<SublogViolation> out;
  for (std::size_t total = 2; total <= max_ij; ++total) {
    const double n = static_cast<double>(total);
    const double bound = K * n / std::pow(std::log(n), 1.0 + eps);
    for (std::size_t i = 1; i < total; ++i) {
      const std::size_t j = total - i;
      const double log_psi = std::log(psi_plus(m, g, i, j, limits));
      if (log_psi > bound) out.push_back({i, j, log_psi, bound});
    }
  }
  return out;
}

}  // namespace recur
