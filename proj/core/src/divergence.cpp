#include "recur/divergence.hpp"

#include <algorithm>
#include <numeric>

#include "recur/detail/enumerate.hpp"
#include "recur/error.hpp"

namespace recur {

namespace {

struct Transfer {
  Matrix p;
  std::vector<double> pi;
};

std::optional<Transfer> as_transfer(const Measure& m) {
  if (const auto* iid = m.iid_model()) {
    const std::size_t s = iid->probs.size();
    Matrix p(s, s);
    for (std::size_t r = 0; r < s; ++r) {
      for (std::size_t c = 0; c < s; ++c) p(r, c) = iid->probs[c];
    }
    return Transfer{std::move(p), iid->probs};
  }
  if (const auto* mk = m.markov_model()) return Transfer{mk->transition, mk->stationary};
  return std::nullopt;
}

struct Product {
  Matrix h;
  std::vector<double> w;
};

Product product_of(const Transfer& a, const Transfer& b) {
  Product out{a.p.hadamard(b.p), std::vector<double>(a.pi.size())};
  for (std::size_t i = 0; i < a.pi.size(); ++i) out.w[i] = a.pi[i] * b.pi[i];
  return out;
}

MethodTag worst(MethodTag a, MethodTag b) { return std::max(a, b); }

bool uniform_probs(const IidModel& m) {
  return std::all_of(m.probs.begin(), m.probs.end(), [&](double p) { return p == m.probs[0]; });
}

double log_e1_iid(const IidModel& a, const IidModel& b) {
  // E(1) = 1/s exactly when either factor is uniform.
  if (uniform_probs(a) || uniform_probs(b)) return -std::log(static_cast<double>(a.probs.size()));
  double e1 = 0.0;
  for (std::size_t i = 0; i < a.probs.size(); ++i) e1 += a.probs[i] * b.probs[i];
  return safe_log(e1);
}

std::vector<double> sequence_transfer(const Product& prod, std::size_t kmax) {
  std::vector<double> out;
  out.reserve(kmax);
  std::vector<double> v = prod.w;
  double log_scale = 0.0;
  for (std::size_t k = 1; k <= kmax; ++k) {
    if (k > 1) v = prod.h.apply_left(v);
    const double sum = std::accumulate(v.begin(), v.end(), 0.0);
    if (!(sum > 0.0) || log_scale == kNegInf) {
      log_scale = kNegInf;
      out.push_back(kNegInf);
      continue;
    }
    log_scale += std::log(sum);
    for (double& x : v) x /= sum;
    out.push_back(log_scale);
  }
  return out;
}

/// E(k) = other(x_0^{k-1}) when one side is concentrated on x.
std::vector<double> sequence_dirac(const DiracModel& dirac, const Measure& other, std::size_t kmax) {
  std::vector<double> out;
  out.reserve(kmax);
  auto eval = other.evaluator();
  for (std::size_t i = 0; i < kmax; ++i) {
    if (!out.empty() && out.back() == kNegInf) {
      out.push_back(kNegInf);
      continue;
    }
    eval->push(dirac.symbol_at(i));
    out.push_back(eval->log_prob());
  }
  return out;
}

struct PairVisitor {
  std::unique_ptr<PrefixEvaluator> a;
  std::unique_ptr<PrefixEvaluator> b;
  std::vector<LogSum> sums;

  bool push(Symbol s) {
    a->push(s);
    b->push(s);
    return a->log_prob() != kNegInf && b->log_prob() != kNegInf;
  }
  void pop() {
    a->pop();
    b->pop();
  }
  void node(std::span<const Symbol> word) { sums[word.size() - 1].add(a->log_prob() + b->log_prob()); }
};

std::vector<double> sequence_enum(const Measure& mu, const Measure& nu, std::size_t kmax,
                                  const Limits& limits) {
  const std::size_t s = mu.alphabet().size();
  checked_word_count(s, kmax, limits, "divergence enumeration");
  auto visitors = detail::walk_words(s, kmax, limits, [&] {
    return PairVisitor{mu.evaluator(), nu.evaluator(), std::vector<LogSum>(kmax)};
  });
  std::vector<LogSum> total(kmax);
  for (const auto& v : visitors) {
    for (std::size_t d = 0; d < kmax; ++d) total[d].merge(v.sums[d]);
  }
  std::vector<double> out(kmax);
  for (std::size_t d = 0; d < kmax; ++d) out[d] = total[d].log();
  return out;
}

struct Tagged {
  std::vector<double> log_values;
  MethodTag tag = MethodTag::closed_form;
};

/// Chooses the cheapest exact method; nullopt when only enumeration applies.
std::optional<Tagged> sequence_structured(const Measure& mu, const Measure& nu, std::size_t kmax) {
  const auto* ia = mu.iid_model();
  const auto* ib = nu.iid_model();
  if (ia != nullptr && ib != nullptr) {
    const double e1 = log_e1_iid(*ia, *ib);
    Tagged out;
    for (std::size_t k = 1; k <= kmax; ++k) {
      out.log_values.push_back(e1 == kNegInf ? kNegInf : e1 * static_cast<double>(k));
    }
    return out;
  }
  if (const auto* d = mu.dirac_model()) return Tagged{sequence_dirac(*d, nu, kmax), MethodTag::closed_form};
  if (const auto* d = nu.dirac_model()) return Tagged{sequence_dirac(*d, mu, kmax), MethodTag::closed_form};

  const MixtureModel* mix = mu.mixture_model();
  const bool split_mu = mix != nullptr;
  if (!split_mu) mix = nu.mixture_model();
  if (mix != nullptr) {
    const Measure& other = split_mu ? nu : mu;
    auto first = sequence_structured(mix->first, other, kmax);
    auto second = sequence_structured(mix->second, other, kmax);
    if (!first || !second) return std::nullopt;
    Tagged out{std::vector<double>(kmax), worst(first->tag, second->tag)};
    const double la = std::log(mix->lambda);
    const double lb = std::log1p(-mix->lambda);
    for (std::size_t k = 0; k < kmax; ++k) {
      out.log_values[k] = log_add(la + first->log_values[k], lb + second->log_values[k]);
    }
    return out;
  }

  const auto ta = as_transfer(mu);
  const auto tb = as_transfer(nu);
  if (ta && tb) return Tagged{sequence_transfer(product_of(*ta, *tb), kmax), MethodTag::transfer};
  return std::nullopt;
}

struct ExactRate {
  Rate rate;
  std::string provenance;
};

bool dirac_equal(const DiracModel& a, const DiracModel& b) {
  if (a.pattern != b.pattern) return false;
  if (a.pattern == DiracModel::Pattern::blocks) return true;
  const std::size_t l = std::lcm(a.period.size(), b.period.size());
  for (std::size_t i = 0; i < l; ++i) {
    if (a.symbol_at(i) != b.symbol_at(i)) return false;
  }
  return true;
}

std::optional<ExactRate> dirac_rate(const DiracModel& d, const Measure& other) {
  if (const auto* e = other.dirac_model()) {
    return ExactRate{dirac_equal(d, *e) ? Rate{0.0, false} : Rate::inf(), "closed_form"};
  }
  if (d.pattern == DiracModel::Pattern::blocks) {
    // Constant only when both block symbols are equally likely.
    if (const auto* iid = other.iid_model(); iid != nullptr && iid->probs[0] == iid->probs[1]) {
      return ExactRate{Rate::from_log(iid->log_probs[0], 1.0), "closed_form"};
    }
    return std::nullopt;
  }
  const std::size_t len = d.period.size();
  double log_cycle = 0.0;
  if (const auto* iid = other.iid_model()) {
    for (Symbol s : d.period) log_cycle += iid->log_probs[s];
  } else if (const auto* mk = other.markov_model()) {
    for (std::size_t i = 0; i < len; ++i) {
      log_cycle += mk->log_transition(d.period[i], d.period[(i + 1) % len]);
    }
  } else {
    return std::nullopt;
  }
  return ExactRate{Rate::from_log(log_cycle, static_cast<double>(len)), "closed_form"};
}

std::optional<ExactRate> exact_rate_tagged(const Measure& mu, const Measure& nu) {
  const bool same = mu.same_law(nu);
  const auto* ia = mu.iid_model();
  const auto* ib = nu.iid_model();
  if (ia != nullptr && ib != nullptr) {
    return ExactRate{Rate::from_log(log_e1_iid(*ia, *ib), 1.0), same ? "renyi2" : "closed_form"};
  }
  if (const auto* d = mu.dirac_model()) return dirac_rate(*d, nu);
  if (const auto* d = nu.dirac_model()) return dirac_rate(*d, mu);

  const MixtureModel* mix = mu.mixture_model();
  const bool split_mu = mix != nullptr;
  if (!split_mu) mix = nu.mixture_model();
  if (mix != nullptr) {
    const Measure& other = split_mu ? nu : mu;
    const auto first = exact_rate_tagged(mix->first, other);
    const auto second = exact_rate_tagged(mix->second, other);
    if (!first || !second) return std::nullopt;
    return ExactRate{std::min(first->rate, second->rate), "mixture_min"};
  }

  const auto ta = as_transfer(mu);
  const auto tb = as_transfer(nu);
  if (!ta || !tb) return std::nullopt;
  const Product prod = product_of(*ta, *tb);
  if (!is_irreducible(prod.h)) return std::nullopt;
  if (!std::all_of(prod.w.begin(), prod.w.end(), [](double x) { return x > 0.0; })) {
    return std::nullopt;
  }
  const PerronResult perron = perron_root(prod.h);
  if (!perron.converged) return std::nullopt;
  return ExactRate{Rate::from_log(safe_log(perron.root), 1.0), same ? "renyi2" : "spectral"};
}

void require_pair(const Measure& mu, const Measure& nu, std::string_view what) {
  require_same_alphabet(mu.alphabet(), nu.alphabet(), what);
}

/// Lexicographic cylinder probabilities for every word of length 0..kmax.
std::vector<std::vector<double>> level_probs(const Measure& m, std::size_t kmax) {
  const std::size_t s = m.alphabet().size();
  std::vector<std::vector<double>> levels(kmax + 1);
  for (std::size_t d = 0; d <= kmax; ++d) levels[d].assign(saturating_pow(s, d), 0.0);
  levels[0][0] = 1.0;
  auto eval = m.evaluator();
  auto rec = [&](auto&& self, std::size_t depth, std::size_t index) -> void {
    if (depth == kmax) return;
    for (Symbol a = 0; a < s; ++a) {
      eval->push(a);
      const double lp = eval->log_prob();
      const std::size_t child = index * s + a;
      if (lp != kNegInf) {
        levels[depth + 1][child] = std::exp(lp);
        self(self, depth + 1, child);
      }
      eval->pop();
    }
  };
  rec(rec, 0, 0);
  return levels;
}

/// Sum over omega, zeta of the gap marginals of mu and nu, multiplied.
double gap_rhs(std::span<const double> mu, std::span<const double> nu, std::size_t s,
               std::size_t i, std::size_t g, std::size_t j) {
  const std::size_t n_omega = saturating_pow(s, i);
  const std::size_t n_gap = saturating_pow(s, g);
  const std::size_t n_zeta = saturating_pow(s, j);
  std::vector<double> a(n_zeta);
  std::vector<double> b(n_zeta);
  double rhs = 0.0;
  for (std::size_t w = 0; w < n_omega; ++w) {
    std::fill(a.begin(), a.end(), 0.0);
    std::fill(b.begin(), b.end(), 0.0);
    for (std::size_t gap = 0; gap < n_gap; ++gap) {
      const std::size_t base = (w * n_gap + gap) * n_zeta;
      for (std::size_t z = 0; z < n_zeta; ++z) {
        a[z] += mu[base + z];
        b[z] += nu[base + z];
      }
    }
    for (std::size_t z = 0; z < n_zeta; ++z) rhs += a[z] * b[z];
  }
  return rhs;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

std::optional<double> transfer_tail_bound(const Product& prod, std::size_t m_max) {
  const std::size_t s = prod.w.size();
  std::vector<double> u(s, 1.0);
  for (std::size_t t = 0; t < m_max; ++t) u = prod.h.apply(u);
  std::optional<double> best;
  auto offer = [&](double bound) {
    if (!best || bound < *best) best = bound;
  };
  if (is_irreducible(prod.h)) {
    const PerronResult perron = perron_root(prod.h);
    const auto& v = perron.vector;
    if (perron.upper < 1.0 &&
        std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0; })) {
      double c = 0.0;
      for (std::size_t i = 0; i < s; ++i) c = std::max(c, u[i] / v[i]);
      offer(c * dot(prod.w, v) / (1.0 - perron.upper));
    }
  }
  double row_norm = 0.0;
  for (std::size_t r = 0; r < s; ++r) {
    const auto row = prod.h.row(r);
    row_norm = std::max(row_norm, std::accumulate(row.begin(), row.end(), 0.0));
  }
  if (row_norm < 1.0) {
    const double w_sum = std::accumulate(prod.w.begin(), prod.w.end(), 0.0);
    offer(w_sum * *std::max_element(u.begin(), u.end()) / (1.0 - row_norm));
  }
  return best;
}

double max_step_prob(const Measure& m) {
  if (const auto* iid = m.iid_model()) return *std::max_element(iid->probs.begin(), iid->probs.end());
  if (const auto* mk = m.markov_model()) {
    double best = 0.0;
    for (std::size_t r = 0; r < mk->transition.rows(); ++r) {
      const auto row = mk->transition.row(r);
      best = std::max(best, *std::max_element(row.begin(), row.end()));
    }
    return best;
  }
  return 1.0;
}

}  // namespace

std::string_view to_string(MethodTag tag) noexcept {
  switch (tag) {
    case MethodTag::closed_form: return "closed_form";
    case MethodTag::transfer: return "transfer";
    case MethodTag::enumeration: return "enumeration";
  }
  return "unknown";
}

Method parse_method(std::string_view text) {
  if (text == "auto") return Method::automatic;
  if (text == "enum") return Method::enumeration;
  if (text == "closed") return Method::closed;
  throw Error(ErrorKind::usage, "unknown method '" + std::string(text) + "' (auto|enum|closed)");
}

Rate Rate::from_log(double log_e, double k) noexcept {
  if (log_e == kNegInf) return inf();
  const double r = -log_e / k;
  return {r == 0.0 ? 0.0 : r, false};
}

double divergence_enum(const Measure& mu, const Measure& nu, std::size_t k, const Limits& limits) {
  require_pair(mu, nu, "divergence_enum");
  if (k == 0) return 0.0;
  return sequence_enum(mu, nu, k, limits).back();
}

double divergence_iid(const Measure& mu, const Measure& nu, std::size_t k) {
  require_pair(mu, nu, "divergence_iid");
  const auto* a = mu.iid_model();
  const auto* b = nu.iid_model();
  if (a == nullptr || b == nullptr) {
    throw Error(ErrorKind::unsupported, "divergence_iid: both measures must be iid");
  }
  const double e1 = log_e1_iid(*a, *b);
  if (k == 0) return 0.0;
  return e1 == kNegInf ? kNegInf : e1 * static_cast<double>(k);
}

double divergence_markov(const Measure& mu, const Measure& nu, std::size_t k) {
  require_pair(mu, nu, "divergence_markov");
  if (mu.markov_model() == nullptr || nu.markov_model() == nullptr) {
    throw Error(ErrorKind::unsupported, "divergence_markov: both measures must be markov");
  }
  if (k == 0) return 0.0;
  return sequence_transfer(product_of(*as_transfer(mu), *as_transfer(nu)), k).back();
}

DivergenceSeq divergence_sequence(const Measure& mu, const Measure& nu, std::size_t kmax,
                                  Method method, const Limits& limits) {
  require_pair(mu, nu, "divergence");
  DivergenceSeq out;
  out.kmax = kmax;
  if (kmax == 0) return out;
  std::optional<Tagged> result;
  if (method != Method::enumeration) result = sequence_structured(mu, nu, kmax);
  if (!result) {
    if (method == Method::closed) {
      throw Error(ErrorKind::unsupported, "no closed or transfer form for " + mu.describe() +
                                              " vs " + nu.describe());
    }
    result = Tagged{sequence_enum(mu, nu, kmax, limits), MethodTag::enumeration};
  }
  out.log_values = std::move(result->log_values);
  out.methods.assign(kmax, result->tag);
  return out;
}

double divergence(const Measure& mu, const Measure& nu, std::size_t k, Method method,
                  const Limits& limits) {
  if (k == 0) return 0.0;
  return divergence_sequence(mu, nu, k, method, limits).log_values.back();
}

RateReport divergence_rate(const Measure& mu, const Measure& nu, std::size_t kmax, Method method,
                           const Limits& limits) {
  if (kmax < 2) throw Error(ErrorKind::usage, "divergence_rate: kmax must be at least 2");
  RateReport out;
  out.sequence = divergence_sequence(mu, nu, kmax, method, limits);
  auto& est = out.estimate;
  est.window_lo = std::max<std::size_t>(1, kmax / 2);
  est.window_hi = kmax;
  est.liminf_est = out.sequence.rate(est.window_lo);
  est.limsup_est = est.liminf_est;
  for (std::size_t k = est.window_lo + 1; k <= kmax; ++k) {
    const Rate r = out.sequence.rate(k);
    est.liminf_est = std::min(est.liminf_est, r);
    est.limsup_est = std::max(est.limsup_est, r);
  }
  if (auto exact = exact_rate_tagged(mu, nu)) {
    est.exact_rate = exact->rate;
    est.provenance = exact->provenance;
  }
  return out;
}

std::optional<Rate> exact_rate(const Measure& mu, const Measure& nu) {
  require_pair(mu, nu, "exact_rate");
  if (auto r = exact_rate_tagged(mu, nu)) return r->rate;
  return std::nullopt;
}

double renyi2(const Measure& mu) {
  if (mu.kind() != MeasureKind::iid && mu.kind() != MeasureKind::markov) {
    throw Error(ErrorKind::unsupported, "renyi2: measure must be iid or markov");
  }
  const auto r = exact_rate_tagged(mu, mu);
  if (!r) throw Error(ErrorKind::degenerate, "renyi2: spectral iteration did not converge");
  return r->rate.value;
}

double check_gap_inequality(const Measure& mu, const Measure& nu, std::size_t i, std::size_t g,
                            std::size_t j, const Limits& limits) {
  require_pair(mu, nu, "check_gap_inequality");
  const std::size_t k = i + g + j;
  const std::size_t s = mu.alphabet().size();
  checked_word_count(s, k, limits, "gap inequality enumeration");
  const auto a = level_probs(mu, k);
  const auto b = level_probs(nu, k);
  const double lhs = dot(a[k], b[k]);
  const double slack = gap_rhs(a[k], b[k], s, i, g, j) - lhs;
  if (slack < -kGapTolerance) {
    throw Error(ErrorKind::invariant, "gap inequality violated at (i,g,j) = (" + std::to_string(i) +
                                          "," + std::to_string(g) + "," + std::to_string(j) +
                                          "), slack " + std::to_string(slack));
  }
  return slack;
}

std::vector<GapCheck> gap_inequality_table(const Measure& mu, const Measure& nu, std::size_t kmax,
                                           const Limits& limits) {
  require_pair(mu, nu, "gap_inequality_table");
  const std::size_t s = mu.alphabet().size();
  checked_word_count(s, kmax, limits, "gap inequality enumeration");
  const auto a = level_probs(mu, kmax);
  const auto b = level_probs(nu, kmax);
  std::vector<GapCheck> out;
  for (std::size_t k = 1; k <= kmax; ++k) {
    const double lhs = dot(a[k], b[k]);
    for (std::size_t i = 0; i <= k; ++i) {
      for (std::size_t g = 0; i + g <= k; ++g) {
        const std::size_t j = k - i - g;
        out.push_back({i, g, j, lhs, gap_rhs(a[k], b[k], s, i, g, j)});
      }
    }
  }
  return out;
}

std::optional<double> divergence_tail_bound(const Measure& mu, const Measure& nu,
                                            std::size_t m_max) {
  require_pair(mu, nu, "divergence_tail_bound");
  const MixtureModel* mix = mu.mixture_model();
  const bool split_mu = mix != nullptr;
  if (!split_mu) mix = nu.mixture_model();
  if (mix != nullptr && mu.dirac_model() == nullptr && nu.dirac_model() == nullptr) {
    const Measure& other = split_mu ? nu : mu;
    const auto first = divergence_tail_bound(mix->first, other, m_max);
    const auto second = divergence_tail_bound(mix->second, other, m_max);
    if (!first || !second) return std::nullopt;
    return mix->lambda * *first + (1.0 - mix->lambda) * *second;
  }

  const auto* da = mu.dirac_model();
  const auto* db = nu.dirac_model();
  if (da != nullptr || db != nullptr) {
    const DiracModel& d = da != nullptr ? *da : *db;
    const Measure& other = da != nullptr ? nu : mu;
    const double next = std::exp(sequence_dirac(d, other, m_max + 1).back());
    if (next == 0.0) return 0.0;
    if (const auto* inner = other.mixture_model()) {
      const Measure& dirac_side = da != nullptr ? mu : nu;
      const auto first = divergence_tail_bound(dirac_side, inner->first, m_max);
      const auto second = divergence_tail_bound(dirac_side, inner->second, m_max);
      if (!first || !second) return std::nullopt;
      return inner->lambda * *first + (1.0 - inner->lambda) * *second;
    }
    if (other.kind() != MeasureKind::iid && other.kind() != MeasureKind::markov) return std::nullopt;
    const double pmax = max_step_prob(other);
    if (!(pmax < 1.0)) return std::nullopt;
    return next / (1.0 - pmax);
  }

  const auto* ia = mu.iid_model();
  const auto* ib = nu.iid_model();
  if (ia != nullptr && ib != nullptr) {
    const double e1 = std::exp(log_e1_iid(*ia, *ib));
    const double next = std::pow(e1, static_cast<double>(m_max + 1));
    if (next == 0.0) return 0.0;
    if (!(e1 < 1.0)) return std::nullopt;
    return next / (1.0 - e1);
  }

  const auto ta = as_transfer(mu);
  const auto tb = as_transfer(nu);
  if (ta && tb) return transfer_tail_bound(product_of(*ta, *tb), m_max);
  return std::nullopt;
}

double divergence_floor(const Measure& mu, const Measure& nu) {
  const MixtureModel* mix = mu.mixture_model();
  const bool split_mu = mix != nullptr;
  if (!split_mu) mix = nu.mixture_model();
  if (mix != nullptr) {
    const Measure& other = split_mu ? nu : mu;
    return mix->lambda * divergence_floor(mix->first, other) +
           (1.0 - mix->lambda) * divergence_floor(mix->second, other);
  }
  const auto* da = mu.dirac_model();
  const auto* db = nu.dirac_model();
  if (da != nullptr && db != nullptr) return dirac_equal(*da, *db) ? 1.0 : 0.0;
  const auto* ia = mu.iid_model();
  const auto* ib = nu.iid_model();
  if (ia != nullptr && ib != nullptr && log_e1_iid(*ia, *ib) == 0.0) return 1.0;
  return 0.0;
}

}  // namespace recur
