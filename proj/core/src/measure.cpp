#include "recur/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <variant>

#include "recur/error.hpp"

namespace recur {

std::string_view to_string(MeasureKind kind) noexcept {
  switch (kind) {
    case MeasureKind::iid: return "iid";
    case MeasureKind::markov: return "markov";
    case MeasureKind::dirac: return "dirac";
    case MeasureKind::mixture: return "mixture";
    case MeasureKind::renewal: return "renewal_hoc";
  }
  return "unknown";
}

struct Measure::Model {
  Alphabet alphabet;
  std::variant<IidModel, MarkovModel, DiracModel, MixtureModel, RenewalModel> body;
};

namespace {

constexpr double kSumTolerance = 1e-12;
constexpr double kStationaryTolerance = 1e-14;
constexpr double kStationaryAcceptance = 1e-12;
constexpr std::size_t kStationaryIterations = 1000000;

void check_probability_vector(std::span<const double> probs, std::string_view field) {
  double sum = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!std::isfinite(probs[i]) || probs[i] < 0.0) {
      throw Error(ErrorKind::invariant, std::string(field) + "[" + std::to_string(i) +
                                            "] must be a finite non-negative number");
    }
    sum += probs[i];
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << field << ": entries sum to " << sum << ", expected 1";
    throw Error(ErrorKind::invariant, msg.str());
  }
}

std::vector<double> cumulative_of(std::span<const double> probs) {
  std::vector<double> out(probs.size());
  std::partial_sum(probs.begin(), probs.end(), out.begin());
  return out;
}

std::vector<double> logs_of(std::span<const double> values) {
  std::vector<double> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(), safe_log);
  return out;
}

/// Inverse-CDF draw; falls back to the last positive entry when rounding
/// leaves u above the final cumulative value.
Symbol draw(std::span<const double> cumulative, double u) {
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  if (it != cumulative.end()) return static_cast<Symbol>(it - cumulative.begin());
  std::size_t i = cumulative.size() - 1;
  while (i > 0 && cumulative[i] == cumulative[i - 1]) --i;
  return static_cast<Symbol>(i);
}

double stationary_residual(const Matrix& p, std::span<const double> pi) {
  const auto next = p.apply_left(pi);
  double r = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i) r += std::abs(next[i] - pi[i]);
  return r;
}

/// Solves pi (P - I) = 0, sum pi = 1 by Gaussian elimination.
std::vector<double> stationary_direct(const Matrix& p) {
  const std::size_t n = p.rows();
  Matrix a(n, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = p(j, i) - (i == j ? 1.0 : 0.0);
  }
  for (std::size_t j = 0; j < n; ++j) a(n - 1, j) = 1.0;
  a(n - 1, n) = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    }
    for (std::size_t c = 0; c <= n; ++c) std::swap(a(col, c), a(pivot, c));
    const double d = a(col, col);
    if (d == 0.0) continue;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a(r, col) / d;
      if (f == 0.0) continue;
      for (std::size_t c = col; c <= n; ++c) a(r, c) -= f * a(col, c);
    }
  }
  std::vector<double> pi(n);
  for (std::size_t i = 0; i < n; ++i) pi[i] = std::max(0.0, a(i, n) / a(i, i));
  const double s = std::accumulate(pi.begin(), pi.end(), 0.0);
  for (auto& x : pi) x /= s;
  return pi;
}

/// Power iteration on the lazy chain (I + P) / 2, which shares the
/// stationary vector and is aperiodic.
std::vector<double> stationary_vector(const Matrix& p) {
  const std::size_t n = p.rows();
  std::vector<double> pi(n, 1.0 / static_cast<double>(n));
  for (std::size_t it = 0; it < kStationaryIterations; ++it) {
    auto next = p.apply_left(pi);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = 0.5 * (next[i] + pi[i]);
      sum += next[i];
    }
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] /= sum;
      change += std::abs(next[i] - pi[i]);
    }
    pi = std::move(next);
    if (change <= kStationaryTolerance) break;
  }
  // Polish with the direct solve and keep whichever satisfies pi P = pi better.
  auto direct = stationary_direct(p);
  if (stationary_residual(p, direct) < stationary_residual(p, pi)) pi = std::move(direct);
  return pi;
}

std::string join_labels(const Alphabet& alphabet, std::span<const std::size_t> states) {
  std::string out = "{";
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (i > 0) out += ", ";
    out += alphabet.label(static_cast<Symbol>(states[i]));
  }
  return out + "}";
}

// ---- evaluators -----------------------------------------------------------

class IidEvaluator final : public PrefixEvaluator {
 public:
  explicit IidEvaluator(const IidModel& model) : model_(model) { logs_.push_back(0.0); }
  void push(Symbol s) override { logs_.push_back(logs_.back() + model_.log_probs[s]); }
  void pop() override { logs_.pop_back(); }
  [[nodiscard]] double log_prob() const override { return logs_.back(); }
  [[nodiscard]] std::size_t depth() const override { return logs_.size() - 1; }

 private:
  const IidModel& model_;
  std::vector<double> logs_;
};

class MarkovEvaluator final : public PrefixEvaluator {
 public:
  explicit MarkovEvaluator(const MarkovModel& model) : model_(model) { logs_.push_back(0.0); }
  void push(Symbol s) override {
    const double step = symbols_.empty() ? model_.log_stationary[s]
                                         : model_.log_transition(symbols_.back(), s);
    logs_.push_back(logs_.back() + step);
    symbols_.push_back(s);
  }
  void pop() override {
    logs_.pop_back();
    symbols_.pop_back();
  }
  [[nodiscard]] double log_prob() const override { return logs_.back(); }
  [[nodiscard]] std::size_t depth() const override { return symbols_.size(); }

 private:
  const MarkovModel& model_;
  std::vector<double> logs_;
  std::vector<Symbol> symbols_;
};

class DiracEvaluator final : public PrefixEvaluator {
 public:
  explicit DiracEvaluator(const DiracModel& model) : model_(model) {}
  void push(Symbol s) override {
    if (mismatch_ == kNone && model_.symbol_at(depth_) != s) mismatch_ = depth_;
    ++depth_;
  }
  void pop() override {
    --depth_;
    if (mismatch_ == depth_) mismatch_ = kNone;
  }
  [[nodiscard]] double log_prob() const override { return mismatch_ == kNone ? 0.0 : kNegInf; }
  [[nodiscard]] std::size_t depth() const override { return depth_; }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  const DiracModel& model_;
  std::size_t depth_ = 0;
  std::size_t mismatch_ = kNone;
};

class MixtureEvaluator final : public PrefixEvaluator {
 public:
  explicit MixtureEvaluator(const MixtureModel& model)
      : log_lambda_(std::log(model.lambda)),
        log_rest_(std::log1p(-model.lambda)),
        first_(model.first.evaluator()),
        second_(model.second.evaluator()) {}
  void push(Symbol s) override {
    first_->push(s);
    second_->push(s);
  }
  void pop() override {
    first_->pop();
    second_->pop();
  }
  [[nodiscard]] double log_prob() const override {
    return log_add(log_lambda_ + first_->log_prob(), log_rest_ + second_->log_prob());
  }
  [[nodiscard]] std::size_t depth() const override { return first_->depth(); }

 private:
  double log_lambda_;
  double log_rest_;
  std::unique_ptr<PrefixEvaluator> first_;
  std::unique_ptr<PrefixEvaluator> second_;
};

/// Forward filter over the hidden house-of-cards state. Each level keeps
/// the normalized filtering distribution and the accumulated log scale.
class RenewalEvaluator final : public PrefixEvaluator {
 public:
  explicit RenewalEvaluator(const RenewalModel& model) : model_(model) {}

  void push(Symbol s) override {
    const std::size_t states = model_.q.size();
    Level next;
    next.alpha.assign(states, 0.0);
    if (levels_.empty()) {
      if (s == 1) {
        next.alpha[0] = model_.stationary[0];
      } else {
        for (std::size_t y = 1; y < states; ++y) next.alpha[y] = model_.stationary[y];
      }
      next.log_scale = 0.0;
    } else {
      const Level& top = levels_.back();
      next.log_scale = top.log_scale;
      if (top.log_scale != kNegInf) {
        if (s == 1) {
          double reset = 0.0;
          for (std::size_t y = 0; y < states; ++y) reset += top.alpha[y] * (1.0 - model_.q[y]);
          next.alpha[0] = reset;
        } else {
          for (std::size_t y = 0; y + 1 < states; ++y) next.alpha[y + 1] = top.alpha[y] * model_.q[y];
        }
      }
    }
    normalize(next);
    levels_.push_back(std::move(next));
  }

  void pop() override { levels_.pop_back(); }

  [[nodiscard]] double log_prob() const override {
    return levels_.empty() ? 0.0 : levels_.back().log_scale;
  }
  [[nodiscard]] std::size_t depth() const override { return levels_.size(); }

 private:
  struct Level {
    std::vector<double> alpha;
    double log_scale = 0.0;
  };

  static void normalize(Level& level) {
    if (level.log_scale == kNegInf) return;
    double sum = 0.0;
    for (double a : level.alpha) sum += a;
    if (sum <= 0.0) {
      level.log_scale = kNegInf;
      return;
    }
    for (double& a : level.alpha) a /= sum;
    level.log_scale += std::log(sum);
  }

  const RenewalModel& model_;
  std::vector<Level> levels_;
};

}  // namespace

Symbol DiracModel::symbol_at(std::uint64_t i) const noexcept {
  if (pattern == Pattern::periodic) return period[i % period.size()];
  // Block s (s >= 1) covers positions [2^s - 2, 2^(s+1) - 2); odd blocks are 0.
  const std::uint64_t shifted = i + 2;
  unsigned s = 0;
  for (std::uint64_t v = shifted; v > 1; v >>= 1U) ++s;
  return (s % 2 == 1) ? 0U : 1U;
}

// ---- construction ---------------------------------------------------------

Measure Measure::iid(Alphabet alphabet, std::vector<double> probs) {
  if (probs.size() != alphabet.size()) {
    throw Error(ErrorKind::invariant, "probs: expected " + std::to_string(alphabet.size()) +
                                          " entries, got " + std::to_string(probs.size()));
  }
  check_probability_vector(probs, "probs");
  IidModel model;
  model.log_probs = logs_of(probs);
  model.cumulative = cumulative_of(probs);
  model.probs = std::move(probs);
  return Measure(std::make_shared<const Model>(Model{std::move(alphabet), std::move(model)}));
}

Measure Measure::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::invariant, "bernoulli: p must lie in [0, 1]");
  return iid(Alphabet::binary(), {1.0 - p, p});
}

Measure Measure::uniform(Alphabet alphabet) {
  const std::size_t s = alphabet.size();
  return iid(std::move(alphabet), std::vector<double>(s, 1.0 / static_cast<double>(s)));
}

Measure Measure::markov(Alphabet alphabet, Matrix transition) {
  const std::size_t n = alphabet.size();
  if (!transition.square() || transition.rows() != n) {
    throw Error(ErrorKind::invariant, "transition: expected a " + std::to_string(n) + "x" +
                                          std::to_string(n) + " matrix");
  }
  for (std::size_t r = 0; r < n; ++r) {
    check_probability_vector(transition.row(r), "transition[" + std::to_string(r) + "]");
  }
  if (const auto bad = unreachable_states(transition); !bad.empty()) {
    throw Error(ErrorKind::invariant, "transition: reducible matrix; states " +
                                          join_labels(alphabet, bad) +
                                          " are not mutually reachable with state " +
                                          alphabet.label(0));
  }
  MarkovModel model;
  model.stationary = stationary_vector(transition);
  model.stationary_residual = stationary_residual(transition, model.stationary);
  if (model.stationary_residual > kStationaryAcceptance) {
    throw Error(ErrorKind::invariant, "transition: stationary vector residual " +
                                          std::to_string(model.stationary_residual) +
                                          " exceeds tolerance");
  }
  model.log_stationary = logs_of(model.stationary);
  model.stationary_cumulative = cumulative_of(model.stationary);
  model.log_transition = Matrix(n, n);
  model.cumulative = Matrix(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      model.log_transition(r, c) = safe_log(transition(r, c));
      acc += transition(r, c);
      model.cumulative(r, c) = acc;
    }
  }
  model.transition = std::move(transition);
  return Measure(std::make_shared<const Model>(Model{std::move(alphabet), std::move(model)}));
}

Measure Measure::dirac_periodic(Word period) {
  if (period.empty()) throw Error(ErrorKind::parse, "dirac: periodic pattern must be non-empty");
  DiracModel model;
  model.pattern = DiracModel::Pattern::periodic;
  model.period.assign(period.symbols().begin(), period.symbols().end());
  return Measure(std::make_shared<const Model>(Model{period.alphabet(), std::move(model)}));
}

Measure Measure::dirac_blocks() {
  DiracModel model;
  model.pattern = DiracModel::Pattern::blocks;
  return Measure(std::make_shared<const Model>(Model{Alphabet::binary(), std::move(model)}));
}

Measure Measure::mixture(double lambda, Measure first, Measure second) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw Error(ErrorKind::invariant, "lambda: mixture weight must lie in (0, 1)");
  }
  require_same_alphabet(first.alphabet(), second.alphabet(), "mixture");
  Alphabet alphabet = first.alphabet();
  return Measure(std::make_shared<const Model>(
      Model{std::move(alphabet), MixtureModel{lambda, std::move(first), std::move(second)}}));
}

Measure Measure::house_of_cards(std::vector<double> q, std::size_t y_max) {
  if (q.empty()) throw Error(ErrorKind::invariant, "q: at least one branch probability is required");
  if (y_max == 0) throw Error(ErrorKind::invariant, "y_max must be positive");
  if (q.size() > y_max + 1) {
    throw Error(ErrorKind::invariant, "q: " + std::to_string(q.size()) +
                                          " entries exceed y_max + 1 = " + std::to_string(y_max + 1));
  }
  for (std::size_t y = 0; y < q.size(); ++y) {
    if (!(q[y] >= 0.0 && q[y] <= 1.0)) {
      throw Error(ErrorKind::invariant, "q[" + std::to_string(y) + "] must lie in [0, 1]");
    }
  }
  RenewalModel model;
  model.q = std::move(q);
  model.q.resize(y_max + 1, model.q.back());
  model.q[y_max] = 0.0;
  model.stationary.resize(y_max + 1);
  double weight = 1.0;
  for (std::size_t y = 0; y <= y_max; ++y) {
    model.stationary[y] = weight;
    weight *= model.q[y];
  }
  const double total = std::accumulate(model.stationary.begin(), model.stationary.end(), 0.0);
  for (double& p : model.stationary) p /= total;
  model.stationary_cumulative = cumulative_of(model.stationary);
  return Measure(std::make_shared<const Model>(Model{Alphabet::binary(), std::move(model)}));
}

Measure Measure::house_of_cards_forced_squares(double q_free, std::size_t y_max) {
  if (!(q_free > 0.0 && q_free < 1.0)) {
    throw Error(ErrorKind::invariant, "q_free must lie in (0, 1)");
  }
  std::vector<double> q(y_max + 1, q_free);
  for (std::size_t n = 0; n * n <= y_max; ++n) {
    for (std::size_t y = n * n; y <= std::min(y_max, n * n + n); ++y) q[y] = 1.0;
  }
  return house_of_cards(std::move(q), y_max);
}

// ---- accessors ------------------------------------------------------------

MeasureKind Measure::kind() const noexcept { return static_cast<MeasureKind>(model_->body.index()); }

const Alphabet& Measure::alphabet() const noexcept { return model_->alphabet; }

const IidModel* Measure::iid_model() const noexcept { return std::get_if<IidModel>(&model_->body); }
const MarkovModel* Measure::markov_model() const noexcept {
  return std::get_if<MarkovModel>(&model_->body);
}
const DiracModel* Measure::dirac_model() const noexcept {
  return std::get_if<DiracModel>(&model_->body);
}
const MixtureModel* Measure::mixture_model() const noexcept {
  return std::get_if<MixtureModel>(&model_->body);
}
const RenewalModel* Measure::renewal_model() const noexcept {
  return std::get_if<RenewalModel>(&model_->body);
}

std::unique_ptr<PrefixEvaluator> Measure::evaluator() const {
  return std::visit(
      [](const auto& model) -> std::unique_ptr<PrefixEvaluator> {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, IidModel>) return std::make_unique<IidEvaluator>(model);
        if constexpr (std::is_same_v<T, MarkovModel>) return std::make_unique<MarkovEvaluator>(model);
        if constexpr (std::is_same_v<T, DiracModel>) return std::make_unique<DiracEvaluator>(model);
        if constexpr (std::is_same_v<T, MixtureModel>) return std::make_unique<MixtureEvaluator>(model);
        if constexpr (std::is_same_v<T, RenewalModel>) return std::make_unique<RenewalEvaluator>(model);
      },
      model_->body);
}

CylinderProb Measure::cylinder(std::span<const Symbol> word) const {
  if (const auto* m = iid_model()) {
    double acc = 0.0;
    for (Symbol s : word) acc += m->log_probs[s];
    return {acc};
  }
  if (const auto* m = markov_model()) {
    if (word.empty()) return {0.0};
    double acc = m->log_stationary[word[0]];
    for (std::size_t i = 1; i < word.size(); ++i) acc += m->log_transition(word[i - 1], word[i]);
    return {acc};
  }
  if (const auto* m = dirac_model()) {
    for (std::size_t i = 0; i < word.size(); ++i) {
      if (m->symbol_at(i) != word[i]) return {kNegInf};
    }
    return {0.0};
  }
  if (const auto* m = mixture_model()) {
    return {log_add(std::log(m->lambda) + m->first.cylinder(word).log_prob,
                    std::log1p(-m->lambda) + m->second.cylinder(word).log_prob)};
  }
  auto eval = evaluator();
  for (Symbol s : word) {
    eval->push(s);
    if (eval->log_prob() == kNegInf) return {kNegInf};
  }
  return {eval->log_prob()};
}

void Measure::sample_into(std::size_t n, Rng& rng, std::vector<Symbol>& out) const {
  if (const auto* m = iid_model()) {
    for (std::size_t i = 0; i < n; ++i) out.push_back(draw(m->cumulative, rng.uniform01()));
    return;
  }
  if (const auto* m = markov_model()) {
    if (n == 0) return;
    Symbol s = draw(m->stationary_cumulative, rng.uniform01());
    out.push_back(s);
    for (std::size_t i = 1; i < n; ++i) {
      s = draw(m->cumulative.row(s), rng.uniform01());
      out.push_back(s);
    }
    return;
  }
  if (const auto* m = dirac_model()) {
    for (std::size_t i = 0; i < n; ++i) out.push_back(m->symbol_at(i));
    return;
  }
  if (const auto* m = mixture_model()) {
    const bool first = rng.uniform01() < m->lambda;
    (first ? m->first : m->second).sample_into(n, rng, out);
    return;
  }
  const auto* m = renewal_model();
  if (n == 0) return;
  std::size_t y = draw(m->stationary_cumulative, rng.uniform01());
  out.push_back(y == 0 ? 1U : 0U);
  for (std::size_t i = 1; i < n; ++i) {
    y = rng.uniform01() < m->q[y] ? y + 1 : 0;
    out.push_back(y == 0 ? 1U : 0U);
  }
}

bool Measure::stationary() const noexcept {
  if (const auto* m = dirac_model()) {
    if (m->pattern == DiracModel::Pattern::blocks) return false;
    return std::all_of(m->period.begin(), m->period.end(),
                       [&](Symbol s) { return s == m->period.front(); });
  }
  if (const auto* m = mixture_model()) return m->first.stationary() && m->second.stationary();
  return true;
}

std::string Measure::describe() const {
  std::ostringstream out;
  out.precision(6);
  if (const auto* m = iid_model()) {
    out << "iid(";
    for (std::size_t i = 0; i < m->probs.size(); ++i) out << (i ? "," : "") << m->probs[i];
    out << ")";
  } else if (markov_model() != nullptr) {
    out << "markov(" << alphabet().size() << " states)";
  } else if (const auto* m = dirac_model()) {
    if (m->pattern == DiracModel::Pattern::blocks) {
      out << "dirac(blocks)";
    } else {
      out << "dirac(periodic " << Word(alphabet(), m->period).str() << ")";
    }
  } else if (const auto* m = mixture_model()) {
    out << "mixture(" << m->lambda << ", " << m->first.describe() << ", " << m->second.describe()
        << ")";
  } else {
    out << "renewal_hoc(y_max=" << renewal_model()->y_max() << ")";
  }
  return out.str();
}

bool Measure::same_law(const Measure& other) const {
  if (model_ == other.model_) return true;
  if (kind() != other.kind() || !(alphabet() == other.alphabet())) return false;
  if (const auto* a = iid_model()) return a->probs == other.iid_model()->probs;
  if (const auto* a = markov_model()) {
    return a->transition.to_rows() == other.markov_model()->transition.to_rows();
  }
  if (const auto* a = dirac_model()) {
    const auto* b = other.dirac_model();
    return a->pattern == b->pattern && a->period == b->period;
  }
  if (const auto* a = mixture_model()) {
    const auto* b = other.mixture_model();
    return a->lambda == b->lambda && a->first.same_law(b->first) && a->second.same_law(b->second);
  }
  return renewal_model()->q == other.renewal_model()->q;
}

}  // namespace recur
