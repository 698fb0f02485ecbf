#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "recur/distribution.hpp"
#include "recur/divergence.hpp"
#include "recur/overlap.hpp"
#include "support/oracles.hpp"

namespace recur {
namespace {

std::vector<Measure> stationary_zoo() {
  Rng rng(2024);
  const auto d = Measure::dirac_periodic(Word::parse(Alphabet::binary(), "1"));
  return {
      Measure::bernoulli(0.3),
      Measure::iid(Alphabet::numbered(3), testing::random_probs(3, rng)),
      Measure::markov(Alphabet::numbered(3), testing::random_stochastic(3, rng)),
      Measure::markov(Alphabet::numbered(3),
                      Matrix({{0.5, 0.0, 0.5}, {0.3, 0.3, 0.4}, {0.2, 0.5, 0.3}})),
      Measure::mixture(0.4, d, Measure::bernoulli(0.3)),
      Measure::house_of_cards({0.6, 0.3}, 24),
      Measure::house_of_cards_forced_squares(0.5, 40),
  };
}

// m(w) = sum_a m(a w) = sum_a m(w a).
TEST(Property, CylindersAreConsistentAndShiftInvariant) {
  Rng rng(11);
  for (const auto& m : stationary_zoo()) {
    const std::size_t s = m.alphabet().size();
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t len = 1 + rng.next() % 12;
      std::vector<Symbol> w(len);
      for (auto& c : w) c = static_cast<Symbol>(rng.next() % s);
      const double base = m.cylinder(w).prob();
      double left = 0.0;
      double right = 0.0;
      for (Symbol a = 0; a < s; ++a) {
        std::vector<Symbol> lw{a};
        lw.insert(lw.end(), w.begin(), w.end());
        std::vector<Symbol> rw = w;
        rw.push_back(a);
        left += m.cylinder(lw).prob();
        right += m.cylinder(rw).prob();
      }
      ASSERT_NEAR(right, base, 1e-12 * std::max(1.0, base)) << m.describe();
      ASSERT_NEAR(left, base, 1e-12 * std::max(1.0, base)) << m.describe();
    }
  }
}

TEST(Property, EvaluatorAgreesWithCylinder) {
  Rng rng(12);
  for (const auto& m : stationary_zoo()) {
    const std::size_t s = m.alphabet().size();
    auto ev = m.evaluator();
    std::vector<Symbol> w;
    for (int step = 0; step < 300; ++step) {
      if (!w.empty() && (w.size() >= 14 || rng.next() % 3 == 0)) {
        ev->pop();
        w.pop_back();
      } else {
        const auto a = static_cast<Symbol>(rng.next() % s);
        ev->push(a);
        w.push_back(a);
      }
      const double expect = m.cylinder(w).log_prob;
      if (expect == kNegInf) {
        ASSERT_EQ(ev->log_prob(), kNegInf);
      } else {
        ASSERT_NEAR(ev->log_prob(), expect, 1e-12);
      }
    }
  }
}

TEST(Property, MillionSampleFrequencies) {
  const auto m = Measure::house_of_cards({0.6, 0.3}, 24);
  Rng rng(3);
  constexpr std::size_t kDraws = 1000000;
  constexpr std::size_t kLen = 4;
  std::map<std::vector<Symbol>, std::size_t> counts;
  std::vector<Symbol> buf;
  for (std::size_t i = 0; i < kDraws; ++i) {
    buf.clear();
    m.sample_into(kLen, rng, buf);
    ++counts[buf];
  }
  for (const auto& w : testing::all_words(2, kLen)) {
    const double p = m.cylinder(w).prob();
    const double freq = static_cast<double>(counts[w]) / kDraws;
    EXPECT_NEAR(freq, p, 5.0 * std::sqrt(p * (1 - p) / kDraws) + 1e-12);
  }
}

TEST(Property, TailIdentityEqualsEventCount) {
  // P(n - T >= k) computed pair by pair equals E(k) + a_{k,n}.
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto mu = Measure::markov(Alphabet::binary(), testing::random_stochastic(2, rng));
    const auto nu = Measure::iid(Alphabet::binary(), testing::random_probs(2, rng));
    const std::size_t n = 7;
    const auto t = law_exact(mu, nu, n);
    const auto words = testing::all_words(2, n);
    for (std::size_t k = 1; k < n; ++k) {
      double direct = 0.0;
      for (const auto& x : words) {
        for (const auto& y : words) {
          if (testing::naive_longest_overlap(x, y) >= k) {
            direct += mu.cylinder(x).prob() * nu.cylinder(y).prob();
          }
        }
      }
      ASSERT_NEAR(t.tail[k], direct, 1e-12);
    }
  }
}

TEST(Property, DivergenceMonotone) {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const auto mu = Measure::markov(Alphabet::numbered(3), testing::random_stochastic(3, rng));
    const auto nu = Measure::markov(Alphabet::numbered(3), testing::random_stochastic(3, rng));
    const auto seq = divergence_sequence(mu, nu, 30);
    for (std::size_t k = 2; k <= 30; ++k) {
      ASSERT_LE(seq.log_value(k), seq.log_value(k - 1) + 1e-12);
    }
  }
}

}  // namespace
}  // namespace recur
