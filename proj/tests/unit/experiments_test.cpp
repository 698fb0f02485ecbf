#include <gtest/gtest.h>

#include <cmath>

#include "recur/error.hpp"
#include "recur/experiments.hpp"
#include "recur/io.hpp"

namespace recur {
namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.mu = Measure::bernoulli(0.3);
  cfg.nu = Measure::bernoulli(0.7);
  cfg.schedule = {16, 32};
  cfg.samples = 1500;
  cfg.seed = 99;
  return cfg;
}

TEST(Experiments, ConfigValidation) {
  auto cfg = small_config();
  EXPECT_NO_THROW(cfg.validate());
  cfg.schedule = {32, 16};
  EXPECT_THROW(cfg.validate(), Error);
  cfg = small_config();
  cfg.samples = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = small_config();
  cfg.nu.reset();
  EXPECT_THROW(cfg.validate(), Error);
  cfg = small_config();
  cfg.epsilons = {0.0};
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(Experiments, ConcentrationShape) {
  const auto rep = concentration_experiment(small_config());
  ASSERT_EQ(rep.rows.size(), 2U);
  for (const auto& row : rep.rows) {
    EXPECT_EQ(row.samples, 1500U);
    EXPECT_LE(row.min, row.q05);
    EXPECT_LE(row.q05, row.median);
    EXPECT_LE(row.median, row.q95);
    EXPECT_LE(row.q95, row.max);
    EXPECT_LE(row.max, 1.0);
    ASSERT_TRUE(row.exact_bound.has_value());
    EXPECT_LE(row.frac_below, *row.exact_bound + 4 * row.frac_below_se + 1e-12);
  }
}

TEST(Experiments, ConcentrationDeterministicAcrossWorkers) {
  Limits one;
  Limits four;
  four.workers = 4;
  const auto a = io::to_json(concentration_experiment(small_config(), one)).dump();
  const auto b = io::to_json(concentration_experiment(small_config(), four)).dump();
  const auto c = io::to_json(concentration_experiment(small_config(), one)).dump();
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  auto other = small_config();
  other.seed = 100;
  EXPECT_NE(a, io::to_json(concentration_experiment(other, one)).dump());
}

TEST(Experiments, LdpIndexGuardsRounding) {
  EXPECT_EQ(ldp_index(4000, 0.1), 400U);
  EXPECT_EQ(ldp_index(10, 0.3), 3U);
  EXPECT_EQ(ldp_index(10, 0.31), 4U);
}

TEST(Experiments, LdpBoundsBracketReference) {
  const auto mu = Measure::bernoulli(0.3);
  const auto nu = Measure::bernoulli(0.7);
  const auto pt = ldp_bounds(mu, nu, 0.25, 4000);
  ASSERT_TRUE(pt.reference.has_value());
  EXPECT_LE(pt.lower_rate.value, pt.upper_rate.value + 1e-15);
  EXPECT_NEAR(pt.upper_rate.value / pt.reference->value, 1.0, 0.02);
  const auto hoc = Measure::house_of_cards({0.5}, 16);
  EXPECT_THROW((void)ldp_bounds(hoc, hoc, 0.25, 100), Error);
}

TEST(Experiments, NonconvergenceProbeUniform) {
  const auto u = Measure::uniform(Alphabet::binary());
  const auto rep = nonconvergence_probe(u, u, 12, 4000, 5);
  EXPECT_DOUBLE_EQ(rep.e1, 0.5);
  EXPECT_GT(rep.p_same, 0.3);
  std::size_t hits = 0;
  for (const auto& row : rep.rows) hits += row.hits;
  EXPECT_EQ(hits, 4000U);
}

TEST(Experiments, OscillationBlockEnds) {
  const auto rep = rate_oscillation_demo(0.3, 62);
  ASSERT_FALSE(rep.block_ends.empty());
  EXPECT_EQ(rep.block_ends.front().k, 2U);
  EXPECT_EQ(rep.block_ends.front().symbol, 0U);
  EXPECT_EQ(rep.block_ends.back().k, 62U);
  // Rate after a block of ones is lower than after a block of zeros.
  const auto& a = rep.block_ends[rep.block_ends.size() - 2];
  const auto& b = rep.block_ends.back();
  EXPECT_NE(a.symbol, b.symbol);
  EXPECT_GT(std::abs(a.rate.value - b.rate.value), 0.1);
}

TEST(Experiments, VwspGapForcedSquares) {
  const auto m = Measure::house_of_cards_forced_squares(0.5, 256);
  const auto bin = Alphabet::binary();
  for (std::size_t n : {4U, 5U}) {
    std::vector<Symbol> w(n * n + 1, 0);
    w[0] = 1;
    const Word omega(bin, w);
    EXPECT_EQ(vwsp_gap(m, omega, omega, 3 * n), n + 1) << n;
  }
}

TEST(Experiments, VwspGapFullShiftIsZero) {
  const auto prof = vwsp_profile(Measure::bernoulli(0.3), 3, 4);
  EXPECT_EQ(prof.pairs, 64U);
  EXPECT_EQ(prof.max_gap, 0U);
  EXPECT_EQ(prof.not_found, 0U);
}

TEST(Experiments, StreamIndexPacksEntryAndBlock) {
  EXPECT_EQ(stream_index(0, 3), 3U);
  EXPECT_EQ(stream_index(2, 1), (std::uint64_t{2} << 32U) | 1U);
}

}  // namespace
}  // namespace recur
