#include <gtest/gtest.h>

#include <cmath>

#include "recur/divergence.hpp"
#include "recur/error.hpp"
#include "support/oracles.hpp"

namespace recur {
namespace {

using testing::relative_error;

Measure sticky3() {
  return Measure::markov(Alphabet::from_chars("abc"),
                         Matrix({{0.6, 0.2, 0.2}, {0.2, 0.6, 0.2}, {0.2, 0.2, 0.6}}));
}

Measure skewed3() {
  return Measure::markov(Alphabet::from_chars("abc"),
                         Matrix({{0.5, 0.3, 0.2}, {0.25, 0.5, 0.25}, {0.2, 0.3, 0.5}}));
}

TEST(Divergence, BernoulliClosedForm) {
  for (double p : {0.1, 0.3, 0.49}) {
    const auto mu = Measure::bernoulli(p);
    const auto nu = Measure::bernoulli(1 - p);
    const double e1 = 2 * p * (1 - p);
    for (std::size_t k : {1U, 5U, 40U}) {
      EXPECT_LT(relative_error(std::exp(divergence(mu, nu, k)), std::pow(e1, k)), 1e-12);
    }
    const auto r = exact_rate(mu, nu);
    ASSERT_TRUE(r.has_value());
    EXPECT_LT(relative_error(r->value, -std::log(e1)), 1e-12);
  }
}

TEST(Divergence, UniformSelfRateIsLogS) {
  for (std::size_t s : {2U, 3U, 5U}) {
    const auto u = Measure::uniform(Alphabet::numbered(s));
    const auto r = exact_rate(u, u);
    ASSERT_TRUE(r.has_value());
    EXPECT_DOUBLE_EQ(r->value, std::log(static_cast<double>(s)));
    EXPECT_NEAR(renyi2(u), std::log(static_cast<double>(s)), 1e-15);
  }
}

TEST(Divergence, EnumerationMatchesNaive) {
  const auto mu = sticky3();
  const auto nu = skewed3();
  for (std::size_t k = 1; k <= 5; ++k) {
    EXPECT_LT(relative_error(std::exp(divergence_enum(mu, nu, k)),
                             testing::naive_divergence(mu, nu, k)),
              1e-13);
  }
}

TEST(Divergence, MarkovTransferMatchesEnumeration) {
  const auto mu = sticky3();
  const auto nu = skewed3();
  for (std::size_t k = 1; k <= 8; ++k) {
    EXPECT_LT(relative_error(divergence_markov(mu, nu, k), divergence_enum(mu, nu, k)), 1e-12);
  }
}

TEST(Divergence, IidMarkovMixedPair) {
  const auto mu = Measure::iid(Alphabet::from_chars("abc"), {0.2, 0.3, 0.5});
  const auto nu = skewed3();
  const auto seq = divergence_sequence(mu, nu, 6);
  for (std::size_t k = 1; k <= 6; ++k) {
    EXPECT_EQ(seq.methods[k - 1], MethodTag::transfer);
    EXPECT_LT(relative_error(seq.log_value(k), divergence_enum(mu, nu, k)), 1e-12);
  }
}

TEST(Divergence, DiracAgainstIid) {
  const auto d = Measure::dirac_periodic(Word::parse(Alphabet::binary(), "011"));
  const auto b = Measure::bernoulli(0.3);
  const auto seq = divergence_sequence(d, b, 9);
  for (std::size_t k = 1; k <= 9; ++k) {
    EXPECT_EQ(seq.methods[k - 1], MethodTag::closed_form);
    EXPECT_NEAR(seq.log_value(k), divergence_enum(d, b, k), 1e-12);
  }
  const auto r = exact_rate(d, b);
  ASSERT_TRUE(r.has_value());
  EXPECT_NEAR(r->value, -(std::log(0.7) + 2 * std::log(0.3)) / 3, 1e-12);
}

TEST(Divergence, MixtureIsLinearInLogSpace) {
  const auto d = Measure::dirac_periodic(Word::parse(Alphabet::binary(), "1"));
  const auto b = Measure::bernoulli(0.3);
  const auto mix = Measure::mixture(0.4, d, b);
  for (std::size_t k = 1; k <= 8; ++k) {
    EXPECT_LT(relative_error(divergence(mix, mix, k), divergence_enum(mix, mix, k)), 1e-12);
  }
  // Never below lambda^2.
  EXPECT_GE(std::exp(divergence(mix, mix, 200)), 0.16);
  EXPECT_NEAR(divergence_floor(mix, mix), 0.16, 1e-15);
}

TEST(Divergence, ClosedMethodRefusesEnumeration) {
  const auto hoc = Measure::house_of_cards({0.5}, 16);
  try {
    (void)divergence(hoc, hoc, 3, Method::closed);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::unsupported);
  }
  EXPECT_NO_THROW((void)divergence(hoc, hoc, 3, Method::automatic));
}

TEST(Divergence, CapAndAlphabetErrors) {
  Limits l;
  l.enumeration_cap = 100;
  try {
    (void)divergence_enum(sticky3(), sticky3(), 5, l);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::cap_exceeded);
  }
  try {
    (void)divergence_enum(sticky3(), Measure::bernoulli(0.5), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::alphabet_mismatch);
  }
  EXPECT_THROW((void)divergence_iid(sticky3(), sticky3(), 2), Error);
}

TEST(Divergence, ZeroDivergenceGivesInfiniteRate) {
  const auto a = Measure::iid(Alphabet::binary(), {1.0, 0.0});
  const auto b = Measure::iid(Alphabet::binary(), {0.0, 1.0});
  const auto rep = divergence_rate(a, b, 8);
  EXPECT_TRUE(rep.sequence.rate(3).infinite);
  EXPECT_TRUE(rep.estimate.liminf_est.infinite);
}

TEST(Divergence, RateWindowAndProvenance) {
  const auto rep = divergence_rate(sticky3(), sticky3(), 64);
  EXPECT_EQ(rep.estimate.window_lo, 32U);
  EXPECT_EQ(rep.estimate.window_hi, 64U);
  ASSERT_TRUE(rep.estimate.exact_rate.has_value());
  EXPECT_EQ(rep.estimate.provenance, "renyi2");
  EXPECT_NEAR(rep.estimate.exact_rate->value, renyi2(sticky3()), 1e-12);
  EXPECT_THROW((void)divergence_rate(sticky3(), sticky3(), 1), Error);
  const auto mixed = divergence_rate(sticky3(), skewed3(), 64);
  EXPECT_EQ(mixed.estimate.provenance, "spectral");
  // The finite-k rates converge to the spectral one from one side.
  EXPECT_NEAR(mixed.sequence.rate(64).value, mixed.estimate.exact_rate->value, 0.05);
}

TEST(Divergence, MultiplicativityForIid) {
  const auto mu = Measure::iid(Alphabet::from_chars("abc"), {0.2, 0.3, 0.5});
  const auto nu = Measure::iid(Alphabet::from_chars("abc"), {0.6, 0.1, 0.3});
  for (std::size_t i = 1; i <= 6; ++i) {
    for (std::size_t j = 1; j <= 6; ++j) {
      EXPECT_LT(relative_error(std::exp(divergence(mu, nu, i + j)),
                               std::exp(divergence(mu, nu, i)) * std::exp(divergence(mu, nu, j))),
                1e-13);
    }
  }
}

TEST(Divergence, GapInequalityHolds) {
  const auto mu = sticky3();
  const auto nu = skewed3();
  for (const auto& c : gap_inequality_table(mu, nu, 6)) {
    EXPECT_GE(c.slack(), -kGapTolerance) << c.i << "," << c.g << "," << c.j;
  }
  EXPECT_GE(check_gap_inequality(mu, nu, 2, 1, 2), -kGapTolerance);
}

TEST(Divergence, TailBoundDominatesTruncatedTail) {
  const auto mu = sticky3();
  const auto nu = skewed3();
  const auto bound = divergence_tail_bound(mu, nu, 20);
  ASSERT_TRUE(bound.has_value());
  double tail = 0.0;
  for (std::size_t m = 21; m <= 400; ++m) tail += std::exp(divergence(mu, nu, m));
  // Constant row sums make the bound exact for this pair, up to rounding.
  EXPECT_GE(*bound, tail * (1 - 1e-12));
  EXPECT_LT(*bound, 100 * tail);
}

TEST(Divergence, ParseMethod) {
  EXPECT_EQ(parse_method("auto"), Method::automatic);
  EXPECT_EQ(parse_method("enum"), Method::enumeration);
  EXPECT_EQ(parse_method("closed"), Method::closed);
  EXPECT_THROW((void)parse_method("fast"), Error);
}

}  // namespace
}  // namespace recur
