#include <gtest/gtest.h>

#include "recur/error.hpp"
#include "recur/overlap.hpp"
#include "support/oracles.hpp"

namespace recur {
namespace {

class Abracadabra : public ::testing::Test {
 protected:
  Alphabet alpha = Alphabet::from_chars("ABCDEHKRV");
  Word x = Word::parse(alpha, "ABRACADABRA");
  Word y = Word::parse(alpha, "AVRAKEHDABRA");
  Word z = Word::parse(alpha, "ABBADAKEDABRA");
};

TEST_F(Abracadabra, GoldenShortestPaths) {
  EXPECT_EQ(shortest_path(x, y.prefix(11)), 8U);
  EXPECT_EQ(shortest_path(x, z.prefix(11)), 9U);
  EXPECT_EQ(shortest_path(y.prefix(11), x), 10U);
  EXPECT_EQ(shortest_path(z.prefix(11), x), 10U);
  EXPECT_EQ(shortest_path(x, x), 7U);
  EXPECT_EQ(shortest_path(y, y), 11U);
  EXPECT_EQ(shortest_path(z, z), 12U);
}

TEST_F(Abracadabra, GoldenReturns) {
  EXPECT_EQ(shortest_return(y), 11U);
  EXPECT_EQ(shortest_return(z), 12U);
  EXPECT_EQ(shortest_return(Word::parse(alpha, "AAAA")), 1U);
  EXPECT_EQ(shortest_return(Word::parse(alpha, "ABDE")), 4U);
}

TEST_F(Abracadabra, CrossOverlapOfWordWithItself) {
  EXPECT_EQ(cross_overlaps(x, x).overlaps, (std::vector<std::size_t>{1, 4}));
  EXPECT_TRUE(border_profile(Word::parse(alpha, "AB")).borders.empty());
  EXPECT_EQ(border_profile(Word::parse(alpha, "AAAA")).borders,
            (std::vector<std::size_t>{1, 2, 3}));
}

TEST_F(Abracadabra, BorderProfile) {
  const auto p = border_profile(x);
  EXPECT_EQ(p.borders, (std::vector<std::size_t>{1, 4}));
  EXPECT_TRUE(p.contains(4));
  EXPECT_FALSE(p.contains(2));
  EXPECT_EQ(shortest_return(x), 7U);
}

TEST(Overlap, FailureFunctionKnownValues) {
  const std::vector<Symbol> w{0, 0, 1, 0, 0, 0, 1};
  EXPECT_EQ(failure_function(w), (std::vector<std::size_t>{0, 1, 0, 1, 2, 2, 3}));
}

TEST(Overlap, CrossOverlapsTruncated) {
  const auto bin = Alphabet::binary();
  EXPECT_TRUE(cross_overlaps(Word::parse(bin, "1111"), Word::parse(bin, "0111")).contains(3));
  const auto a = Alphabet::from_chars("ABCDR");
  const auto prof = cross_overlaps(Word::parse(a, "ABRA"), Word::parse(a, "CABR"));
  EXPECT_EQ(prof.overlaps, (std::vector<std::size_t>{3}));
  EXPECT_TRUE(cross_overlaps(Word::parse(a, "AB"), Word::parse(a, "CD")).overlaps.empty());
  const auto p2 = cross_overlaps(Word::parse(a, "ABRA"), Word::parse(a, "RAAB"));
  EXPECT_EQ(p2.overlaps, (std::vector<std::size_t>{2}));
}

TEST(Overlap, Errors) {
  const auto a = Alphabet::binary();
  try {
    (void)shortest_path(Word::parse(a, "01"), Word::parse(a, "011"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::length_mismatch);
  }
  try {
    (void)shortest_path(Word::parse(a, "01"), Word::parse(Alphabet::from_chars("01x"), "01"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::alphabet_mismatch);
  }
}

TEST(Overlap, SingleSymbolWords) {
  const std::vector<Symbol> a{0};
  const std::vector<Symbol> b{1};
  EXPECT_EQ(shortest_path(a, b), 1U);
  EXPECT_EQ(shortest_path(a, a), 1U);
}

TEST(Overlap, MatchesNaiveOnAllShortPairs) {
  for (std::size_t s : {2U, 3U}) {
    for (std::size_t n = 1; n <= (s == 2 ? 7U : 4U); ++n) {
      const auto words = testing::all_words(s, n);
      for (const auto& u : words) {
        for (const auto& v : words) {
          ASSERT_EQ(shortest_path(u, v), testing::naive_shortest_path(u, v));
          const auto prof = cross_overlaps(u, v);
          const auto naive = testing::naive_overlaps(u, v);
          ASSERT_EQ(prof.overlaps, std::vector<std::size_t>(naive.begin(), naive.end()));
        }
      }
    }
  }
}

TEST(Overlap, ShortestPathIsMinimalExtensionWaitingTime) {
  // T(x, y) = min over extensions z of y by n symbols of the first
  // occurrence of x in z.
  const std::size_t n = 4;
  const auto words = testing::all_words(2, n);
  const auto tails = testing::all_words(2, n);
  for (const auto& x : words) {
    for (const auto& y : words) {
      std::size_t best = SIZE_MAX;
      for (const auto& t : tails) {
        std::vector<Symbol> zz = y;
        zz.insert(zz.end(), t.begin(), t.end());
        const auto w = testing::naive_waiting_time(x, zz);
        if (w) best = std::min(best, *w);
      }
      ASSERT_EQ(shortest_path(x, y), best);
    }
  }
}

TEST(Overlap, WaitingTime) {
  const auto a = Alphabet::from_chars("ABCDR");
  const auto x = Word::parse(a, "ABRA");
  EXPECT_EQ(waiting_time(x, Word::parse(a, "ABRACADABRA")), 7U);
  EXPECT_FALSE(waiting_time(x, Word::parse(a, "ABRACAD")).has_value());
  const std::vector<Symbol> xs{1, 1};
  const std::vector<Symbol> st{1, 1, 1};
  EXPECT_EQ(waiting_time(xs, st), 1U);
}

TEST(Overlap, ConstrainedPathUnderFullShiftEqualsUnconstrained) {
  const auto a = Alphabet::binary();
  const AdmissibilityOracle all = [](std::span<const Symbol>) { return true; };
  for (const auto& xs : testing::all_words(2, 4)) {
    for (const auto& ys : testing::all_words(2, 4)) {
      const Word x(a, xs);
      const Word y(a, ys);
      ASSERT_EQ(shortest_path_constrained(x, y, all, 8), shortest_path(x, y));
    }
  }
}

TEST(Overlap, ConstrainedPathAvoidingPattern) {
  // Support: no two consecutive ones.
  const AdmissibilityOracle no11 = [](std::span<const Symbol> w) {
    for (std::size_t i = 1; i < w.size(); ++i) {
      if (w[i] == 1 && w[i - 1] == 1) return false;
    }
    return true;
  };
  const auto a = Alphabet::binary();
  const auto x = Word::parse(a, "100");
  const auto y = Word::parse(a, "001");
  EXPECT_EQ(shortest_path(x, y), 2U);
  EXPECT_EQ(shortest_path_constrained(x, y, no11, 10), 2U);
  const auto x2 = Word::parse(a, "101");
  const auto y2 = Word::parse(a, "001");
  EXPECT_EQ(shortest_path(x2, y2), 2U);
  EXPECT_EQ(shortest_path_constrained(x2, y2, no11, 10), 2U);
  const auto y3 = Word::parse(a, "010");
  EXPECT_EQ(shortest_path(x2, y3), 1U);
  EXPECT_EQ(shortest_path_constrained(x2, y3, no11, 10), 1U);
  const auto x4 = Word::parse(a, "100");
  const auto y4 = Word::parse(a, "101");
  EXPECT_EQ(shortest_path(x4, y4), 2U);
  EXPECT_EQ(shortest_path_constrained(x4, y4, no11, 10), 2U);
}

TEST(Overlap, ConstrainedPathMatchesExhaustiveMarkovSearch) {
  const auto a = Alphabet::from_chars("012");
  const auto m = Measure::markov(a, Matrix({{0.5, 0.0, 0.5}, {0.3, 0.3, 0.4}, {0.2, 0.5, 0.3}}));
  const AdmissibilityOracle oracle = [&](std::span<const Symbol> w) {
    return m.cylinder(w).positive();
  };
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto words = testing::all_words(3, n);
    for (const auto& xs : words) {
      if (!oracle(xs)) continue;
      for (const auto& ys : words) {
        if (!oracle(ys)) continue;
        // Smallest k <= n with some admissible z of length 2n, z = y..., x at k.
        std::optional<std::size_t> expect;
        for (const auto& tail : testing::all_words(3, n)) {
          std::vector<Symbol> zz = ys;
          zz.insert(zz.end(), tail.begin(), tail.end());
          if (!oracle(zz)) continue;
          const auto w = testing::naive_waiting_time(xs, zz);
          if (w && (!expect || *w < *expect)) expect = w;
        }
        const auto got = shortest_path_constrained(Word(a, xs), Word(a, ys), oracle, n);
        ASSERT_EQ(got, expect);
      }
    }
  }
}

TEST(Overlap, GapFillingPrunes) {
  const AdmissibilityOracle no11 = [](std::span<const Symbol> w) {
    for (std::size_t i = 1; i < w.size(); ++i) {
      if (w[i] == 1 && w[i - 1] == 1) return false;
    }
    return true;
  };
  const std::vector<Symbol> head{1};
  const std::vector<Symbol> tail{1};
  EXPECT_FALSE(find_gap_filling(head, tail, 0, 2, no11).has_value());
  const auto g1 = find_gap_filling(head, tail, 1, 2, no11);
  ASSERT_TRUE(g1.has_value());
  EXPECT_EQ(*g1, std::vector<Symbol>{0});
}

}  // namespace
}  // namespace recur
