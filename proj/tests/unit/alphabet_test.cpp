#include <gtest/gtest.h>

#include "recur/alphabet.hpp"
#include "recur/error.hpp"
#include "recur/limits.hpp"

namespace recur {
namespace {

TEST(Alphabet, RejectsEmptyAndDuplicates) {
  EXPECT_THROW(Alphabet({}), Error);
  EXPECT_THROW(Alphabet({"a", "b", "a"}), Error);
}

TEST(Alphabet, FromCharsAndLookup) {
  const auto a = Alphabet::from_chars("ABCDR");
  EXPECT_EQ(a.size(), 5U);
  EXPECT_EQ(a.index_of("R"), 4U);
  EXPECT_FALSE(a.find("Z").has_value());
  EXPECT_TRUE(a.single_char());
  EXPECT_THROW((void)a.index_of("Z"), Error);
}

TEST(Alphabet, SplitLabels) {
  EXPECT_EQ(split_labels("ABRA"), (std::vector<std::string>{"A", "B", "R", "A"}));
  EXPECT_EQ(split_labels("a1,b2, a1"), (std::vector<std::string>{"a1", "b2", "a1"}));
  EXPECT_EQ(split_labels("x y"), (std::vector<std::string>{"x", "y"}));
}

TEST(Word, ParseBareAndSeparated) {
  const Alphabet multi({"a1", "b2"});
  const auto w = Word::parse(multi, "a1,b2,b2");
  EXPECT_EQ(w.size(), 3U);
  EXPECT_EQ(w[2], 1U);
  EXPECT_EQ(w.str(), "a1,b2,b2");
  const auto bare = Word::parse(Alphabet::binary(), "0110");
  EXPECT_EQ(bare.str(), "0110");
  EXPECT_EQ(bare.prefix(2).str(), "01");
  EXPECT_THROW(Word::parse(Alphabet::binary(), "012"), Error);
}

TEST(Word, AlphabetOfTexts) {
  const std::string_view texts[] = {"ABRACADABRA", "ACADABRABRA"};
  const auto a = alphabet_of_texts(texts);
  EXPECT_EQ(a.labels(), (std::vector<std::string>{"A", "B", "C", "D", "R"}));
}

TEST(Limits, CheckedWordCount) {
  Limits l;
  l.enumeration_cap = 1000;
  EXPECT_EQ(checked_word_count(10, 3, l, "t"), 1000U);
  try {
    checked_word_count(10, 4, l, "t");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::cap_exceeded);
  }
  EXPECT_EQ(saturating_pow(2, 70), UINT64_MAX);
}

}  // namespace
}  // namespace recur
