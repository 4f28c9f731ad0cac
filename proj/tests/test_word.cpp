#include <random>
#include <string>

#include <gtest/gtest.h>

#include <branchgroup/preset.hpp>

#include "oracles.hpp"

using namespace branchgroup;

namespace {

const Alphabet &gs3_alphabet() {
  static const GroupPreset g = gupta_sidki(3);
  return g.alphabet;
}

Word w(std::string_view text) { return parse_word(text, gs3_alphabet()); }
std::string f(const Word &x) { return format_word(x, gs3_alphabet()); }

} // namespace

TEST(Word, FreeReductionFoldsExponents) {
  EXPECT_EQ(f(w("a a")), "a^-1");
  EXPECT_EQ(f(w("a a a")), "1");
  EXPECT_EQ(f(w("b^4 a^-2")), "b a");
  EXPECT_EQ(f(w("a b b^-1 a^-1")), "1");
  EXPECT_TRUE(w("1").empty());
  EXPECT_TRUE(w("").empty());
}

TEST(Word, SubscriptsConjugateByPowersOfA) {
  EXPECT_EQ(w("b1"), w("a^-1 b a"));
  EXPECT_EQ(w("b2"), w("a^-2 b a^2"));
  EXPECT_EQ(w("b0"), w("b"));
  EXPECT_EQ(w("b4"), w("b1"));
}

TEST(Word, CommutatorsAndConjugation) {
  EXPECT_EQ(w("[a,b]"), w("a^-1 b^-1 a b"));
  EXPECT_EQ(w("b^(a)"), w("a^-1 b a"));
  EXPECT_EQ(w("[a,b]^(a^-1)"), w("a a^-1 b^-1 a b a^-1"));
  EXPECT_EQ(w("(a b)^-2"), w("b^-1 a^-1 b^-1 a^-1"));
}

TEST(Word, ParseErrorsCarryPositions) {
  try {
    w("a b $");
    FAIL();
  } catch (const ParseError &e) {
    EXPECT_EQ(e.position(), 4u);
  }
  EXPECT_THROW(w("(a b"), ParseError);
  EXPECT_THROW(w("[a b]"), ParseError);
  EXPECT_THROW(w("c"), ParseError);
  EXPECT_THROW(w("a^"), ParseError);
}

TEST(Word, FormatRoundTrips) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 500; ++t) {
    Word x = w(oracle::random_gs_text(rng, static_cast<int>(rng() % 6)));
    EXPECT_EQ(w(f(x)), x);
  }
}

TEST(Word, ReducedWordsHaveNoAdjacentRepeats) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 500; ++t) {
    Word x = w(oracle::random_gs_text(rng, 4) + " " + oracle::random_gs_text(rng, 3));
    for (std::size_t i = 0; i < x.size(); ++i) {
      EXPECT_GE(x[i].exponent, 1);
      EXPECT_LE(x[i].exponent, 2);
      if (i)
        EXPECT_NE(x[i].symbol, x[i - 1].symbol);
    }
  }
}

TEST(Vertex, ParseAndPrint) {
  EXPECT_EQ(Vertex::parse("021", 3).to_string(), "021");
  EXPECT_EQ(Vertex::parse("e", 3).level(), 0u);
  EXPECT_EQ(Vertex{}.to_string(), "e");
  EXPECT_THROW(Vertex::parse("3", 3), Error);
  EXPECT_EQ(Vertex::parse("0", 3).child(2).concat(Vertex::parse("1", 3)).to_string(), "021");
}
