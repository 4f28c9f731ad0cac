#include <random>
#include <string>

#include <gtest/gtest.h>

#include <branchgroup/group.hpp>

#include "oracles.hpp"

using namespace branchgroup;

namespace {

class Gs3 : public ::testing::Test {
protected:
  Group g{gupta_sidki(3)};
  std::mt19937_64 rng{20240531};

  Word w(std::string_view text) const { return g.parse(text); }
  Word random_word(int syllables) { return w(oracle::random_gs_text(rng, syllables)); }

  bool decomposes_to(const Word &x, std::vector<std::string> sections) const {
    WreathDecomposition d;
    d.root = Permutation::identity(3);
    for (const auto &s : sections)
      d.sections.push_back(w(s));
    return g.matches(x, d);
  }
};

oracle::Perm as_oracle(const Permutation &x) { return {x.images().begin(), x.images().end()}; }

} // namespace

TEST_F(Gs3, GeneratorRecursion) {
  WreathDecomposition d = g.decompose(w("b"));
  EXPECT_TRUE(d.root.is_identity());
  EXPECT_EQ(g.format(d.sections[0]), "a");
  EXPECT_EQ(g.format(d.sections[1]), "a^-1");
  EXPECT_EQ(g.format(d.sections[2]), "b");
  EXPECT_EQ(g.decompose(w("a")).root.to_cycle_string(), "(0 1 2)");
  EXPECT_TRUE(decomposes_to(w("b1"), {"b", "a", "a^-1"}));
  EXPECT_TRUE(decomposes_to(w("b2"), {"a^-1", "b", "a"}));
}

TEST_F(Gs3, TabulatedDecompositions) {
  EXPECT_TRUE(decomposes_to(w("b b1 b2"), {"a b a^-1", "b", "b"}));
  EXPECT_TRUE(decomposes_to(w("[a,b]^(a^-1)"), {"a", "a b", "b^-1 a"}));
  EXPECT_TRUE(decomposes_to(w("[[b^-1,a], b1 b2]"), {"1", "[a,b]", "1"}));
}

TEST_F(Gs3, CommutatorIntoCoordinateAtPrimeThree) {
  const Word c = w("[b0 b1, b1^-1 b2]");
  EXPECT_TRUE(decomposes_to(c, {"1", "1", "[a,b]^(a)"}));
  EXPECT_TRUE(g.equal(g.section(c, Vertex::parse("2", 3)), w("a b^-1 a b a")));
  // The form with [b,a] in the last coordinate holds only for p > 3.
  EXPECT_FALSE(g.equal(g.section(c, Vertex::parse("2", 3)), w("[b,a]")));
}

TEST_F(Gs3, LevelActionMatchesPathOracle) {
  EXPECT_EQ(g.level_action(w("b"), 2).to_cycle_string(), "(0 1 2)(3 5 4)");
  for (int t = 0; t < 200; ++t) {
    Word x = random_word(1 + t % 5);
    const int n = 1 + t % 4;
    EXPECT_EQ(as_oracle(g.level_action(x, n)), oracle::level_perm(g.preset(), x, n)) << g.format(x);
  }
}

TEST_F(Gs3, LevelActionIsAHomomorphism) {
  for (int t = 0; t < 100; ++t) {
    Word x = random_word(3), y = random_word(3);
    EXPECT_EQ(g.level_action(g.mul(x, y), 3), g.level_action(x, 3) * g.level_action(y, 3));
  }
}

TEST_F(Gs3, TrivialityAgreesWithOracle) {
  EXPECT_TRUE(g.is_trivial(w("1")));
  EXPECT_TRUE(g.is_trivial(w("b^3")));
  EXPECT_FALSE(g.is_trivial(w("b")));
  EXPECT_FALSE(g.is_trivial(w("[b, b1]")));
  EXPECT_TRUE(g.is_trivial(w("(a b)^9")));
  for (int t = 0; t < 300; ++t) {
    Word x = random_word(1 + t % 4);
    Word y = random_word(1 + t % 3);
    EXPECT_TRUE(g.is_trivial(g.mul(g.mul(x, y), g.inv(g.mul(x, y)))));
    const bool trivial = g.is_trivial(x);
    if (trivial)
      EXPECT_TRUE(oracle::acts_trivially(g.preset(), x, 5)) << g.format(x);
    if (!oracle::acts_trivially(g.preset(), x, 4))
      EXPECT_FALSE(trivial) << g.format(x);
  }
}

TEST_F(Gs3, StatesOfProducts) {
  // (xy)|v = x|v * y|(v^x) for every vertex.
  for (int t = 0; t < 100; ++t) {
    Word x = random_word(3), y = random_word(3);
    Vertex v({static_cast<int>(rng() % 3), static_cast<int>(rng() % 3)});
    std::vector<int> moved(v.digits().begin(), v.digits().end());
    moved = oracle::apply_word(g.preset(), x, moved);
    Word lhs = g.state(g.mul(x, y), v);
    Word rhs = g.mul(g.state(x, v), g.state(y, Vertex(moved)));
    EXPECT_TRUE(g.equal(lhs, rhs));
  }
}

TEST_F(Gs3, SectionsRequireAFixedVertex) {
  EXPECT_THROW(g.section(w("a"), Vertex::parse("0", 3)), VertexNotStabilized);
  EXPECT_TRUE(g.fixes(w("b"), Vertex::parse("22", 3)));
  EXPECT_FALSE(g.fixes(w("b"), Vertex::parse("01", 3)));
  EXPECT_EQ(g.format(g.section(w("b"), Vertex::parse("222", 3))), "b");
}

TEST_F(Gs3, Orders) {
  EXPECT_EQ(g.order(w("a"), 1000).value, 3u);
  EXPECT_EQ(g.order(w("b"), 1000).value, 3u);
  EXPECT_EQ(g.order(w("1"), 1000).value, 1u);
  EXPECT_EQ(g.order(w("a b"), 1000).value, 9u);
  EXPECT_FALSE(oracle::acts_trivially(g.preset(), w("(a b)^3"), 3));
  EXPECT_EQ(g.order(w("a b"), 3).kind, OrderResult::Kind::ExceedsCap);
}

TEST_F(Gs3, RandomOrdersArePowersOfThree) {
  for (int t = 0; t < 200; ++t) {
    Word x = random_word(1 + t % 4);
    OrderResult o = g.order(x, 2187);
    ASSERT_TRUE(o.finite()) << g.format(x);
    std::uint64_t v = o.value;
    while (v % 3 == 0)
      v /= 3;
    EXPECT_EQ(v, 1u) << g.format(x);
    EXPECT_TRUE(g.is_trivial(g.pow(x, static_cast<long long>(o.value))));
    if (o.value > 1)
      EXPECT_FALSE(g.is_trivial(g.pow(x, static_cast<long long>(o.value / 3))));
  }
}

TEST_F(Gs3, SyllableLength) {
  EXPECT_EQ(g.syllable_length(w("a")), 0);
  EXPECT_EQ(g.syllable_length(w("b1 b2")), 2);
  EXPECT_EQ(g.syllable_length(w("b b")), 1);
}

TEST_F(Gs3, Portrait) {
  EXPECT_EQ(g.render(g.portrait(w("b"), 1)), "e: id\n  0: a\n  1: a^-1\n  2: b\n");
  EXPECT_EQ(g.render(g.portrait(w("a"), 0)), "e: a\n");
  const std::string two = g.render(g.portrait(w("b"), 2));
  EXPECT_EQ(two.substr(0, two.find("  1:")), "e: id\n  0: (0 1 2)\n    00: 1\n    01: 1\n    02: 1\n");
}

TEST_F(Gs3, LevelCapIsEnforced) {
  Limits limits;
  limits.max_points = 27;
  Group small(gupta_sidki(3), limits);
  EXPECT_NO_THROW(small.level_action(w("b"), 3));
  EXPECT_THROW(small.level_action(w("b"), 4), DepthLimit);
  EXPECT_FALSE(small.level_fits(4));
}
