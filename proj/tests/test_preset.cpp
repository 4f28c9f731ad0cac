#include <random>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include <branchgroup/abelian.hpp>

#include "oracles.hpp"

using namespace branchgroup;

namespace {

oracle::Perm as_oracle(const Permutation &x) { return {x.images().begin(), x.images().end()}; }

/// Derived subgroup of a closed permutation group, by closing commutators.
std::set<oracle::Perm> derived(const std::set<oracle::Perm> &group) {
  std::vector<oracle::Perm> elements(group.begin(), group.end());
  auto inverse = [](const oracle::Perm &x) {
    oracle::Perm out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      out[static_cast<std::size_t>(x[i])] = static_cast<int>(i);
    return out;
  };
  std::set<oracle::Perm> commutators;
  for (const auto &x : elements)
    for (const auto &y : elements)
      commutators.insert(oracle::compose(oracle::compose(inverse(x), inverse(y)), oracle::compose(x, y)));
  return oracle::closure({commutators.begin(), commutators.end()}, elements.front().size());
}

std::string random_grigorchuk_text(std::mt19937_64 &rng, int letters) {
  static const char *names[] = {"a", "b", "c", "d"};
  std::string out;
  for (int i = 0; i < letters; ++i)
    out += std::string(names[rng() % 4]) + " ";
  return out.empty() ? "1" : out;
}

} // namespace

TEST(Preset, GuptaSidkiFiveRecursion) {
  Group g(gupta_sidki(5));
  WreathDecomposition d = g.decompose(g.parse("b"));
  EXPECT_TRUE(d.root.is_identity());
  std::vector<std::string> sections;
  for (const Word &s : d.sections)
    sections.push_back(g.format(s));
  EXPECT_EQ(sections, (std::vector<std::string>{"a", "a^-1", "1", "1", "b"}));
  EXPECT_EQ(g.decompose(g.parse("a")).root.to_cycle_string(), "(0 1 2 3 4)");
  EXPECT_EQ(g.order(g.parse("b"), 100).value, 5u);
  EXPECT_EQ(g.order(g.parse("a b"), 1000).value, 25u);
}

TEST(Preset, RejectsNonOddPrimes) {
  EXPECT_THROW(gupta_sidki(4), NotOddPrime);
  EXPECT_THROW(gupta_sidki(2), NotOddPrime);
  EXPECT_THROW(builtin_preset("gs9"), NotOddPrime);
  EXPECT_THROW(builtin_preset("gsx"), PresetError);
  EXPECT_THROW(builtin_preset("free"), PresetError);
}

TEST(Preset, GrigorchukRelations) {
  Group g(grigorchuk());
  for (const char *x : {"a", "b", "c", "d"}) {
    EXPECT_FALSE(g.is_trivial(g.parse(x))) << x;
    EXPECT_EQ(g.order(g.parse(x), 100).value, 2u) << x;
  }
  EXPECT_TRUE(g.is_trivial(g.parse("b c d")));
  EXPECT_TRUE(g.is_trivial(g.parse("(a d)^4")));
  EXPECT_FALSE(g.is_trivial(g.parse("(a d)^2")));
  EXPECT_EQ(g.order(g.parse("a b"), 100).value, 16u);
  EXPECT_EQ(g.order(g.parse("a c"), 100).value, 8u);
}

TEST(Preset, GrigorchukLevelActionMatchesPathOracle) {
  Group g(grigorchuk());
  std::mt19937_64 rng(17);
  for (int t = 0; t < 200; ++t) {
    Word x = g.parse(random_grigorchuk_text(rng, 1 + t % 8));
    const int n = 1 + t % 6;
    EXPECT_EQ(as_oracle(g.level_action(x, n)), oracle::level_perm(g.preset(), x, n));
  }
}

TEST(Preset, JsonRoundTrip) {
  for (const GroupPreset &p : {gupta_sidki(3), gupta_sidki(7), grigorchuk()}) {
    GroupPreset q = preset_from_json(preset_to_json(p));
    EXPECT_EQ(q.name, p.name);
    EXPECT_EQ(q.degree, p.degree);
    EXPECT_EQ(q.family, p.family);
    EXPECT_EQ(q.alphabet.names, p.alphabet.names);
    EXPECT_EQ(q.alphabet.orders, p.alphabet.orders);
    EXPECT_EQ(q.alphabet.rooted, p.alphabet.rooted);
    ASSERT_EQ(q.recursion.size(), p.recursion.size());
    for (std::size_t i = 0; i < p.recursion.size(); ++i) {
      EXPECT_EQ(q.recursion[i].root, p.recursion[i].root);
      EXPECT_EQ(q.recursion[i].sections, p.recursion[i].sections);
    }
  }
}

TEST(Preset, MalformedFilesAreRejected) {
  auto j = preset_to_json(gupta_sidki(3));
  j["recursion"]["b"]["sections"] = {"a", "a^-1"};
  EXPECT_THROW(preset_from_json(j), PresetError);
  j = preset_to_json(gupta_sidki(3));
  j["recursion"]["b"]["sections"][0] = "a $";
  EXPECT_THROW(preset_from_json(j), PresetError);
  j = preset_to_json(gupta_sidki(3));
  j.erase("p");
  EXPECT_THROW(preset_from_json(j), PresetError);
  EXPECT_THROW(load_preset_file("/nonexistent/preset.json"), PresetError);
}

TEST(Abelianization, GuptaSidkiMatchesDerivedSubgroupOfQuotient) {
  Group g(gupta_sidki(3));
  std::vector<oracle::Perm> gens{oracle::level_perm(g.preset(), g.parse("a"), 2),
                                 oracle::level_perm(g.preset(), g.parse("b"), 2)};
  const auto whole = oracle::closure(gens, 9);
  const auto commutator = derived(whole);
  ASSERT_EQ(whole.size() / commutator.size(), 9u);
  std::mt19937_64 rng(23);
  for (int t = 0; t < 300; ++t) {
    Word x = g.parse(oracle::random_gs_text(rng, 1 + t % 5));
    EXPECT_EQ(in_derived_subgroup_image(g, x), commutator.count(oracle::level_perm(g.preset(), x, 2)) == 1)
        << g.format(x);
  }
}

TEST(Abelianization, GrigorchukMatchesDerivedSubgroupOfQuotient) {
  Group g(grigorchuk());
  std::vector<oracle::Perm> gens;
  for (const char *x : {"a", "b", "c", "d"})
    gens.push_back(oracle::level_perm(g.preset(), g.parse(x), 3));
  const auto whole = oracle::closure(gens, 8);
  const auto commutator = derived(whole);
  ASSERT_EQ(whole.size(), 128u);
  ASSERT_EQ(whole.size() / commutator.size(), 8u);
  std::mt19937_64 rng(29);
  for (int t = 0; t < 300; ++t) {
    Word x = g.parse(random_grigorchuk_text(rng, 1 + t % 9));
    EXPECT_EQ(in_derived_subgroup_image(g, x), commutator.count(oracle::level_perm(g.preset(), x, 3)) == 1)
        << g.format(x);
  }
}

TEST(Abelianization, IsAHomomorphism) {
  Group g(gupta_sidki(3));
  std::mt19937_64 rng(31);
  for (int t = 0; t < 200; ++t) {
    Word x = g.parse(oracle::random_gs_text(rng, 3));
    Word y = g.parse(oracle::random_gs_text(rng, 3));
    EXPECT_EQ(abelianization_image(g, g.mul(x, y)), abelianization_image(g, x) + abelianization_image(g, y));
    EXPECT_TRUE(abelianization_image(g, g.comm(x, y)).is_zero());
  }
}
