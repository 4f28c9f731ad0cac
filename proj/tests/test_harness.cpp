#include <random>
#include <string>

#include <gtest/gtest.h>

#include <branchgroup/harness.hpp>

using namespace branchgroup;

namespace {

class Harness : public ::testing::Test {
protected:
  Group g{gupta_sidki(3)};
};

/// Number of solutions of r_i = k r_{i-1} - k r_{i-2} over F_p, by brute force.
int count_solutions(int k, int p) {
  int total = 1;
  for (int i = 0; i < p; ++i)
    total *= p;
  int count = 0;
  for (int code = 0; code < total; ++code) {
    std::vector<int> r(static_cast<std::size_t>(p));
    for (int i = 0, c = code; i < p; ++i, c /= p)
      r[static_cast<std::size_t>(i)] = c % p;
    bool ok = true;
    for (int i = 0; i < p; ++i) {
      const int lhs = r[static_cast<std::size_t>(i)];
      const int rhs = mod_floor(k * r[static_cast<std::size_t>(mod_floor(i - 1, p))] -
                                    k * r[static_cast<std::size_t>(mod_floor(i - 2, p))],
                                p);
      ok = ok && lhs == rhs;
    }
    count += ok;
  }
  return count;
}

} // namespace

TEST_F(Harness, BDecomposeExamples) {
  EXPECT_EQ(b_decompose(g, g.parse("b")).n, (std::vector<int>{1, 0, 0}));
  EXPECT_EQ(b_decompose(g, g.parse("1")).n, (std::vector<int>{0, 0, 0}));
  EXPECT_EQ(b_decompose(g, g.parse("b0 b1 b2")).n, (std::vector<int>{1, 1, 1}));
  EXPECT_EQ(b_decompose(g, g.parse("b2^-1 b1")).n, (std::vector<int>{0, 1, 2}));
  EXPECT_THROW(b_decompose(g, g.parse("a")), NotInStab1);
}

TEST_F(Harness, BDecomposeIsConsistentOnRandomElements) {
  RandomWords random(g, 99);
  for (int t = 0; t < 200; ++t) {
    Word x = random.in_level_stabilizer(1, 1 + t % 8);
    EXPECT_TRUE(b_decompose(g, x).consistent()) << g.format(x);
  }
}

TEST_F(Harness, CirculantNullityMatchesBruteForce) {
  for (int k = 0; k < 3; ++k) {
    EXPECT_EQ(solve_circulant_system(k, 3), 0);
    EXPECT_EQ(count_solutions(k, 3), 1) << "k = " << k;
  }
  for (int k = 0; k < 5; ++k) {
    EXPECT_EQ(solve_circulant_system(k, 5), 0);
    EXPECT_EQ(count_solutions(k, 5), 1) << "k = " << k;
  }
  EXPECT_THROW(solve_circulant_system(1, 4), NotOddPrime);
}

TEST_F(Harness, IdentityTable) {
  EXPECT_EQ(gs3_identities().size(), 6u);
  EXPECT_FALSE(commutator_into_coordinate(3));
  EXPECT_TRUE(commutator_into_coordinate(5));
  EXPECT_TRUE(commutator_into_coordinate(7));
}

TEST_F(Harness, RandomWordsAreDeterministic) {
  RandomWords x(g, 5), y(g, 5);
  for (int t = 0; t < 20; ++t)
    EXPECT_EQ(x.with_syllables(4), y.with_syllables(4));
  RandomWords z(g, 6);
  EXPECT_EQ(z.with_syllables(3).size() > 0, true);
  for (int t = 0; t < 20; ++t)
    EXPECT_TRUE(g.in_level_stabilizer(z.in_level_stabilizer(2, 5), 2));
}

TEST_F(Harness, EveryCheckPasses) {
  HarnessOptions options;
  const auto reports = run_checks(g, "", options);
  EXPECT_EQ(reports.size(), 9u);
  for (const CheckReport &r : reports)
    EXPECT_TRUE(r.pass) << r.name << ": " << r.counterexample;
}

TEST_F(Harness, EveryMutatedCheckFails) {
  HarnessOptions options;
  options.mutate = true;
  options.level_budget = 5;
  const auto reports = run_checks(g, "", options);
  EXPECT_EQ(reports.size(), 10u);
  for (const CheckReport &r : reports)
    EXPECT_FALSE(r.pass) << r.name;
}

TEST_F(Harness, SecondDerivedContainsFourthLevelStabilizer) {
  const auto reports = run_containment_checks(g, 5);
  ASSERT_EQ(reports.size(), 3u);
  for (const CheckReport &r : reports)
    EXPECT_TRUE(r.pass) << r.name << ": " << r.counterexample;
  EXPECT_THROW(run_containment_checks(g, 6), Error);
}

TEST_F(Harness, FilterSelectsByName) {
  const auto reports = run_checks(g, "length");
  ASSERT_EQ(reports.size(), 2u);
  EXPECT_EQ(reports[0].name, "length-first-level");
  EXPECT_EQ(reports[1].name, "length-second-level");
}
