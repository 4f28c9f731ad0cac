// Acceptance run: one PASS/FAIL line per criterion, each with its wall time
// against the time limit. Exit status 1 if any line fails.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include <branchgroup/finiteness.hpp>
#include <branchgroup/harness.hpp>
#include <branchgroup/membership.hpp>

#include "corpus.hpp"
#include "oracles.hpp"

using namespace branchgroup;

namespace {

struct Outcome {
  bool pass = true;
  std::string note;

  void require(bool ok, const std::string &what) {
    if (!ok) {
      pass = false;
      note += (note.empty() ? "" : "; ") + what;
    }
  }
};

bool run(int number, const char *title, double limit_s, const std::function<Outcome()> &body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception &e) {
    o.pass = false;
    o.note = std::string("exception: ") + e.what();
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (s > limit_s)
    o.require(false, "over time limit");
  std::printf("[%2d] %-44s %s  %.3fs (limit %.0fs)%s%s\n", number, title, o.pass ? "PASS" : "FAIL", s, limit_s,
              o.note.empty() ? "" : "  ", o.note.c_str());
  std::fflush(stdout);
  return o.pass;
}

void require_check(Outcome &o, const CheckReport &r) { o.require(r.pass, r.name + ": " + r.counterexample); }

std::string golden_order(const std::string &id, int level) {
  std::ifstream in(std::string(BRANCHGROUP_SOURCE_DIR) + "/tests/golden/quotient_orders.txt");
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#')
      continue;
    std::istringstream fields(line);
    std::string name, hash, order;
    int n = 0;
    fields >> name >> n >> hash >> order;
    if (name == id && n == level)
      return order;
  }
  return "missing";
}

} // namespace

int main() {
  const Group g(gupta_sidki(3));
  const HarnessOptions options;
  bool all = true;

  all &= run(1, "identity suite", 1, [&] {
    Outcome o;
    require_check(o, run_identity_suite(g, options));
    require_check(o, run_cube_identity(g, options));
    o.note += std::string(o.note.empty() ? "" : "; ") + "p=3 commutator-into-coordinate value is [a,b]^(a); literal [b,a] form checked at p=5,7";
    return o;
  });

  all &= run(2, "element orders", 30, [&] {
    Outcome o;
    o.require(g.order(g.parse("a"), 2187).value == 3, "order(a)");
    o.require(g.order(g.parse("b"), 2187).value == 3, "order(b)");
    require_check(o, run_order_check(g, options));
    return o;
  });

  all &= run(3, "congruence quotient orders", 10, [&] {
    Outcome o;
    const auto gens = preset_generators(g);
    o.require(quotient(g, gens, 1).order() == 3, "|G/St(1)|");
    o.require(quotient(g, gens, 2).order() == 27, "|G/St(2)|");
    const auto naive = oracle::closure({oracle::level_perm(g.preset(), g.parse("a"), 2),
                                        oracle::level_perm(g.preset(), g.parse("b"), 2)},
                                       9);
    o.require(naive.size() == 27, "naive closure on 9 points");
    o.require(quotient(g, gens, 3).order().str() == golden_order("gs3", 3), "|G/St(3)| vs golden");
    return o;
  });

  all &= run(4, "containments (budget 5)", 600, [&] {
    Outcome o;
    const auto reports = run_containment_checks(g, 5, options);
    o.require(reports.size() == 3, "expected three containment checks");
    for (const CheckReport &r : reports)
      require_check(o, r);
    return o;
  });

  all &= run(5, "length bounds, 1000 samples per level", 10, [&] {
    Outcome o;
    require_check(o, run_length_bound_check(g, 1, options));
    require_check(o, run_length_bound_check(g, 2, options));
    return o;
  });

  all &= run(6, "circulant system over F_3 and F_5", 1, [&] {
    Outcome o;
    require_check(o, run_circulant_check(options));
    for (int k = 0; k < 3; ++k) {
      int solutions = 0;
      for (int code = 0; code < 27; ++code) {
        const int r[3] = {code % 3, code / 3 % 3, code / 9};
        bool ok = true;
        for (int i = 0; i < 3; ++i)
          ok = ok && r[i] == mod_floor(k * r[(i + 2) % 3] - k * r[(i + 1) % 3], 3);
        solutions += ok;
      }
      o.require(solutions == 1, "brute force k=" + std::to_string(k));
    }
    return o;
  });

  all &= run(7, "finiteness on the subgroup corpus", 120, [&] {
    Outcome o;
    o.require(corpus::gs3().size() >= 20, "corpus size");
    int infinite = 0;
    for (const corpus::Entry &e : corpus::gs3()) {
      SubgroupSpec h(g, corpus::parse(g, e.generators));
      const EnumerationResult closure = enumerate_elements(g, h, 2000);
      const FinitenessVerdict v = is_finite_gs3(g, h);
      const std::size_t enumerated = closure.exceeds_cap ? 0 : closure.count;
      o.require(enumerated == e.order, std::string("enumeration drifted: ") + e.generators);
      if (closure.exceeds_cap) {
        o.require(v.kind == FinitenessVerdict::Kind::Infinite, e.generators);
        o.require(replay_witness(g, h, v), std::string("replay ") + e.generators);
        ++infinite;
      } else {
        o.require(v.kind == FinitenessVerdict::Kind::Finite && v.order == closure.count, e.generators);
      }
    }
    o.note += std::string(o.note.empty() ? "" : "; ") + std::to_string(corpus::gs3().size()) + " specs, " + std::to_string(infinite) + " infinite";
    return o;
  });

  all &= run(8, "membership", 120, [&] {
    Outcome o;
    const MembershipVerdict in = membership(g, g.parse("a^2"), SubgroupSpec(g, {g.parse("a")}));
    o.require(in.kind == MembershipVerdict::Kind::In, "a^2 in <a>");
    const auto st1 = stabilizer1_generators(g, SubgroupSpec(g, preset_generators(g)));
    const MembershipVerdict out = membership(g, g.parse("a"), SubgroupSpec(g, st1));
    o.require(out.kind == MembershipVerdict::Kind::NotIn && out.level == 1, "a not in St(1) at level 1");
    const MembershipVerdict b = membership(g, g.parse("b"), SubgroupSpec(g, {g.parse("a")}));
    o.require(b.kind == MembershipVerdict::Kind::NotIn && b.level == 2, "b not in <a> at level 2");

    RandomWords random(g, options.seed);
    for (int t = 0; t < 500; ++t) {
      std::vector<Word> k;
      for (int i = 0, n = random.uniform(1, 2); i < n; ++i)
        k.push_back(random.with_syllables(random.uniform(0, 2)));
      const SubgroupSpec spec(g, k);
      const Word h = random.with_syllables(random.uniform(0, 3));
      const MembershipVerdict v = membership(g, h, spec, {300, 4});
      const bool witnessed = product_witness(g, h, spec, 300).has_value();
      const bool separated = separating_level(g, h, spec, 4).has_value();
      if (witnessed && separated)
        o.require(false, "contradiction for " + g.format(h));
      if (v.kind == MembershipVerdict::Kind::In)
        o.require(!separated && g.equal(v.witness->evaluate(g, spec.generators()), h), "bad In " + g.format(h));
      if (v.kind == MembershipVerdict::Kind::NotIn)
        o.require(!witnessed, "bad NotIn " + g.format(h));
    }
    return o;
  });

  all &= run(9, "b-decomposition uniqueness", 60, [&] {
    Outcome o;
    o.require(b_decompose(g, g.parse("b")).n == std::vector<int>{1, 0, 0}, "b");
    o.require(b_decompose(g, g.parse("1")).n == std::vector<int>{0, 0, 0}, "identity");
    o.require(b_decompose(g, g.parse("b0 b1 b2")).n == std::vector<int>{1, 1, 1}, "b0 b1 b2");
    require_check(o, run_b_decompose_uniqueness(g, options));
    return o;
  });

  all &= run(10, "Grigorchuk group", 30, [&] {
    Outcome o;
    const Group gr(grigorchuk());
    for (const char *x : {"a", "b", "c", "d"})
      o.require(gr.order(gr.parse(x), 16).value == 2, std::string("order ") + x);
    o.require(gr.is_trivial(gr.parse("b c d")), "bcd = 1");
    auto decide = [&](const char *text) { return is_finite_grigorchuk(gr, SubgroupSpec(gr, corpus::parse(gr, text))); };
    const FinitenessVerdict a = decide("a");
    o.require(a.kind == FinitenessVerdict::Kind::Finite && a.order == 2u, "<a>");
    const FinitenessVerdict bc = decide("b|c");
    o.require(bc.kind == FinitenessVerdict::Kind::Finite && bc.order == 4u, "<b,c>");
    o.require(decide("a|b|c|d").kind == FinitenessVerdict::Kind::Infinite, "<a,b,c,d>");
    return o;
  });

  std::printf("%s\n", all ? "acceptance: all criteria PASS" : "acceptance: FAILURES");
  return all ? 0 : 1;
}
