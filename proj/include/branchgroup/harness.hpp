#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "abelian.hpp"
#include "quotient.hpp"

namespace branchgroup {

// ---------------------------------------------------------------------------
// Products of conjugates of b

/// g in St(1) written as a product of syllables b_i^r, with n_i the exponent
/// sum at index i. Each section at coordinate i then has abelianization
/// (n_i - n_{i-1}, n_{i+1}).
struct BDecomposition {
  std::vector<int> n;
  std::vector<AbelianImage> section_images;
  std::vector<bool> residual_ok;

  bool consistent() const {
    for (bool ok : residual_ok)
      if (!ok)
        return false;
    return true;
  }
};

inline BDecomposition b_decompose(const Group &group, const Word &g) {
  if (!group.preset().is_gupta_sidki())
    throw Error("b_decompose needs a Gupta-Sidki preset");
  if (!group.in_first_level_stabilizer(g))
    throw NotInStab1("element moves the first level");
  const int p = group.degree();
  BDecomposition out;
  out.n.assign(static_cast<std::size_t>(p), 0);
  // a^s b^r a^-s = b_{-s}^r: a b-letter after a-exponent prefix s is b_{-s}.
  int prefix = 0;
  for (const Letter &l : g.letters()) {
    if (l.symbol == 0)
      prefix = mod_floor(prefix + l.exponent, p);
    else {
      auto &slot = out.n[static_cast<std::size_t>(mod_floor(-prefix, p))];
      slot = mod_floor(slot + l.exponent, p);
    }
  }
  const WreathDecomposition d = group.decompose(g);
  for (int i = 0; i < p; ++i) {
    AbelianImage image = abelianization_image(group, d.sections[static_cast<std::size_t>(i)]);
    const int expect_a = mod_floor(out.n[static_cast<std::size_t>(i)] - out.n[static_cast<std::size_t>(mod_floor(i - 1, p))], p);
    const int expect_b = out.n[static_cast<std::size_t>(mod_floor(i + 1, p))];
    out.residual_ok.push_back(image.coords[0] == expect_a && image.coords[1] == expect_b);
    out.section_images.push_back(std::move(image));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Circulant linear system over F_p

/// Nullity of r_i = k r_{i-1} - k r_{i-2} (indices mod p) over F_p.
inline int solve_circulant_system(int k, int p) {
  if (p <= 2 || !is_prime(p))
    throw NotOddPrime("modulus must be an odd prime, got " + std::to_string(p));
  k = mod_floor(k, p);
  std::vector<std::vector<int>> m(static_cast<std::size_t>(p), std::vector<int>(static_cast<std::size_t>(p), 0));
  for (int i = 0; i < p; ++i) {
    auto &row = m[static_cast<std::size_t>(i)];
    row[static_cast<std::size_t>(i)] = mod_floor(row[static_cast<std::size_t>(i)] + 1, p);
    auto &c1 = row[static_cast<std::size_t>(mod_floor(i - 1, p))];
    c1 = mod_floor(c1 - k, p);
    auto &c2 = row[static_cast<std::size_t>(mod_floor(i - 2, p))];
    c2 = mod_floor(c2 + k, p);
  }
  auto inverse = [p](int x) {
    for (int y = 1; y < p; ++y)
      if (x * y % p == 1)
        return y;
    return 0;
  };
  int rank = 0;
  for (int col = 0; col < p && rank < p; ++col) {
    int pivot = -1;
    for (int r = rank; r < p; ++r)
      if (m[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0)
      continue;
    std::swap(m[static_cast<std::size_t>(pivot)], m[static_cast<std::size_t>(rank)]);
    auto &prow = m[static_cast<std::size_t>(rank)];
    const int scale = inverse(prow[static_cast<std::size_t>(col)]);
    for (int &x : prow)
      x = x * scale % p;
    for (int r = 0; r < p; ++r) {
      if (r == rank)
        continue;
      auto &row = m[static_cast<std::size_t>(r)];
      const int f = row[static_cast<std::size_t>(col)];
      if (f == 0)
        continue;
      for (int c = 0; c < p; ++c)
        row[static_cast<std::size_t>(c)] = mod_floor(row[static_cast<std::size_t>(c)] - f * prow[static_cast<std::size_t>(c)], p);
    }
    ++rank;
  }
  return p - rank;
}

// ---------------------------------------------------------------------------
// Random words

/// Seeded random words a^e0 b^r1 a^e1 ... b^rm a^em with m b-syllables.
/// Inner a-exponents are nonzero so the word is reduced with exactly m
/// syllables.
class RandomWords {
public:
  RandomWords(const Group &group, std::uint64_t seed) : group_(group), rng_(seed) {}

  Word with_syllables(int m) {
    const int p = group_.degree();
    std::vector<Letter> raw;
    auto exponent = [&](int lo) { return std::uniform_int_distribution<int>(lo, p - 1)(rng_); };
    if (int e = exponent(0))
      raw.push_back({0, e});
    for (int i = 0; i < m; ++i) {
      raw.push_back({1, exponent(1)});
      int e = i + 1 < m ? exponent(1) : exponent(0);
      if (e)
        raw.push_back({0, e});
    }
    return group_.reduce(raw);
  }

  /// Rejection-samples a word with m syllables fixing level `level`. Some
  /// (level, m) pairs have no solutions (nothing in St(2) has fewer than 3
  /// syllables), so sampling gives up after a bounded number of tries.
  Word in_level_stabilizer(int level, int m) {
    for (int attempt = 0; attempt < 100000; ++attempt) {
      Word w = with_syllables(m);
      if (group_.in_level_stabilizer(w, level))
        return w;
    }
    throw Error("no word with " + std::to_string(m) + " syllables found in St(" + std::to_string(level) + ")");
  }

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  std::mt19937_64 &engine() { return rng_; }

private:
  const Group &group_;
  std::mt19937_64 rng_;
};

// ---------------------------------------------------------------------------
// Checks

struct CheckReport {
  std::string name;
  bool pass = false;
  std::string counterexample;
  double ms = 0;
  std::uint64_t seed = 0;
};

struct HarnessOptions {
  std::uint64_t seed = 20240531;
  /// 3 or 4: cheap containments only; 5 adds the second derived subgroup.
  int level_budget = 3;
  /// Deliberately break each check; every report must then fail.
  bool mutate = false;
  int samples = 1000;
};

namespace detail {

template <class F> CheckReport timed(std::string name, std::uint64_t seed, F &&body) {
  CheckReport r;
  r.name = std::move(name);
  r.seed = seed;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception &e) {
    r.pass = false;
    r.counterexample = std::string("exception: ") + e.what();
  }
  r.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline WreathDecomposition decomposition(const Group &group, std::vector<std::string> sections) {
  WreathDecomposition d;
  d.root = Permutation::identity(static_cast<std::size_t>(group.degree()));
  for (const std::string &s : sections)
    d.sections.push_back(group.parse(s));
  return d;
}

} // namespace detail

struct NamedIdentity {
  std::string name;
  std::string word;
  std::vector<std::string> sections;
};

/// The tabulated decompositions of the Gupta-Sidki 3-group, each checked by
/// the word problem on every coordinate.
inline std::vector<NamedIdentity> gs3_identities() {
  return {
      {"psi(b)", "b", {"a", "a^-1", "b"}},
      {"psi(b1)", "b1", {"b", "a", "a^-1"}},
      {"b-b1-b2", "b b1 b2", {"a b a^-1", "b", "b"}},
      // For p = 3 the supports of b0 b1 and b1^-1 b2 overlap in coordinate 2,
      // which conjugates the commutator there; see commutator_into_coordinate.
      {"commutator-into-coordinate", "[b0 b1, b1^-1 b2]", {"1", "1", "[a,b]^(a)"}},
      {"conjugated-commutator", "[a,b]^(a^-1)", {"a", "a b", "b^-1 a"}},
      {"commutator-in-middle", "[[b^-1,a], b1 b2]", {"1", "[a,b]", "1"}},
  };
}

/// [b0 b1, b1^-1 b_{p-1}] = (1, ..., 1, [b,a]) in the Gupta-Sidki p-group.
inline bool commutator_into_coordinate(int p) {
  Group g(gupta_sidki(p));
  WreathDecomposition d;
  d.root = Permutation::identity(static_cast<std::size_t>(p));
  d.sections.assign(static_cast<std::size_t>(p), Word{});
  d.sections.back() = g.parse("[b,a]");
  return g.matches(g.parse("[b0 b1, b1^-1 b" + std::to_string(p - 1) + "]"), d);
}

inline CheckReport run_identity_suite(const Group &group, const HarnessOptions &options = {}) {
  return detail::timed("identities", options.seed, [&](CheckReport &r) {
    r.pass = true;
    for (const NamedIdentity &id : gs3_identities()) {
      Word w = group.parse(id.word);
      WreathDecomposition d = detail::decomposition(group, id.sections);
      // Negative control: invert the last section.
      if (options.mutate)
        d.sections.back() = group.inv(d.sections.back());
      if (!group.matches(w, d)) {
        r.pass = false;
        r.counterexample += id.name + " ";
      }
    }
    for (int p : {5, 7})
      if (!commutator_into_coordinate(p)) {
        r.pass = false;
        r.counterexample += "commutator-into-coordinate(p=" + std::to_string(p) + ") ";
      }
  });
}

/// (b_i^r a)^3 conjugated back by a^-i decomposes as (b^r, b_r^r, b^r); for
/// r = 1 the middle entry is b_1.
inline CheckReport run_cube_identity(const Group &group, const HarnessOptions &options = {}) {
  return detail::timed("cube-identity", options.seed, [&](CheckReport &r) {
    r.pass = true;
    for (int i = 0; i < 3; ++i)
      for (int e = 1; e <= 2; ++e) {
        const std::string rs = std::to_string(options.mutate ? 3 - e : e);
        Word cube = group.pow(group.parse("b" + std::to_string(i) + "^" + std::to_string(e) + " a"), 3);
        Word back = group.conj(cube, group.letter(0, -i));
        const std::string middle = "b" + std::to_string(e) + "^" + rs;
        if (!group.matches(back, detail::decomposition(group, {"b^" + rs, middle, "b^" + rs}))) {
          r.pass = false;
          r.counterexample += "i=" + std::to_string(i) + ",r=" + std::to_string(e) + " ";
        }
      }
  });
}

inline CheckReport run_order_check(const Group &group, const HarnessOptions &options = {}) {
  return detail::timed("orders", options.seed, [&](CheckReport &r) {
    const std::uint64_t cap = 2187;
    r.pass = group.order(group.parse("a"), cap).value == 3 && group.order(group.parse("b"), cap).value == 3;
    if (!r.pass)
      r.counterexample = "generator orders";
    // The negative control asks for powers of 2 instead.
    const std::uint64_t base = options.mutate ? 2 : 3;
    RandomWords random(group, options.seed);
    for (int t = 0; t < 200 && r.pass; ++t) {
      Word w = random.with_syllables(random.uniform(0, 4));
      OrderResult o = group.order(w, cap);
      std::uint64_t v = o.value;
      while (v % base == 0 && v > 1)
        v /= base;
      if (!o.finite() || v != 1) {
        r.pass = false;
        r.counterexample = group.format(w);
      }
    }
  });
}

/// Sections of g in St(1) with m syllables have at most (m+1)/2 syllables;
/// second-level sections of g in St(2) at most (m+3)/4.
inline CheckReport run_length_bound_check(const Group &group, int level, const HarnessOptions &options = {}) {
  const std::string name = level == 1 ? "length-first-level" : "length-second-level";
  return detail::timed(name, options.seed, [&](CheckReport &r) {
    r.pass = true;
    RandomWords random(group, options.seed + static_cast<std::uint64_t>(level));
    const int slack = options.mutate ? -2 : 0;
    for (int t = 0; t < options.samples && r.pass; ++t) {
      const int m = level == 1 ? random.uniform(1, 12) : random.uniform(3, 16);
      Word g = random.in_level_stabilizer(level, m);
      const int len = group.syllable_length(g);
      for (int v = 0; v < static_cast<int>(group.leaves_at(level)); ++v) {
        std::vector<int> path;
        for (int i = 0, x = v; i < level; ++i, x /= group.degree())
          path.insert(path.begin(), x % group.degree());
        const int s = group.syllable_length(group.section(g, Vertex(path)));
        const bool ok = level == 1 ? 2 * s <= len + 1 + slack : 4 * s <= len + 3 + slack;
        if (!ok) {
          r.pass = false;
          r.counterexample = group.format(g) + " at " + Vertex(path).to_string();
          break;
        }
      }
    }
  });
}

inline CheckReport run_circulant_check(const HarnessOptions &options = {}) {
  return detail::timed("circulant", options.seed, [&](CheckReport &r) {
    r.pass = true;
    for (int p : {3, 5})
      for (int k = 0; k < p; ++k) {
        const int expected = options.mutate ? 1 : 0;
        if (solve_circulant_system(k, p) != expected) {
          r.pass = false;
          r.counterexample += "p=" + std::to_string(p) + ",k=" + std::to_string(k) + " ";
        }
      }
  });
}

/// An element with sections (b, b, b): b b1 b2 = (a b a^-1, b, b) corrected in
/// the first coordinate by a conjugate of [[b^-1,a], b1 b2] = (1, [a,b], 1).
inline Word b_on_every_coordinate(const Group &group) {
  Word y = group.parse("[[b^-1,a], b1 b2]");
  Word shifted = group.conj(group.conj(y, group.parse("b1^-1")), group.parse("a^2"));
  return group.mul(group.parse("b b1 b2"), group.inv(shifted));
}

/// Words lying in St(2): the (b, b, b) element, its conjugates by a, and the
/// commutators [b_i, b_j].
inline std::vector<Word> second_level_family(const Group &group) {
  Word x = b_on_every_coordinate(group);
  std::vector<Word> out{x, group.conj(x, group.parse("a")), group.conj(x, group.parse("a^2"))};
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      out.push_back(group.parse("[b" + std::to_string(i) + ",b" + std::to_string(j) + "]"));
  return out;
}

inline CheckReport run_derived_contains_st2(const Group &group, const HarnessOptions &options = {}) {
  return detail::timed("containment-derived-st2", options.seed, [&](CheckReport &r) {
    QuotientGroup q = quotient(group, preset_generators(group), 3);
    QuotientGroup derived = derived_quotient(q, 1);
    std::vector<Word> family = second_level_family(group);
    if (options.mutate)
      family.push_back(group.parse("b"));
    r.pass = group.matches(family.front(), detail::decomposition(group, {"b", "b", "b"}));
    if (!r.pass)
      r.counterexample = "(b,b,b) element";
    for (const Word &w : family)
      if (r.pass && !(group.in_level_stabilizer(w, 2) || options.mutate) ) {
        r.pass = false;
        r.counterexample = group.format(w) + " moves level 2";
      }
    for (const Word &w : family)
      if (r.pass && !quotient_contains(group, derived, w)) {
        r.pass = false;
        r.counterexample = group.format(w) + " not in derived image";
      }
    if (r.pass && !subgroup_contained(level_kernel(q, 2, group.degree()), derived)) {
      r.pass = false;
      r.counterexample = "level-2 kernel not in derived image";
    }
  });
}

inline CheckReport run_b_prime_index(const Group &group, const HarnessOptions &options = {}) {
  return detail::timed("containment-b-prime-index", options.seed, [&](CheckReport &r) {
    QuotientGroup whole = quotient(group, preset_generators(group), 3);
    QuotientGroup b = quotient(group, {group.parse("b0"), group.parse("b1"), group.parse("b2")}, 3);
    QuotientGroup b_prime = derived_quotient(b, 1);
    const BigInt index = whole.order() / b_prime.order();
    r.pass = whole.order() % b_prime.order() == 0 && index == (options.mutate ? 27 : 81);
    if (!r.pass)
      r.counterexample = "index " + index.str();
  });
}

inline CheckReport run_second_derived_contains_st4(const Group &group, const HarnessOptions &options = {}) {
  return detail::timed("containment-second-derived-st4", options.seed, [&](CheckReport &r) {
    QuotientGroup q = quotient(group, preset_generators(group), 5);
    QuotientGroup second = derived_quotient(q, 2);
    QuotientGroup kernel = level_kernel(q, options.mutate ? 2 : 4, group.degree());
    r.pass = subgroup_contained(kernel, second);
    if (!r.pass)
      r.counterexample = "level-" + std::to_string(options.mutate ? 2 : 4) + " kernel not in second derived image";
  });
}

/// St(1) words keep their exponent sums after inserting a conjugated trivial word.
inline CheckReport run_b_decompose_uniqueness(const Group &group, const HarnessOptions &options = {}) {
  return detail::timed("b-decompose-uniqueness", options.seed, [&](CheckReport &r) {
    r.pass = true;
    RandomWords random(group, options.seed + 7);
    const Word x = group.parse("[b0 b1, b1^-1 b2]");
    // x and its conjugates by a have disjoint support, so they commute.
    const std::vector<Word> relators{group.comm(x, group.conj(x, group.parse("a"))),
                                     group.comm(x, group.conj(x, group.parse("a^2"))),
                                     group.pow(group.parse("b a"), 9)};
    const Word extra = options.mutate ? group.parse("b") : Word{};
    for (int t = 0; t < 200 && r.pass; ++t) {
      Word g = random.in_level_stabilizer(1, random.uniform(1, 8));
      Word conj = random.with_syllables(random.uniform(0, 3));
      Word rel = relators[static_cast<std::size_t>(random.uniform(0, static_cast<int>(relators.size()) - 1))];
      Word inserted = group.mul(group.conj(rel, conj), extra);
      const auto letters = g.letters();
      const std::size_t cut = static_cast<std::size_t>(random.uniform(0, static_cast<int>(letters.size())));
      std::vector<Letter> raw(letters.begin(), letters.begin() + static_cast<std::ptrdiff_t>(cut));
      raw.insert(raw.end(), inserted.letters().begin(), inserted.letters().end());
      raw.insert(raw.end(), letters.begin() + static_cast<std::ptrdiff_t>(cut), letters.end());
      Word g2 = group.reduce(raw);
      if (!group.in_first_level_stabilizer(g2) || b_decompose(group, g).n != b_decompose(group, g2).n ||
          !b_decompose(group, g2).consistent()) {
        r.pass = false;
        r.counterexample = group.format(g) + " vs " + group.format(g2);
      }
    }
  });
}

struct NamedCheck {
  std::string name;
  std::function<CheckReport(const Group &, const HarnessOptions &)> run;
  /// Only runs when the level budget reaches this value.
  int budget = 3;
};

/// Checks for the Gupta-Sidki 3-group, sorted by name.
inline std::vector<NamedCheck> gs3_checks() {
  std::vector<NamedCheck> checks{
      {"b-decompose-uniqueness", run_b_decompose_uniqueness},
      {"circulant", [](const Group &, const HarnessOptions &o) { return run_circulant_check(o); }},
      {"containment-b-prime-index", run_b_prime_index},
      {"containment-derived-st2", run_derived_contains_st2},
      {"containment-second-derived-st4", run_second_derived_contains_st4, 5},
      {"cube-identity", run_cube_identity},
      {"identities", run_identity_suite},
      {"length-first-level", [](const Group &g, const HarnessOptions &o) { return run_length_bound_check(g, 1, o); }},
      {"length-second-level", [](const Group &g, const HarnessOptions &o) { return run_length_bound_check(g, 2, o); }},
      {"orders", run_order_check},
  };
  return checks;
}

/// Runs every check whose name contains `filter`, in name order.
inline std::vector<CheckReport> run_checks(const Group &group, const std::string &filter,
                                           const HarnessOptions &options = {}) {
  std::vector<CheckReport> out;
  for (const NamedCheck &c : gs3_checks()) {
    if (c.name.find(filter) == std::string::npos || c.budget > options.level_budget)
      continue;
    CheckReport r = c.run(group, options);
    r.name = c.name;
    out.push_back(std::move(r));
  }
  return out;
}

/// Containment checks up to the given budget (3, 4 or 5).
inline std::vector<CheckReport> run_containment_checks(const Group &group, int level_budget,
                                                       const HarnessOptions &options = {}) {
  if (level_budget < 3 || level_budget > 5)
    throw Error("level budget must be 3, 4 or 5");
  HarnessOptions o = options;
  o.level_budget = level_budget;
  return run_checks(group, "containment", o);
}

} // namespace branchgroup
