#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "group.hpp"

namespace branchgroup {

/// A finitely generated subgroup given by generator words. Generators are
/// reduced, identities are dropped; an empty list is the trivial subgroup.
class SubgroupSpec {
public:
  SubgroupSpec() = default;

  SubgroupSpec(const Group &group, const std::vector<Word> &generators) {
    for (const Word &g : generators)
      if (!g.empty() && !group.is_trivial(g))
        generators_.push_back(g);
    for (const Word &g : generators_)
      max_length_ = std::max(max_length_, group.syllable_length(g));
  }

  const std::vector<Word> &generators() const noexcept { return generators_; }
  bool trivial() const noexcept { return generators_.empty(); }
  /// Largest syllable length among the generators.
  int max_length() const noexcept { return max_length_; }

private:
  std::vector<Word> generators_;
  int max_length_ = 0;
};

/// A word in the generators of some subgroup: (generator index, exponent).
struct ProductWord {
  std::vector<std::pair<std::size_t, int>> factors;

  Word evaluate(const Group &group, const std::vector<Word> &gens) const {
    WordBuilder b = group.builder();
    for (auto [index, exponent] : factors) {
      const Word &g = gens.at(index);
      for (int i = 0; i < (exponent < 0 ? -exponent : exponent); ++i) {
        if (exponent < 0)
          b.append_inverse(g);
        else
          b.append(g);
      }
    }
    return std::move(b).build();
  }

  ProductWord then(std::size_t index, int exponent) const {
    ProductWord w = *this;
    if (!w.factors.empty() && w.factors.back().first == index) {
      w.factors.back().second += exponent;
      if (w.factors.back().second == 0)
        w.factors.pop_back();
    } else {
      w.factors.emplace_back(index, exponent);
    }
    return w;
  }

  /// Renders as "s1 s2^-1 ..." with 1-based generator names; "1" when empty.
  std::string to_string(const std::string &prefix = "s") const {
    if (factors.empty())
      return "1";
    std::string out;
    for (auto [index, exponent] : factors) {
      if (!out.empty())
        out += ' ';
      out += prefix + std::to_string(index + 1);
      if (exponent != 1)
        out += "^" + std::to_string(exponent);
    }
    return out;
  }

  friend bool operator==(const ProductWord &, const ProductWord &) = default;
};

// ---------------------------------------------------------------------------
// Generating-set hygiene

/// Drops trivial generators and generators equal to an earlier one or its inverse.
inline std::vector<Word> normalize_generators(const Group &group, const std::vector<Word> &gens) {
  std::vector<Word> out;
  for (const Word &g : gens) {
    if (g.empty() || group.is_trivial(g))
      continue;
    bool duplicate = false;
    for (const Word &h : out)
      if (group.syllable_length(g) == group.syllable_length(h) &&
          (group.equal(g, h) || group.equal(g, group.inv(h)))) {
        duplicate = true;
        break;
      }
    if (!duplicate)
      out.push_back(g);
  }
  return out;
}

/// Nielsen shortening: replace a generator by its product with another
/// generator (or an inverse) whenever that lowers its syllable length. At most
/// two sweeps. The generated subgroup is unchanged.
inline std::vector<Word> shorten_generators(const Group &group, std::vector<Word> gens) {
  for (int sweep = 0; sweep < 2; ++sweep) {
    bool changed = false;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      for (std::size_t j = 0; j < gens.size(); ++j) {
        if (i == j || gens[j].empty())
          continue;
        const Word xj_inv = group.inv(gens[j]);
        const Word candidates[] = {group.mul(gens[i], gens[j]), group.mul(gens[i], xj_inv),
                                   group.mul(gens[j], gens[i]), group.mul(xj_inv, gens[i])};
        for (const Word &c : candidates)
          if (group.syllable_length(c) < group.syllable_length(gens[i])) {
            gens[i] = c;
            changed = true;
          }
      }
    }
    gens = normalize_generators(group, gens);
    if (!changed)
      break;
  }
  return gens;
}

inline int max_syllable_length(const Group &group, const std::vector<Word> &gens) {
  int d = 0;
  for (const Word &g : gens)
    d = std::max(d, group.syllable_length(g));
  return d;
}

// ---------------------------------------------------------------------------
// First-level action

struct Level1Orbits {
  /// Orbits of {0..p-1}, each sorted, listed by smallest point.
  std::vector<std::vector<int>> orbits;
  /// For every point, a word over the subgroup mapping the smallest point of
  /// its orbit to it.
  std::vector<Word> transversal;
  std::vector<ProductWord> transversal_products;
};

namespace detail {

/// Generator moves used for transversals: when one generator's root
/// permutation generates the whole level-1 image (always so for Gupta-Sidki
/// groups) only its powers are used, giving the transversal {1, t, t^-1, ...}.
inline std::vector<std::pair<std::size_t, int>> transversal_moves(const Group &group, const SubgroupSpec &h) {
  const auto &gens = h.generators();
  std::vector<Permutation> roots;
  for (const Word &g : gens)
    roots.push_back(group.root_action(g));

  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (roots[i].is_identity())
      continue;
    std::vector<Permutation> powers;
    for (Permutation x = roots[i];; x = x.then(roots[i])) {
      powers.push_back(x);
      if (x.is_identity())
        break;
    }
    bool generates = true;
    for (const Permutation &r : roots)
      if (std::find(powers.begin(), powers.end(), r) == powers.end()) {
        generates = false;
        break;
      }
    if (generates && (!best || group.syllable_length(gens[i]) < group.syllable_length(gens[*best])))
      best = i;
  }
  std::vector<std::pair<std::size_t, int>> moves;
  if (best) {
    moves.emplace_back(*best, 1);
    moves.emplace_back(*best, -1);
    return moves;
  }
  for (std::size_t i = 0; i < gens.size(); ++i)
    if (!roots[i].is_identity()) {
      moves.emplace_back(i, 1);
      moves.emplace_back(i, -1);
    }
  return moves;
}

} // namespace detail

inline Level1Orbits level1_orbit_and_transversal(const Group &group, const SubgroupSpec &h) {
  const int p = group.degree();
  const auto moves = detail::transversal_moves(group, h);
  std::vector<Permutation> move_perms;
  for (auto [i, e] : moves)
    move_perms.push_back(group.root_action(h.generators()[i]).pow(e));

  Level1Orbits result;
  result.transversal.assign(static_cast<std::size_t>(p), Word{});
  result.transversal_products.assign(static_cast<std::size_t>(p), ProductWord{});
  std::vector<bool> seen(static_cast<std::size_t>(p), false);
  for (int start = 0; start < p; ++start) {
    if (seen[static_cast<std::size_t>(start)])
      continue;
    std::vector<int> orbit{start};
    seen[static_cast<std::size_t>(start)] = true;
    for (std::size_t k = 0; k < orbit.size(); ++k) {
      const int beta = orbit[k];
      for (std::size_t m = 0; m < moves.size(); ++m) {
        const int gamma = static_cast<int>(move_perms[m][static_cast<Point>(beta)]);
        if (seen[static_cast<std::size_t>(gamma)])
          continue;
        seen[static_cast<std::size_t>(gamma)] = true;
        orbit.push_back(gamma);
        auto [gi, e] = moves[m];
        const Word &g = h.generators()[gi];
        result.transversal[static_cast<std::size_t>(gamma)] =
            group.mul(result.transversal[static_cast<std::size_t>(beta)], e > 0 ? g : group.inv(g));
        result.transversal_products[static_cast<std::size_t>(gamma)] =
            result.transversal_products[static_cast<std::size_t>(beta)].then(gi, e);
      }
    }
    std::sort(orbit.begin(), orbit.end());
    result.orbits.push_back(std::move(orbit));
  }
  return result;
}

/// Schreier generators of the stabilizer of level-1 point d in H.
inline std::vector<Word> point_stabilizer_generators(const Group &group, const SubgroupSpec &h, int d) {
  const Level1Orbits orbits = level1_orbit_and_transversal(group, h);
  const std::vector<int> *orbit = nullptr;
  for (const auto &o : orbits.orbits)
    if (std::find(o.begin(), o.end(), d) != o.end())
      orbit = &o;
  // Transversal words map the orbit minimum to each point; re-base them at d.
  const Word &to_d = orbits.transversal[static_cast<std::size_t>(d)];
  auto rep = [&](int beta) { return group.mul(group.inv(to_d), orbits.transversal[static_cast<std::size_t>(beta)]); };

  std::vector<Word> out;
  for (int beta : *orbit) {
    const Word u = rep(beta);
    for (const Word &s : h.generators()) {
      const int gamma = static_cast<int>(group.root_action(s)[static_cast<Point>(beta)]);
      out.push_back(group.mul(group.mul(u, s), group.inv(rep(gamma))));
    }
  }
  return normalize_generators(group, out);
}

/// Generators of St_H(1), the kernel of H's action on level 1, as Schreier
/// generators t1 s t2^-1 over a transversal of the level-1 image. Returns H's
/// generators unchanged when H already fixes level 1.
inline std::vector<Word> stabilizer1_generators(const Group &group, const SubgroupSpec &h) {
  const auto &gens = h.generators();
  bool inside = true;
  for (const Word &g : gens)
    inside = inside && group.in_first_level_stabilizer(g);
  if (inside)
    return gens;

  const auto moves = detail::transversal_moves(group, h);
  const std::size_t p = static_cast<std::size_t>(group.degree());
  std::vector<Permutation> cosets{Permutation::identity(p)};
  std::vector<Word> reps{Word{}};
  for (std::size_t k = 0; k < cosets.size(); ++k)
    for (auto [gi, e] : moves) {
      Permutation next = cosets[k].then(group.root_action(gens[gi]).pow(e));
      if (std::find(cosets.begin(), cosets.end(), next) != cosets.end())
        continue;
      cosets.push_back(next);
      reps.push_back(group.mul(reps[k], e > 0 ? gens[gi] : group.inv(gens[gi])));
    }
  // Cosets reachable only through other generators (non-cyclic images).
  for (std::size_t k = 0; k < cosets.size(); ++k)
    for (std::size_t gi = 0; gi < gens.size(); ++gi) {
      Permutation next = cosets[k].then(group.root_action(gens[gi]));
      if (std::find(cosets.begin(), cosets.end(), next) != cosets.end())
        continue;
      cosets.push_back(next);
      reps.push_back(group.mul(reps[k], gens[gi]));
    }

  std::vector<Word> out;
  for (std::size_t k = 0; k < cosets.size(); ++k)
    for (const Word &s : gens) {
      Permutation target = cosets[k].then(group.root_action(s));
      std::size_t t = static_cast<std::size_t>(std::find(cosets.begin(), cosets.end(), target) - cosets.begin());
      out.push_back(group.mul(group.mul(reps[k], s), group.inv(reps[t])));
    }
  return normalize_generators(group, out);
}

/// Sections at level-1 vertex d of a list of elements fixing d.
inline std::vector<Word> sections_at(const Group &group, const std::vector<Word> &gens, int d) {
  std::vector<Word> out;
  const Vertex v({d});
  for (const Word &g : gens)
    out.push_back(group.section(g, v));
  return normalize_generators(group, out);
}

/// Generators of the vertex section H_v = phi_v(St_H(v)), one level at a time.
inline SubgroupSpec vertex_section_subgroup(const Group &group, const SubgroupSpec &h, const Vertex &v) {
  SubgroupSpec current = h;
  for (int d : v.digits()) {
    if (current.trivial())
      return current;
    current = SubgroupSpec(group, sections_at(group, point_stabilizer_generators(group, current, d), d));
  }
  return current;
}

// ---------------------------------------------------------------------------
// Roadmap dichotomy (Gupta-Sidki groups)

enum class Dichotomy { SectionsEqualWholeGroup, SectionsInStab1 };

struct DichotomyResult {
  Dichotomy outcome = Dichotomy::SectionsInStab1;
  /// First-level section generators, one list per vertex.
  std::vector<std::vector<Word>> sections;
  /// When the sections are the whole group: a vertex and a section generator
  /// there that moves level 1.
  int vertex = -1;
  Word moving_generator;
};

/// For H not inside St(1), the first-level vertex sections of H are all the
/// whole group or all inside St(1). Decided by looking for a section
/// generator with nontrivial root action.
inline DichotomyResult roadmap_dichotomy(const Group &group, const SubgroupSpec &h) {
  if (!group.preset().is_gupta_sidki())
    throw Error("the roadmap dichotomy applies to Gupta-Sidki groups");
  bool inside = true;
  for (const Word &g : h.generators())
    inside = inside && group.in_first_level_stabilizer(g);
  if (inside)
    throw RequiresRootAction("subgroup lies in the first level stabilizer");

  DichotomyResult result;
  const std::vector<Word> stab = stabilizer1_generators(group, h);
  for (int u = 0; u < group.degree(); ++u)
    result.sections.push_back(sections_at(group, stab, u));
  for (int u = 0; u < group.degree() && result.vertex < 0; ++u)
    for (const Word &w : result.sections[static_cast<std::size_t>(u)])
      if (!group.in_first_level_stabilizer(w)) {
        result.outcome = Dichotomy::SectionsEqualWholeGroup;
        result.vertex = u;
        result.moving_generator = w;
        break;
      }
  return result;
}

// ---------------------------------------------------------------------------
// Element enumeration

/// Level used to fingerprint elements: the deepest with at most 243 leaves.
inline int fingerprint_level(const Group &group) {
  int level = 1;
  std::size_t points = static_cast<std::size_t>(group.degree());
  const std::size_t cap = std::min<std::size_t>(243, group.limits().max_points);
  while (points * static_cast<std::size_t>(group.degree()) <= cap) {
    points *= static_cast<std::size_t>(group.degree());
    ++level;
  }
  return level;
}

/// Breadth-first ball of products of the generators and their inverses,
/// deduplicated by fingerprint and the word problem.
class ElementBall {
public:
  struct Entry {
    Word word;
    Permutation fingerprint;
    ProductWord product;
  };

  ElementBall(const Group &group, std::vector<Word> gens)
      : group_(group), gens_(std::move(gens)), level_(fingerprint_level(group)) {
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      moves_.push_back({i, 1, gens_[i], group_.level_action(gens_[i], level_)});
      Word inverse = group_.inv(gens_[i]);
      moves_.push_back({i, -1, inverse, group_.level_action(inverse, level_)});
    }
    insert({Word{}, Permutation::identity(group_.leaves_at(level_)), ProductWord{}});
  }

  /// Expands until the ball is closed (returns true) or holds more than cap
  /// elements (returns false).
  bool grow(std::size_t cap) {
    while (next_ < entries_.size()) {
      const std::size_t i = next_++;
      for (const Move &m : moves_) {
        Entry candidate{group_.mul(entries_[i].word, m.word), entries_[i].fingerprint.then(m.fingerprint),
                        entries_[i].product.then(m.index, m.exponent)};
        insert(std::move(candidate));
        if (entries_.size() > cap)
          return false;
      }
    }
    return true;
  }

  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<Entry> &entries() const noexcept { return entries_; }

  /// An entry equal to `target`, if the ball holds one.
  std::optional<ProductWord> find(const Word &target) const {
    Permutation fp = group_.level_action(target, level_);
    auto it = buckets_.find(fp);
    if (it == buckets_.end())
      return std::nullopt;
    for (std::size_t idx : it->second)
      if (group_.equal(entries_[idx].word, target))
        return entries_[idx].product;
    return std::nullopt;
  }

private:
  struct Move {
    std::size_t index;
    int exponent;
    Word word;
    Permutation fingerprint;
  };

  const Group &group_;
  std::vector<Word> gens_;
  int level_;
  std::vector<Move> moves_;
  std::vector<Entry> entries_;
  std::unordered_map<Permutation, std::vector<std::size_t>, PermutationHash> buckets_;
  std::size_t next_ = 0;

  bool insert(Entry e) {
    auto &bucket = buckets_[e.fingerprint];
    for (std::size_t idx : bucket)
      if (group_.equal(entries_[idx].word, e.word))
        return false;
    bucket.push_back(entries_.size());
    entries_.push_back(std::move(e));
    return true;
  }
};

struct EnumerationResult {
  bool exceeds_cap = false;
  std::size_t count = 0;
};

/// Order of H by closure, when it is at most cap.
inline EnumerationResult enumerate_elements(const Group &group, const SubgroupSpec &h, std::size_t cap) {
  if (cap < 1)
    throw Error("enumeration cap must be positive");
  ElementBall ball(group, h.generators());
  bool closed = ball.grow(cap);
  if (!closed || ball.size() > cap)
    return {true, 0};
  return {false, ball.size()};
}

/// Searches the ball of products of `gens` for each target; all-or-nothing.
inline std::optional<std::vector<ProductWord>> find_products(const Group &group, const std::vector<Word> &gens,
                                                             const std::vector<Word> &targets, std::size_t cap) {
  ElementBall ball(group, gens);
  std::vector<std::optional<ProductWord>> found(targets.size());
  auto scan = [&] {
    bool all = true;
    for (std::size_t t = 0; t < targets.size(); ++t) {
      if (!found[t])
        found[t] = ball.find(targets[t]);
      all = all && found[t].has_value();
    }
    return all;
  };
  // Grow in stages so cheap certificates are found early.
  for (std::size_t stage = 64;; stage *= 4) {
    const std::size_t limit = std::min(stage, cap);
    bool closed = ball.grow(limit);
    if (scan()) {
      std::vector<ProductWord> out;
      for (auto &f : found)
        out.push_back(*f);
      return out;
    }
    if (closed || limit >= cap)
      return std::nullopt;
  }
}

} // namespace branchgroup
