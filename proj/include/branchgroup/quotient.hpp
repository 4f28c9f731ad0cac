#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "group.hpp"
#include "stabilizer_chain.hpp"

namespace branchgroup {

/// Image of a finitely generated subgroup in the finite quotient G/St(n),
/// realised as a permutation group on the p^n vertices of level n.
class QuotientGroup {
public:
  QuotientGroup(int level, std::size_t points) : level_(level), chain_(points) {}

  int level() const noexcept { return level_; }
  std::size_t points() const noexcept { return chain_.degree(); }
  const std::vector<Permutation> &generators() const noexcept { return generators_; }
  const std::vector<std::string> &labels() const noexcept { return labels_; }
  const StabilizerChain &chain() const noexcept { return chain_; }

  BigInt order() const { return chain_.order(); }
  bool contains(const Permutation &x) const { return chain_.contains(x); }

  /// Adds a generator; returns false when it was already in the group.
  bool add_generator(const Permutation &x, std::string label = {}) {
    generators_.push_back(x);
    labels_.push_back(std::move(label));
    return chain_.add(x);
  }

private:
  int level_;
  StabilizerChain chain_;
  std::vector<Permutation> generators_;
  std::vector<std::string> labels_;
};

/// The image of <gens> in G/St(n).
inline QuotientGroup quotient(const Group &group, const std::vector<Word> &gens, int n) {
  if (n < 1)
    throw Error("quotient level must be at least 1");
  QuotientGroup q(n, group.leaves_at(n));
  for (const Word &g : gens)
    q.add_generator(group.level_action(g, n), group.format(g));
  return q;
}

inline BigInt quotient_order(const QuotientGroup &q) { return q.order(); }

/// True iff the level-n image of g lies in q.
inline bool quotient_contains(const Group &group, const QuotientGroup &q, const Word &g) {
  return q.contains(group.level_action(g, q.level()));
}

/// True certifies h is not in <K>: its image in G/St(n) avoids the image of <K>.
/// False is inconclusive.
inline bool coset_separated(const Group &group, const Word &h, const std::vector<Word> &k, int n) {
  QuotientGroup q = quotient(group, k, n);
  return !quotient_contains(group, q, h);
}

/// Normal closure of `seeds` in the group generated by `ambient`.
inline QuotientGroup normal_closure(int level, std::size_t points, const std::vector<Permutation> &ambient,
                                    const std::vector<Permutation> &seeds) {
  QuotientGroup closure(level, points);
  std::vector<Permutation> pending;
  for (const Permutation &s : seeds)
    if (!closure.contains(s)) {
      closure.add_generator(s);
      pending.push_back(s);
    }
  for (std::size_t i = 0; i < pending.size(); ++i) {
    for (const Permutation &x : ambient) {
      Permutation c = x.inverse().then(pending[i]).then(x);
      if (!closure.contains(c)) {
        closure.add_generator(c);
        pending.push_back(std::move(c));
      }
    }
  }
  return closure;
}

inline Permutation commutator(const Permutation &x, const Permutation &y) {
  return x.inverse().then(y.inverse()).then(x).then(y);
}

/// k-th derived subgroup of q, k in {1, 2}; generators are commutators of
/// generators closed under conjugation.
inline QuotientGroup derived_quotient(const QuotientGroup &q, int k) {
  if (k < 1 || k > 2)
    throw Error("derivation depth must be 1 or 2");
  std::vector<Permutation> ambient = q.generators();
  QuotientGroup current = q;
  for (int step = 0; step < k; ++step) {
    std::vector<Permutation> commutators;
    std::unordered_set<Permutation, PermutationHash> seen;
    for (std::size_t i = 0; i < ambient.size(); ++i)
      for (std::size_t j = i + 1; j < ambient.size(); ++j) {
        Permutation c = commutator(ambient[i], ambient[j]);
        if (!c.is_identity() && seen.insert(c).second)
          commutators.push_back(std::move(c));
      }
    current = normal_closure(q.level(), q.points(), ambient, commutators);
    ambient = current.generators();
  }
  return current;
}

/// Every generator of `sub` lies in `sup`.
inline bool subgroup_contained(const QuotientGroup &sub, const QuotientGroup &sup) {
  if (sub.level() != sup.level())
    throw LevelMismatch("quotients live at levels " + std::to_string(sub.level()) + " and " +
                        std::to_string(sup.level()));
  for (const Permutation &g : sub.generators())
    if (!sup.contains(g))
      return false;
  return true;
}

/// Kernel of q -> G/St(m) for m < level: the elements of q fixing every
/// vertex of level m. Computed with a chain on leaves plus level-m vertices
/// whose base starts with those vertices.
inline QuotientGroup level_kernel(const QuotientGroup &q, int m, int degree) {
  if (m < 0 || m >= q.level())
    throw Error("kernel level must lie below the quotient level");
  const std::size_t leaves = q.points();
  std::size_t block = 1;
  for (int i = m; i < q.level(); ++i)
    block *= static_cast<std::size_t>(degree);
  const std::size_t vertices = leaves / block;

  auto extend_perm = [&](const Permutation &x) {
    std::vector<Point> images(x.images().begin(), x.images().end());
    for (std::size_t v = 0; v < vertices; ++v)
      images.push_back(static_cast<Point>(leaves + x[static_cast<Point>(v * block)] / block));
    return Permutation(std::move(images));
  };
  std::vector<Point> prefix;
  for (std::size_t v = 0; v < vertices; ++v)
    prefix.push_back(static_cast<Point>(leaves + v));
  StabilizerChain big(leaves + vertices, prefix);
  for (const Permutation &g : q.generators())
    big.add(extend_perm(g));

  QuotientGroup kernel(q.level(), leaves);
  for (std::size_t j = vertices; j < big.depth(); ++j)
    for (const Permutation &g : big.stabilizer_generators(j)) {
      std::vector<Point> restricted(g.images().begin(), g.images().begin() + static_cast<std::ptrdiff_t>(leaves));
      Permutation r(std::move(restricted));
      if (!kernel.contains(r))
        kernel.add_generator(r);
    }
  return kernel;
}

} // namespace branchgroup
