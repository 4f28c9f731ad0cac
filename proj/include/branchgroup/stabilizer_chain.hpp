#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"
#include "permutation.hpp"

namespace branchgroup {

using BigInt = boost::multiprecision::cpp_int;

/// Deterministic Schreier-Sims stabilizer chain.
///
/// Level j stores a base point b_j, generators S_j fixing b_0..b_{j-1}, the
/// orbit of b_j under <S_j>, and explicit coset representatives. Every
/// Schreier generator of level j is entered at level j+1, so once all calls
/// return, <S_{j+1}> is the stabilizer of b_j in <S_j>.
///
/// Base points are taken from `base_prefix` first (one level per prefix
/// point, in order), then as the first point moved by the element that
/// forces a new level.
class StabilizerChain {
public:
  struct Level {
    Point base = 0;
    std::vector<Permutation> generators;
    std::vector<Point> orbit;
    /// Index into `orbit` for every point, or -1.
    std::vector<std::int32_t> position;
    std::vector<Permutation> reps;
    std::vector<Permutation> rep_inverses;
  };

  explicit StabilizerChain(std::size_t degree, std::vector<Point> base_prefix = {})
      : degree_(degree), prefix_(std::move(base_prefix)) {
    for (Point b : prefix_)
      if (b >= degree_)
        throw Error("base point out of range");
  }

  std::size_t degree() const noexcept { return degree_; }
  std::size_t depth() const noexcept { return levels_.size(); }
  const Level &level(std::size_t j) const { return levels_.at(j); }

  /// Adds g to the group; returns false if g was already a member.
  bool add(const Permutation &g) {
    check_degree(g);
    if (contains(g))
      return false;
    extend(0, g);
    return true;
  }

  /// Membership by sifting through the chain.
  bool contains(const Permutation &g) const {
    check_degree(g);
    return sift(0, g).is_identity();
  }

  BigInt order() const {
    BigInt result = 1;
    for (const Level &l : levels_)
      result *= static_cast<unsigned>(l.orbit.size());
    return result;
  }

  std::vector<Point> base() const {
    std::vector<Point> b;
    for (const Level &l : levels_)
      b.push_back(l.base);
    return b;
  }

  /// Strong generators of the pointwise stabilizer of b_0..b_{j-1}.
  std::vector<Permutation> stabilizer_generators(std::size_t j) const {
    if (j >= levels_.size())
      return {};
    return levels_[j].generators;
  }

  /// Residue of g after stripping coset representatives from level j on.
  Permutation sift(std::size_t j, Permutation g) const {
    for (std::size_t k = j; k < levels_.size(); ++k) {
      const Level &l = levels_[k];
      Point beta = g[l.base];
      std::int32_t pos = l.position[beta];
      if (pos < 0)
        return g;
      g = g.then(l.rep_inverses[static_cast<std::size_t>(pos)]);
    }
    return g;
  }

private:
  std::size_t degree_;
  std::vector<Point> prefix_;
  std::deque<Level> levels_;

  void check_degree(const Permutation &g) const {
    if (g.degree() != degree_)
      throw Error("permutation degree does not match the chain");
  }

  Point choose_base(std::size_t j, const Permutation &g) const {
    if (j < prefix_.size())
      return prefix_[j];
    return static_cast<Point>(g.first_moved());
  }

  void extend(std::size_t j, const Permutation &g) {
    if (g.is_identity() || sift(j, g).is_identity())
      return;
    if (j == levels_.size()) {
      Level l;
      l.base = choose_base(j, g);
      l.position.assign(degree_, -1);
      l.orbit.push_back(l.base);
      l.position[l.base] = 0;
      l.reps.push_back(Permutation::identity(degree_));
      l.rep_inverses.push_back(Permutation::identity(degree_));
      levels_.push_back(std::move(l));
    }
    Level &l = levels_[j];
    l.generators.push_back(g);
    const std::size_t newest = l.generators.size() - 1;
    const std::size_t old_size = l.orbit.size();

    // Old orbit points only need the new generator; points discovered below
    // need every generator.
    for (std::size_t i = 0; i < old_size; ++i)
      process_pair(j, i, newest);
    for (std::size_t i = old_size; i < levels_[j].orbit.size(); ++i)
      for (std::size_t s = 0; s < levels_[j].generators.size(); ++s)
        process_pair(j, i, s);
  }

  void process_pair(std::size_t j, std::size_t i, std::size_t s) {
    Level &l = levels_[j];
    const Permutation &gen = l.generators[s];
    Point beta = l.orbit[i];
    Point gamma = gen[beta];
    if (l.position[gamma] < 0) {
      Permutation rep = l.reps[i].then(gen);
      l.position[gamma] = static_cast<std::int32_t>(l.orbit.size());
      l.orbit.push_back(gamma);
      l.rep_inverses.push_back(rep.inverse());
      l.reps.push_back(std::move(rep));
      return;
    }
    Permutation schreier = l.reps[i].then(gen).then(l.rep_inverses[static_cast<std::size_t>(l.position[gamma])]);
    if (!schreier.is_identity())
      extend(j + 1, schreier);
  }
};

} // namespace branchgroup
