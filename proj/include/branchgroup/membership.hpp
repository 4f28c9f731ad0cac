#pragma once

#include <algorithm>
#include <optional>
#include <string>

#include "quotient.hpp"
#include "subgroup.hpp"

namespace branchgroup {

struct MembershipOptions {
  /// Largest ball of products searched for a witness.
  std::size_t word_cap = 2000;
  /// Deepest congruence quotient tried for a separation.
  int level_cap = 5;
};

struct MembershipVerdict {
  enum class Kind { In, NotIn, Unknown };
  Kind kind = Kind::Unknown;
  /// In: h as a product of K's generators.
  std::optional<ProductWord> witness;
  /// NotIn: a level n whose quotient G/St(n) separates h from K.
  int level = 0;
  std::string reason;
};

inline const char *to_string(MembershipVerdict::Kind k) {
  switch (k) {
  case MembershipVerdict::Kind::In: return "IN";
  case MembershipVerdict::Kind::NotIn: return "NOT-IN";
  case MembershipVerdict::Kind::Unknown: return "UNKNOWN";
  }
  return "?";
}

/// Searches products of K's generators for one equal to h.
inline std::optional<ProductWord> product_witness(const Group &group, const Word &h, const SubgroupSpec &k,
                                                  std::size_t cap) {
  if (group.is_trivial(h))
    return ProductWord{};
  if (k.trivial())
    return std::nullopt;
  auto found = find_products(group, k.generators(), {h}, cap);
  if (!found)
    return std::nullopt;
  return found->front();
}

/// Smallest level n <= level_cap at which h's image avoids K's image.
inline std::optional<int> separating_level(const Group &group, const Word &h, const SubgroupSpec &k,
                                           int level_cap) {
  for (int n = 1; n <= level_cap; ++n) {
    if (!group.level_fits(n))
      break;
    if (coset_separated(group, h, k.generators(), n))
      return n;
  }
  return std::nullopt;
}

/// Dovetails the product search with separations in G/St(n). Both halves are
/// sound: a product witness proves membership and a separating quotient
/// proves non-membership.
inline MembershipVerdict membership(const Group &group, const Word &h, const SubgroupSpec &k,
                                    MembershipOptions options = {}) {
  MembershipVerdict v;
  int next_level = 1;
  for (std::size_t cap = 16;; cap *= 4) {
    const std::size_t limit = std::min(cap, options.word_cap);
    if (auto w = product_witness(group, h, k, limit)) {
      v.kind = MembershipVerdict::Kind::In;
      v.witness = std::move(w);
      return v;
    }
    // One more quotient level per round, all remaining levels on the last.
    const int top = limit >= options.word_cap ? options.level_cap : std::min(next_level, options.level_cap);
    for (; next_level <= top; ++next_level) {
      if (!group.level_fits(next_level)) {
        next_level = options.level_cap + 1;
        break;
      }
      if (coset_separated(group, h, k.generators(), next_level)) {
        v.kind = MembershipVerdict::Kind::NotIn;
        v.level = next_level;
        return v;
      }
    }
    if (limit >= options.word_cap)
      break;
  }
  v.reason = "no product witness within " + std::to_string(options.word_cap) +
             " elements and no separation up to level " + std::to_string(options.level_cap);
  return v;
}

} // namespace branchgroup
