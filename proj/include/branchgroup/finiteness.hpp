#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "subgroup.hpp"

namespace branchgroup {

struct FinitenessOptions {
  /// Closure size up to which the order of a finite subgroup is attached.
  std::size_t enumeration_cap = 20000;
  /// Ball size searched for explicit whole-group certificates.
  std::size_t certificate_cap = 4000;
};

/// One recursion step: the generators of a node before and after moving to
/// a child vertex. `vertex` is the child's path from the root of the query.
struct TraceStep {
  enum class Kind { Normalize, Section, Finite, Witness };
  Kind kind = Kind::Normalize;
  Vertex vertex;
  std::vector<Word> before;
  std::vector<Word> after;
  std::string note;
};

inline const char *to_string(TraceStep::Kind k) {
  switch (k) {
  case TraceStep::Kind::Normalize: return "normalize";
  case TraceStep::Kind::Section: return "section";
  case TraceStep::Kind::Finite: return "finite";
  case TraceStep::Kind::Witness: return "witness";
  }
  return "?";
}

/// Evidence that the vertex section at `vertex` is the whole group.
///  Products: explicit products of the section generators equal to each
///            preset generator.
///  Roadmap:  the parent node moves level 1 and one section generator also
///            moves level 1, which forces the section to be everything.
struct WholeGroupCertificate {
  enum class Kind { Products, Roadmap };
  Kind kind = Kind::Products;
  Vertex vertex;
  std::vector<Word> section_generators;
  std::vector<ProductWord> products;
  Word moving_generator;
};

struct FinitenessVerdict {
  enum class Kind { Finite, Infinite, Unknown };
  Kind kind = Kind::Unknown;
  /// Closure size; absent when it is larger than the enumeration cap.
  std::optional<std::size_t> order;
  std::optional<WholeGroupCertificate> witness;
  /// For infinite verdicts: the steps from the root to the witness vertex.
  /// For finite verdicts: every node visited.
  std::vector<TraceStep> trace;
  std::string reason;
};

inline const char *to_string(FinitenessVerdict::Kind k) {
  switch (k) {
  case FinitenessVerdict::Kind::Finite: return "FINITE";
  case FinitenessVerdict::Kind::Infinite: return "INFINITE";
  case FinitenessVerdict::Kind::Unknown: return "UNKNOWN";
  }
  return "?";
}

/// Generators of the section at level-1 vertex u of St_H(1), shortened.
/// This is the single transformation replayed along a trace.
inline std::vector<Word> section_step(const Group &group, const std::vector<Word> &gens, int u) {
  SubgroupSpec h(group, gens);
  return shorten_generators(group, sections_at(group, stabilizer1_generators(group, h), u));
}

namespace detail {

inline bool inside_stab1(const Group &group, const std::vector<Word> &gens) {
  for (const Word &g : gens)
    if (!group.in_first_level_stabilizer(g))
      return false;
  return true;
}

inline std::string generator_key(const Group &group, const std::vector<Word> &gens) {
  std::set<std::string> parts;
  for (const Word &g : gens) {
    parts.insert(group.format(g));
    parts.insert(group.format(group.inv(g)));
  }
  std::string key;
  for (const std::string &p : parts)
    key += p + ";";
  return key;
}

inline std::optional<WholeGroupCertificate> products_certificate(const Group &group, const std::vector<Word> &gens,
                                                                 const Vertex &v, std::size_t cap) {
  if (gens.empty())
    return std::nullopt;
  auto products = find_products(group, gens, preset_generators(group), cap);
  if (!products)
    return std::nullopt;
  WholeGroupCertificate cert;
  cert.kind = WholeGroupCertificate::Kind::Products;
  cert.vertex = v;
  cert.section_generators = gens;
  cert.products = std::move(*products);
  return cert;
}

/// Recursive decision for Gupta-Sidki 3. Vertices in results are relative
/// to the node they are returned from.
class FinitenessSearch {
public:
  FinitenessSearch(const Group &group, FinitenessOptions options) : group_(group), options_(options) {}

  struct Node {
    bool finite = false;
    std::vector<TraceStep> steps;
    std::optional<WholeGroupCertificate> witness;
  };

  Node decide(const std::vector<Word> &gens) {
    const std::string key = generator_key(group_, gens);
    if (auto it = memo_.find(key); it != memo_.end())
      return it->second;
    if (!active_.insert(key).second)
      throw InternalLengthAssertionFailure("subgroup revisited without a length decrease");
    Node result = decide_uncached(gens);
    active_.erase(key);
    memo_.emplace(key, result);
    return result;
  }

private:
  const Group &group_;
  FinitenessOptions options_;
  std::map<std::string, Node> memo_;
  std::set<std::string> active_;

  static Node finite_leaf(const std::vector<Word> &gens, std::string note) {
    Node n;
    n.finite = true;
    n.steps.push_back({TraceStep::Kind::Finite, Vertex{}, gens, {}, std::move(note)});
    return n;
  }

  /// Prefixes child results with the step(s) that reached them.
  static Node through(Node child, std::vector<TraceStep> prefix) {
    Vertex here = prefix.empty() ? Vertex{} : prefix.back().vertex;
    for (TraceStep &s : child.steps)
      s.vertex = here.concat(s.vertex);
    if (child.witness)
      child.witness->vertex = here.concat(child.witness->vertex);
    prefix.insert(prefix.end(), child.steps.begin(), child.steps.end());
    child.steps = std::move(prefix);
    return child;
  }

  Node witness_here(const std::vector<Word> &gens) {
    auto cert = products_certificate(group_, gens, Vertex{}, options_.certificate_cap);
    if (!cert)
      return {};
    Node n;
    n.witness = std::move(cert);
    n.steps.push_back({TraceStep::Kind::Witness, Vertex{}, gens, {}, "products"});
    return n;
  }

  /// Infinite node known to have a first-level vertex section equal to G.
  /// Looks for explicit products first, then falls back on the roadmap
  /// certificate when this node moves level 1.
  std::optional<Node> first_level_witness(const std::vector<Word> &gens) {
    if (Node here = witness_here(gens); here.witness)
      return here;
    const bool moves = !inside_stab1(group_, gens);
    for (int u = 0; u < group_.degree(); ++u) {
      std::vector<Word> child = section_step(group_, gens, u);
      TraceStep step{TraceStep::Kind::Section, Vertex({u}), gens, child, {}};
      if (Node w = witness_here(child); w.witness)
        return through(std::move(w), {step});
      if (moves)
        for (const Word &x : child)
          if (!group_.in_first_level_stabilizer(x)) {
            Node n;
            WholeGroupCertificate cert;
            cert.kind = WholeGroupCertificate::Kind::Roadmap;
            cert.section_generators = child;
            cert.moving_generator = x;
            n.witness = std::move(cert);
            n.steps.push_back({TraceStep::Kind::Witness, Vertex{}, child, {}, "roadmap"});
            return through(std::move(n), {step});
          }
    }
    return std::nullopt;
  }

  Node decide_uncached(const std::vector<Word> &gens) {
    if (gens.empty())
      return finite_leaf(gens, "trivial");
    if (gens.size() == 1)
      return finite_leaf(gens, "cyclic");
    const int d = max_syllable_length(group_, gens);
    if (d <= 1)
      return short_generators(gens);
    if (inside_stab1(group_, gens))
      return split_first_level(gens, d);
    return split_second_level(gens, d);
  }

  /// At least two distinct generators, all of syllable length at most one:
  /// a power of a together with anything else gives G, and every other
  /// combination has a first-level vertex section equal to G.
  Node short_generators(const std::vector<Word> &gens) {
    bool all_rooted = true;
    for (const Word &g : gens)
      all_rooted = all_rooted && group_.syllable_length(g) == 0;
    if (all_rooted)
      return finite_leaf(gens, "rooted");
    if (auto w = first_level_witness(gens))
      return *w;
    throw InternalLengthAssertionFailure("no whole-group section found for generators of length at most 1");
  }

  Node split_first_level(const std::vector<Word> &gens, int d) {
    std::vector<std::vector<Word>> children;
    for (int u = 0; u < group_.degree(); ++u) {
      children.push_back(section_step(group_, gens, u));
      if (max_syllable_length(group_, children.back()) >= d)
        throw InternalLengthAssertionFailure("first-level sections did not get shorter");
    }
    return join(gens, children, {});
  }

  Node split_second_level(const std::vector<Word> &gens, int d) {
    SubgroupSpec h(group_, gens);
    DichotomyResult dichotomy = roadmap_dichotomy(group_, h);
    if (dichotomy.outcome == Dichotomy::SectionsEqualWholeGroup) {
      if (auto w = first_level_witness(gens))
        return *w;
      throw InternalLengthAssertionFailure("roadmap outcome without a witness");
    }
    // Sections at level 1 lie in St(1): pick the vertex k whose second-level
    // sections are shortest.
    int best_k = -1;
    int best_d = 0;
    std::vector<Word> best_first;
    std::vector<std::vector<Word>> best_children;
    for (int k = 0; k < group_.degree(); ++k) {
      std::vector<Word> first = section_step(group_, gens, k);
      std::vector<std::vector<Word>> children;
      int dk = 0;
      for (int j = 0; j < group_.degree(); ++j) {
        children.push_back(section_step(group_, first, j));
        dk = std::max(dk, max_syllable_length(group_, children.back()));
      }
      if (best_k < 0 || dk < best_d) {
        best_k = k;
        best_d = dk;
        best_first = std::move(first);
        best_children = std::move(children);
      }
    }
    if (best_d >= d)
      throw InternalLengthAssertionFailure("second-level sections did not get shorter (length " +
                                           std::to_string(d) + ")");
    TraceStep step{TraceStep::Kind::Section, Vertex({best_k}), gens, best_first, {}};
    return join(best_first, best_children, {step});
  }

  /// The node is finite iff every child is; children hang below the last
  /// step of `prefix`.
  Node join(const std::vector<Word> &gens, const std::vector<std::vector<Word>> &children,
            std::vector<TraceStep> prefix) {
    Vertex here = prefix.empty() ? Vertex{} : prefix.back().vertex;
    std::vector<TraceStep> visited = prefix;
    for (int u = 0; u < static_cast<int>(children.size()); ++u) {
      TraceStep step{TraceStep::Kind::Section, here.child(u), gens, children[static_cast<std::size_t>(u)], {}};
      Node child = decide(children[static_cast<std::size_t>(u)]);
      if (!child.finite) {
        std::vector<TraceStep> path = prefix;
        path.push_back(step);
        return through(std::move(child), std::move(path));
      }
      Node shifted = through(std::move(child), {step});
      visited.insert(visited.end(), shifted.steps.begin(), shifted.steps.end());
    }
    Node n;
    n.finite = true;
    n.steps = std::move(visited);
    return n;
  }
};

} // namespace detail

/// Finiteness of a finitely generated subgroup of the Gupta-Sidki 3-group.
/// H is finite iff no vertex section equals G; the search recurses on vertex
/// sections while the generator length decreases.
inline FinitenessVerdict is_finite_gs3(const Group &group, const SubgroupSpec &h, FinitenessOptions options = {}) {
  if (!group.preset().is_gupta_sidki() || group.degree() != 3)
    throw Error("the finiteness decision needs the Gupta-Sidki 3-group");
  FinitenessVerdict verdict;
  const std::vector<Word> gens = normalize_generators(group, h.generators());
  TraceStep normalize{TraceStep::Kind::Normalize, Vertex{}, h.generators(), gens, {}};

  detail::FinitenessSearch search(group, options);
  detail::FinitenessSearch::Node root = search.decide(gens);
  verdict.trace.push_back(std::move(normalize));
  verdict.trace.insert(verdict.trace.end(), root.steps.begin(), root.steps.end());
  if (root.finite) {
    verdict.kind = FinitenessVerdict::Kind::Finite;
    EnumerationResult e = enumerate_elements(group, SubgroupSpec(group, gens), options.enumeration_cap);
    if (!e.exceeds_cap)
      verdict.order = e.count;
    return verdict;
  }
  verdict.kind = FinitenessVerdict::Kind::Infinite;
  verdict.witness = std::move(root.witness);
  return verdict;
}

/// Re-derives every section step of an infinite verdict from the query
/// generators and checks the certificate at the witness vertex.
inline bool replay_witness(const Group &group, const SubgroupSpec &h, const FinitenessVerdict &verdict) {
  if (verdict.kind != FinitenessVerdict::Kind::Infinite || !verdict.witness || verdict.trace.empty())
    return false;
  const WholeGroupCertificate &cert = *verdict.witness;
  std::vector<Word> current = normalize_generators(group, h.generators());
  std::vector<Word> parent;
  Vertex at;
  std::size_t i = 0;
  if (verdict.trace[0].kind == TraceStep::Kind::Normalize) {
    if (verdict.trace[0].after != current)
      return false;
    i = 1;
  }
  for (; i < verdict.trace.size(); ++i) {
    const TraceStep &step = verdict.trace[i];
    if (step.kind == TraceStep::Kind::Witness)
      break;
    if (step.kind != TraceStep::Kind::Section || step.vertex.level() != at.level() + 1 || step.before != current)
      return false;
    const int u = step.vertex.digits().back();
    std::vector<Word> next = section_step(group, current, u);
    if (next != step.after)
      return false;
    parent = std::move(current);
    current = std::move(next);
    at = at.child(u);
  }
  if (!(at == cert.vertex) || cert.section_generators != current)
    return false;

  if (cert.kind == WholeGroupCertificate::Kind::Products) {
    const std::vector<Word> targets = preset_generators(group);
    if (cert.products.size() != targets.size())
      return false;
    for (std::size_t t = 0; t < targets.size(); ++t) {
      for (auto [index, exponent] : cert.products[t].factors)
        if (index >= current.size())
          return false;
      if (!group.equal(cert.products[t].evaluate(group, current), targets[t]))
        return false;
    }
    return true;
  }
  if (at.level() == 0 || detail::inside_stab1(group, parent))
    return false;
  return std::find(current.begin(), current.end(), cert.moving_generator) != current.end() &&
         !group.in_first_level_stabilizer(cert.moving_generator);
}

// ---------------------------------------------------------------------------
// Grigorchuk group

struct GrigorchukOptions {
  std::size_t enumeration_cap = 4096;
  std::size_t certificate_cap = 4096;
  int max_depth = 3;
};

/// Semi-decision: a closed enumeration certifies finiteness; explicit
/// products of vertex-section generators equal to a, b, c, d certify that a
/// vertex section is the whole group, hence infiniteness.
inline FinitenessVerdict is_finite_grigorchuk(const Group &group, const SubgroupSpec &h,
                                              GrigorchukOptions options = {}) {
  if (!group.preset().is_grigorchuk())
    throw Error("this semi-decision needs the Grigorchuk group");
  FinitenessVerdict verdict;
  const std::vector<Word> gens = normalize_generators(group, h.generators());
  verdict.trace.push_back({TraceStep::Kind::Normalize, Vertex{}, h.generators(), gens, {}});

  // Vertex sections in breadth-first order, computed once.
  struct Candidate {
    Vertex vertex;
    std::vector<Word> gens;
    std::vector<TraceStep> path;
  };
  std::vector<Candidate> candidates{{Vertex{}, gens, {}}};
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i].vertex.level() >= options.max_depth || candidates[i].gens.empty())
      continue;
    for (int u = 0; u < group.degree(); ++u) {
      Candidate c;
      c.vertex = candidates[i].vertex.child(u);
      c.gens = section_step(group, candidates[i].gens, u);
      c.path = candidates[i].path;
      c.path.push_back({TraceStep::Kind::Section, c.vertex, candidates[i].gens, c.gens, {}});
      candidates.push_back(std::move(c));
    }
  }

  for (std::size_t cap = 64;; cap *= 4) {
    const std::size_t enum_cap = std::min(cap, options.enumeration_cap);
    EnumerationResult e = enumerate_elements(group, SubgroupSpec(group, gens), enum_cap);
    if (!e.exceeds_cap) {
      verdict.kind = FinitenessVerdict::Kind::Finite;
      verdict.order = e.count;
      return verdict;
    }
    const std::size_t cert_cap = std::min(cap, options.certificate_cap);
    for (const Candidate &c : candidates)
      if (auto cert = detail::products_certificate(group, c.gens, c.vertex, cert_cap)) {
        verdict.kind = FinitenessVerdict::Kind::Infinite;
        verdict.witness = std::move(cert);
        verdict.trace.insert(verdict.trace.end(), c.path.begin(), c.path.end());
        verdict.trace.push_back({TraceStep::Kind::Witness, c.vertex, c.gens, {}, "products"});
        return verdict;
      }
    if (enum_cap >= options.enumeration_cap && cert_cap >= options.certificate_cap)
      break;
  }
  verdict.kind = FinitenessVerdict::Kind::Unknown;
  verdict.reason = "enumeration cap " + std::to_string(options.enumeration_cap) + " and certificate cap " +
                   std::to_string(options.certificate_cap) + " exhausted";
  return verdict;
}

// ---------------------------------------------------------------------------
// Classification

enum class Classification { Finite, InfiniteCommensurableWithGOrGxG, Unknown };

inline const char *to_string(Classification c) {
  switch (c) {
  case Classification::Finite: return "FINITE";
  case Classification::InfiniteCommensurableWithGOrGxG: return "INFINITE-COMMENSURABLE-WITH-G-OR-GxG";
  case Classification::Unknown: return "UNKNOWN";
  }
  return "?";
}

struct ClassifyResult {
  Classification label = Classification::Unknown;
  FinitenessVerdict verdict;
};

/// Infinite finitely generated subgroups are commensurable with G or G x G;
/// which one is not computed.
inline ClassifyResult classify(const Group &group, const SubgroupSpec &h, FinitenessOptions options = {}) {
  ClassifyResult r;
  r.verdict = is_finite_gs3(group, h, options);
  switch (r.verdict.kind) {
  case FinitenessVerdict::Kind::Finite: r.label = Classification::Finite; break;
  case FinitenessVerdict::Kind::Infinite: r.label = Classification::InfiniteCommensurableWithGOrGxG; break;
  case FinitenessVerdict::Kind::Unknown: r.label = Classification::Unknown; break;
  }
  return r;
}

} // namespace branchgroup
