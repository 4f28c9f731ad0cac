#pragma once

#include <cstdint>
#include <cstdlib>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "errors.hpp"
#include "parser.hpp"
#include "permutation.hpp"
#include "preset.hpp"
#include "word.hpp"

namespace branchgroup {

/// Caps that keep computations bounded.
struct Limits {
  /// Largest number of leaves a level action may have.
  std::size_t max_points = 729;
  /// Largest number of states the word-problem solvers may visit per query.
  std::size_t max_states = 1'000'000;
  /// Memo tables are cleared once they grow past this many entries.
  std::size_t cache_capacity = 1'000'000;

  /// Defaults, with max_points overridden by BRANCHGROUP_MAX_POINTS when set.
  static Limits from_environment() {
    Limits limits;
    if (const char *env = std::getenv("BRANCHGROUP_MAX_POINTS")) {
      char *end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 10);
      if (end != env && *end == '\0' && v > 0)
        limits.max_points = static_cast<std::size_t>(v);
    }
    return limits;
  }
};

/// Root permutation of level 1 plus the p sections below it.
struct WreathDecomposition {
  Permutation root;
  std::vector<Word> sections;

  friend bool operator==(const WreathDecomposition &, const WreathDecomposition &) = default;
};

/// Truncated recursive picture of an automorphism. Internal nodes carry the
/// permutation of the state at that vertex; nodes at the cut-off depth carry
/// the state word instead.
struct PortraitNode {
  Vertex vertex;
  bool boundary = false;
  Permutation perm;
  Word word;
  std::vector<PortraitNode> children;
};

struct Portrait {
  int depth = 0;
  PortraitNode root;
};

struct OrderResult {
  enum class Kind { Finite, ExceedsCap, Infinite, Unknown };
  Kind kind = Kind::Unknown;
  std::uint64_t value = 0;

  bool finite() const { return kind == Kind::Finite; }
  friend bool operator==(const OrderResult &, const OrderResult &) = default;
};

/// A self-similar group together with the machinery for computing with its
/// elements. Words act on the tree left to right, and sections obey
/// (gh)|v = g|v * h|(v^g).
///
/// All member functions are const and safe to call concurrently; the memo
/// tables are guarded internally.
class Group {
public:
  explicit Group(GroupPreset preset, Limits limits = Limits::from_environment())
      : preset_(std::move(preset)), limits_(limits), caches_(std::make_unique<Caches>()) {
    validate();
    build_letter_tables();
  }

  const GroupPreset &preset() const noexcept { return preset_; }
  const Alphabet &alphabet() const noexcept { return preset_.alphabet; }
  const Limits &limits() const noexcept { return limits_; }
  int degree() const noexcept { return preset_.degree; }
  std::span<const int> orders() const noexcept { return preset_.alphabet.orders; }

  // -- Words ----------------------------------------------------------------

  Word reduce(std::span<const Letter> raw) const { return branchgroup::reduce(raw, orders()); }
  Word parse(std::string_view text) const { return parse_word(text, alphabet()); }
  std::string format(const Word &w) const { return format_word(w, alphabet()); }

  Word generator(std::string_view name, int exponent = 1) const {
    auto s = alphabet().find(name);
    if (!s)
      throw UnknownSymbol("unknown symbol '" + std::string(name) + "'");
    return letter(*s, exponent);
  }

  Word letter(Symbol s, int exponent = 1) const {
    Letter l{s, exponent};
    return reduce(std::span<const Letter>(&l, 1));
  }

  Word mul(const Word &x, const Word &y) const { return std::move(builder().append(x).append(y)).build(); }
  Word inv(const Word &x) const { return std::move(builder().append_inverse(x)).build(); }

  Word pow(const Word &x, long long n) const {
    WordBuilder b = builder();
    const Word base = n < 0 ? inv(x) : x;
    for (long long i = 0; i < (n < 0 ? -n : n); ++i)
      b.append(base);
    return std::move(b).build();
  }

  /// g^h = h^-1 g h
  Word conj(const Word &g, const Word &h) const {
    return std::move(builder().append_inverse(h).append(g).append(h)).build();
  }

  /// [g,h] = g^-1 h^-1 g h
  Word comm(const Word &g, const Word &h) const {
    return std::move(builder().append_inverse(g).append_inverse(h).append(g).append(h)).build();
  }

  WordBuilder builder() const { return WordBuilder(orders()); }

  /// Number of letters that are not the rooted generator: the count of
  /// conjugates of the directed generators in the word. Upper bound for the
  /// minimal length over all representing words.
  int syllable_length(const Word &w) const {
    int count = 0;
    for (const Letter &l : w)
      if (!alphabet().rooted || l.symbol != *alphabet().rooted)
        ++count;
    return count;
  }

  // -- Wreath recursion -----------------------------------------------------

  Permutation root_action(const Word &g) const {
    Permutation result = Permutation::identity(static_cast<std::size_t>(degree()));
    for (const Letter &l : g)
      result = result.then(letter_table(l).root);
    return result;
  }

  bool in_first_level_stabilizer(const Word &g) const { return root_action(g).is_identity(); }

  WreathDecomposition decompose(const Word &g) const {
    const std::size_t p = static_cast<std::size_t>(degree());
    std::vector<WordBuilder> sections(p, builder());
    std::vector<Point> position(p);
    std::iota(position.begin(), position.end(), Point{0});
    for (const Letter &l : g) {
      const WreathDecomposition &t = letter_table(l);
      for (std::size_t i = 0; i < p; ++i) {
        sections[i].append(t.sections[position[i]]);
        position[i] = t.root[position[i]];
      }
    }
    WreathDecomposition result{Permutation(std::move(position)), {}};
    result.sections.reserve(p);
    for (auto &b : sections)
      result.sections.push_back(std::move(b).build());
    return result;
  }

  /// State of g at v: the automorphism g induces from the subtree at v to the
  /// subtree at v^g. Defined for every vertex.
  Word state(const Word &g, const Vertex &v) const {
    Word w = g;
    for (int d : v.digits())
      w = decompose(w).sections[static_cast<std::size_t>(d)];
    return w;
  }

  /// Vertex section: the restriction of g to the subtree at v. Requires v^g = v.
  Word section(const Word &g, const Vertex &v) const {
    Word w = g;
    for (int d : v.digits()) {
      WreathDecomposition dec = decompose(w);
      if (dec.root[static_cast<Point>(d)] != static_cast<Point>(d))
        throw VertexNotStabilized("element " + format(g) + " does not fix vertex " + v.to_string());
      w = std::move(dec.sections[static_cast<std::size_t>(d)]);
    }
    return w;
  }

  /// True if g fixes v.
  bool fixes(const Word &g, const Vertex &v) const {
    Word w = g;
    for (int d : v.digits()) {
      WreathDecomposition dec = decompose(w);
      if (dec.root[static_cast<Point>(d)] != static_cast<Point>(d))
        return false;
      w = std::move(dec.sections[static_cast<std::size_t>(d)]);
    }
    return true;
  }

  std::size_t leaves_at(int n) const {
    std::size_t count = 1;
    for (int i = 0; i < n; ++i) {
      count *= static_cast<std::size_t>(degree());
      if (count > limits_.max_points)
        throw DepthLimit("level " + std::to_string(n) + " has more than " + std::to_string(limits_.max_points) +
                         " leaves");
    }
    return count;
  }

  /// True when level n stays within the leaf cap.
  bool level_fits(int n) const noexcept {
    std::size_t count = 1;
    for (int i = 0; i < n; ++i) {
      count *= static_cast<std::size_t>(degree());
      if (count > limits_.max_points)
        return false;
    }
    return true;
  }

  /// Action on the p^n vertices of level n. Leaf index = the path read as a
  /// base-p numeral, most significant digit first.
  Permutation level_action(const Word &g, int n) const {
    if (n < 0)
      throw Error("level must be non-negative");
    Permutation result = Permutation::identity(leaves_at(n));
    for (const Letter &l : g)
      result = result.then(letter_level_action(l, n));
    return result;
  }

  bool in_level_stabilizer(const Word &g, int n) const { return level_action(g, n).is_identity(); }

  // -- Word problem ---------------------------------------------------------

  /// Decides g = 1, or returns nullopt when the state cap is hit.
  ///
  /// g is trivial iff every state reachable from g through sections has a
  /// trivial root permutation. A state seen twice is not expanded again: if
  /// every visited state fixes level 1, then by induction on the level all of
  /// them act trivially on every level.
  std::optional<bool> try_is_trivial(const Word &g) const {
    if (g.empty())
      return true;
    if (auto known = cached_triviality(g))
      return known;
    std::unordered_set<Word, WordHash> visited{g};
    std::deque<Word> queue{g};
    while (!queue.empty()) {
      Word w = std::move(queue.front());
      queue.pop_front();
      if (auto known = cached_triviality(w)) {
        if (*known)
          continue;
        remember_triviality(g, false);
        return false;
      }
      WreathDecomposition dec = decompose(w);
      if (!dec.root.is_identity()) {
        remember_triviality(w, false);
        remember_triviality(g, false);
        return false;
      }
      for (Word &s : dec.sections) {
        if (s.empty() || visited.contains(s))
          continue;
        visited.insert(s);
        queue.push_back(std::move(s));
      }
      if (visited.size() > limits_.max_states)
        return std::nullopt;
    }
    for (const Word &w : visited)
      remember_triviality(w, true);
    return true;
  }

  bool is_trivial(const Word &g) const {
    auto r = try_is_trivial(g);
    if (!r)
      throw WordProblemLimit("word problem exceeded " + std::to_string(limits_.max_states) + " states");
    return *r;
  }

  bool equal(const Word &g, const Word &h) const {
    if (g == h)
      return true;
    return is_trivial(mul(g, inv(h)));
  }

  /// True iff g's root permutation and sections match `d` as automorphisms.
  bool matches(const Word &g, const WreathDecomposition &d) const {
    WreathDecomposition dec = decompose(g);
    if (dec.root != d.root || dec.sections.size() != d.sections.size())
      return false;
    for (std::size_t i = 0; i < dec.sections.size(); ++i)
      if (!equal(dec.sections[i], d.sections[i]))
        return false;
    return true;
  }

  // -- Orders ---------------------------------------------------------------

  /// Least n >= 1 with g^n = 1.
  ///
  /// If g moves level 1 with root permutation of order m then
  /// ord(g) = m * ord(g^m); otherwise ord(g) is the lcm of the section orders.
  /// The resulting state graph is solved one strongly connected component at
  /// a time: a cycle through a state with m > 1 proves infinite order, and a
  /// cycle without one adds nothing to the lcm.
  OrderResult order(const Word &g, std::uint64_t cap) const {
    OrderSolver solver(*this, cap);
    return solver.run(g);
  }

  // -- Portraits ------------------------------------------------------------

  Portrait portrait(const Word &g, int depth) const {
    if (depth < 0)
      throw Error("portrait depth must be non-negative");
    leaves_at(depth);
    Portrait result;
    result.depth = depth;
    result.root = portrait_node(g, Vertex{}, depth);
    return result;
  }

  std::string render(const Portrait &portrait) const {
    std::string out;
    render_node(portrait.root, 0, out);
    return out;
  }

  WreathDecomposition letter_decomposition(const Letter &l) const { return letter_table(l); }

private:
  struct Caches {
    std::mutex mutex;
    std::unordered_map<Word, bool, WordHash> triviality;
    std::unordered_map<Word, std::uint64_t, WordHash> orders;
    std::map<std::tuple<Symbol, int, int>, Permutation> letter_levels;
  };

  GroupPreset preset_;
  Limits limits_;
  /// tables_[symbol][exponent] for exponent in [0, order).
  std::vector<std::vector<WreathDecomposition>> tables_;
  std::unique_ptr<Caches> caches_;

  void validate() const {
    const auto &a = preset_.alphabet;
    if (preset_.degree < 2)
      throw PresetError("degree must be at least 2");
    if (a.names.size() != a.orders.size() || a.names.size() != preset_.recursion.size())
      throw PresetError("alphabet and recursion table sizes differ");
    for (const auto &rec : preset_.recursion) {
      if (rec.root.degree() != static_cast<std::size_t>(preset_.degree))
        throw PresetError("root permutation has the wrong degree");
      if (rec.sections.size() != static_cast<std::size_t>(preset_.degree))
        throw PresetError("every generator needs p sections");
      for (const Word &w : rec.sections)
        for (const Letter &l : w)
          if (l.symbol >= a.size())
            throw PresetError("section word uses a symbol outside the alphabet");
    }
  }

  WreathDecomposition compose(const WreathDecomposition &x, const WreathDecomposition &y) const {
    WreathDecomposition r{x.root.then(y.root), {}};
    for (std::size_t i = 0; i < x.sections.size(); ++i)
      r.sections.push_back(mul(x.sections[i], y.sections[x.root[static_cast<Point>(i)]]));
    return r;
  }

  void build_letter_tables() {
    const std::size_t p = static_cast<std::size_t>(degree());
    for (std::size_t s = 0; s < alphabet().size(); ++s) {
      std::vector<WreathDecomposition> powers;
      WreathDecomposition identity{Permutation::identity(p), std::vector<Word>(p)};
      powers.push_back(identity);
      const WreathDecomposition gen{preset_.recursion[s].root, preset_.recursion[s].sections};
      for (int e = 1; e < alphabet().orders[s]; ++e)
        powers.push_back(compose(powers.back(), gen));
      tables_.push_back(std::move(powers));
    }
  }

  const WreathDecomposition &letter_table(const Letter &l) const {
    return tables_.at(l.symbol).at(static_cast<std::size_t>(l.exponent));
  }

  Permutation letter_level_action(const Letter &l, int n) const {
    const auto key = std::make_tuple(l.symbol, l.exponent, n);
    {
      std::lock_guard lock(caches_->mutex);
      auto it = caches_->letter_levels.find(key);
      if (it != caches_->letter_levels.end())
        return it->second;
    }
    const std::size_t block = n == 0 ? 0 : leaves_at(n - 1);
    Permutation result = Permutation::identity(leaves_at(n));
    if (n > 0) {
      const WreathDecomposition &t = letter_table(l);
      std::vector<Point> images(leaves_at(n));
      for (std::size_t d = 0; d < static_cast<std::size_t>(degree()); ++d) {
        Permutation below = level_action(t.sections[d], n - 1);
        const std::size_t target = t.root[static_cast<Point>(d)];
        for (std::size_t r = 0; r < block; ++r)
          images[d * block + r] = static_cast<Point>(target * block + below[static_cast<Point>(r)]);
      }
      result = Permutation(std::move(images));
    }
    std::lock_guard lock(caches_->mutex);
    caches_->letter_levels.emplace(key, result);
    return result;
  }

  std::optional<bool> cached_triviality(const Word &w) const {
    std::lock_guard lock(caches_->mutex);
    auto it = caches_->triviality.find(w);
    if (it == caches_->triviality.end())
      return std::nullopt;
    return it->second;
  }

  void remember_triviality(const Word &w, bool trivial) const {
    std::lock_guard lock(caches_->mutex);
    if (caches_->triviality.size() >= limits_.cache_capacity)
      caches_->triviality.clear();
    caches_->triviality[w] = trivial;
  }

  std::optional<std::uint64_t> cached_order(const Word &w) const {
    std::lock_guard lock(caches_->mutex);
    auto it = caches_->orders.find(w);
    if (it == caches_->orders.end())
      return std::nullopt;
    return it->second;
  }

  void remember_order(const Word &w, std::uint64_t value) const {
    std::lock_guard lock(caches_->mutex);
    if (caches_->orders.size() >= limits_.cache_capacity)
      caches_->orders.clear();
    caches_->orders[w] = value;
  }

  /// Tarjan's algorithm over the state graph of the order recursion.
  class OrderSolver {
  public:
    OrderSolver(const Group &group, std::uint64_t cap) : group_(group), cap_(cap) {}

    OrderResult run(const Word &g) {
      if (g.empty())
        return {OrderResult::Kind::Finite, 1};
      try {
        std::uint64_t v = value_of(g);
        if (v > cap_)
          return {OrderResult::Kind::ExceedsCap, 0};
        return {OrderResult::Kind::Finite, v};
      } catch (const Abort &abort) {
        return {abort.kind, 0};
      }
    }

  private:
    struct Abort {
      OrderResult::Kind kind;
    };

    struct Node {
      std::size_t index = 0;
      std::size_t lowlink = 0;
      bool on_stack = false;
      bool done = false;
      std::uint64_t multiplier = 1;
      std::uint64_t value = 1;
      std::vector<Word> successors;
    };

    const Group &group_;
    std::uint64_t cap_;
    std::unordered_map<Word, Node, WordHash> nodes_;
    std::vector<Word> stack_;
    std::size_t counter_ = 0;

    std::uint64_t lcm_capped(std::uint64_t x, std::uint64_t y) const {
      unsigned __int128 l = static_cast<unsigned __int128>(x / std::gcd(x, y)) * y;
      if (l > cap_)
        throw Abort{OrderResult::Kind::ExceedsCap};
      return static_cast<std::uint64_t>(l);
    }

    std::uint64_t value_of(const Word &w) {
      if (w.empty())
        return 1;
      if (auto known = group_.cached_order(w))
        return *known;
      auto it = nodes_.find(w);
      if (it == nodes_.end()) {
        visit(w);
        it = nodes_.find(w);
      }
      return it->second.value;
    }

    void visit(const Word &w) {
      if (nodes_.size() >= group_.limits_.max_states)
        throw Abort{OrderResult::Kind::Unknown};
      Node &fresh = nodes_[w];
      fresh.index = fresh.lowlink = counter_++;
      fresh.on_stack = true;
      stack_.push_back(w);

      WreathDecomposition dec = group_.decompose(w);
      std::vector<Word> successors;
      std::uint64_t m = dec.root.order();
      if (m > 1) {
        successors.push_back(group_.pow(w, static_cast<long long>(m)));
      } else {
        for (Word &s : dec.sections)
          if (!s.empty())
            successors.push_back(std::move(s));
      }
      nodes_[w].multiplier = m;

      for (const Word &s : successors) {
        if (s.empty() || group_.cached_order(s))
          continue;
        auto it = nodes_.find(s);
        if (it == nodes_.end()) {
          visit(s);
          Node &child = nodes_[s];
          Node &self = nodes_[w];
          self.lowlink = std::min(self.lowlink, child.lowlink);
        } else if (it->second.on_stack) {
          Node &self = nodes_[w];
          self.lowlink = std::min(self.lowlink, it->second.index);
        }
      }
      nodes_[w].successors = std::move(successors);

      Node &self = nodes_[w];
      if (self.lowlink != self.index)
        return;

      std::vector<Word> component;
      for (;;) {
        Word top = std::move(stack_.back());
        stack_.pop_back();
        nodes_[top].on_stack = false;
        bool last = top == w;
        component.push_back(std::move(top));
        if (last)
          break;
      }
      std::unordered_set<Word, WordHash> members(component.begin(), component.end());
      bool cyclic = component.size() > 1;
      if (!cyclic)
        for (const Word &s : nodes_[w].successors)
          cyclic = cyclic || s == w;
      std::uint64_t value = 1;
      for (const Word &x : component) {
        const Node &node = nodes_[x];
        if (cyclic && node.multiplier > 1)
          throw Abort{OrderResult::Kind::Infinite};
        for (const Word &s : node.successors)
          if (!members.contains(s))
            value = lcm_capped(value, value_of(s));
      }
      if (!cyclic) {
        unsigned __int128 scaled = static_cast<unsigned __int128>(value) * nodes_[w].multiplier;
        if (scaled > cap_)
          throw Abort{OrderResult::Kind::ExceedsCap};
        value = static_cast<std::uint64_t>(scaled);
      }
      for (const Word &x : component) {
        Node &node = nodes_[x];
        node.value = value;
        node.done = true;
        group_.remember_order(x, value);
      }
    }
  };

  PortraitNode portrait_node(const Word &g, const Vertex &v, int remaining) const {
    PortraitNode node;
    node.vertex = v;
    if (remaining == 0) {
      node.boundary = true;
      node.word = g;
      return node;
    }
    WreathDecomposition dec = decompose(g);
    node.perm = dec.root;
    for (std::size_t i = 0; i < dec.sections.size(); ++i)
      node.children.push_back(portrait_node(dec.sections[i], v.child(static_cast<int>(i)), remaining - 1));
    return node;
  }

  void render_node(const PortraitNode &node, int indent, std::string &out) const {
    out.append(static_cast<std::size_t>(indent) * 2, ' ');
    out += node.vertex.to_string();
    out += ": ";
    out += node.boundary ? format(node.word) : node.perm.to_cycle_string();
    out += '\n';
    for (const auto &child : node.children)
      render_node(child, indent + 1, out);
  }
};

/// The preset's generators as words: the targets a whole-group certificate
/// must reach.
inline std::vector<Word> preset_generators(const Group &group) {
  std::vector<Word> out;
  for (std::size_t s = 0; s < group.alphabet().size(); ++s)
    out.push_back(group.letter(static_cast<Symbol>(s)));
  return out;
}

} // namespace branchgroup
