#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace branchgroup {

/// Index of a generator in a preset's alphabet.
using Symbol = std::uint8_t;

/// A generator raised to a power. In a reduced word the exponent lies in
/// [1, order - 1] of the symbol.
struct Letter {
  Symbol symbol = 0;
  int exponent = 1;

  friend bool operator==(const Letter &, const Letter &) = default;
  friend auto operator<=>(const Letter &, const Letter &) = default;
};

/// Generator names and their orders. Symbol names are single lowercase letters.
struct Alphabet {
  std::vector<std::string> names;
  std::vector<int> orders;
  /// The rooted generator used for subscripted conjugates (b1 = b^(a^1)).
  std::optional<Symbol> rooted;

  std::size_t size() const noexcept { return names.size(); }

  std::optional<Symbol> find(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name)
        return static_cast<Symbol>(i);
    return std::nullopt;
  }

  int order(Symbol s) const { return orders.at(s); }
};

inline int mod_floor(long long value, int modulus) {
  long long r = value % modulus;
  return static_cast<int>(r < 0 ? r + modulus : r);
}

/// Freely reduced word over an alphabet of cyclic generators: adjacent letters
/// carry distinct symbols and exponents are folded modulo the symbol order.
/// The empty word is the identity.
class Word {
public:
  Word() = default;

  std::span<const Letter> letters() const noexcept { return letters_; }
  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  const Letter &operator[](std::size_t i) const { return letters_[i]; }

  auto begin() const noexcept { return letters_.begin(); }
  auto end() const noexcept { return letters_.end(); }

  friend bool operator==(const Word &, const Word &) = default;
  friend auto operator<=>(const Word &, const Word &) = default;

private:
  friend class WordBuilder;
  std::vector<Letter> letters_;
};

/// Streaming free reduction. Appending a letter folds it into the tail.
class WordBuilder {
public:
  explicit WordBuilder(std::span<const int> orders) : orders_(orders) {}

  WordBuilder &push(Letter letter) {
    if (letter.symbol >= orders_.size())
      throw UnknownSymbol("symbol index " + std::to_string(letter.symbol) + " is not in the alphabet");
    int order = orders_[letter.symbol];
    int e = mod_floor(letter.exponent, order);
    if (e == 0)
      return *this;
    auto &out = word_.letters_;
    if (!out.empty() && out.back().symbol == letter.symbol) {
      int folded = mod_floor(static_cast<long long>(out.back().exponent) + e, order);
      if (folded == 0)
        out.pop_back();
      else
        out.back().exponent = folded;
    } else {
      out.push_back({letter.symbol, e});
    }
    return *this;
  }

  WordBuilder &append(const Word &w) {
    for (const Letter &l : w)
      push(l);
    return *this;
  }

  WordBuilder &append_inverse(const Word &w) {
    for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it)
      push({it->symbol, -it->exponent});
    return *this;
  }

  Word build() && { return std::move(word_); }
  const Word &peek() const noexcept { return word_; }

private:
  std::span<const int> orders_;
  Word word_;
};

inline Word reduce(std::span<const Letter> raw, std::span<const int> orders) {
  WordBuilder builder(orders);
  for (const Letter &l : raw)
    builder.push(l);
  return std::move(builder).build();
}

inline Word reduce(std::span<const Letter> raw, const Alphabet &alphabet) {
  return reduce(raw, std::span<const int>(alphabet.orders));
}

/// Prints a reduced word in the parser's grammar: letters separated by a
/// space, exponents written as the signed residue of least magnitude.
inline std::string format_word(const Word &w, const Alphabet &alphabet) {
  if (w.empty())
    return "1";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Letter &l = w[i];
    if (i)
      out += ' ';
    out += alphabet.names.at(l.symbol);
    int order = alphabet.order(l.symbol);
    int e = l.exponent;
    if (2 * e > order)
      e -= order;
    if (e != 1)
      out += "^" + std::to_string(e);
  }
  return out;
}

/// A vertex of the regular rooted tree: a string over {0, ..., p-1}; the empty
/// path is the root.
class Vertex {
public:
  Vertex() = default;
  explicit Vertex(std::vector<int> digits) : digits_(std::move(digits)) {}

  /// Parses digits such as "021". The empty string (or "e") is the root.
  static Vertex parse(std::string_view text, int degree) {
    std::vector<int> digits;
    if (text == "e" || text == "root")
      return Vertex{};
    for (char c : text) {
      if (c < '0' || c > '9' || c - '0' >= degree)
        throw Error("vertex digit out of range: " + std::string(text));
      digits.push_back(c - '0');
    }
    return Vertex(std::move(digits));
  }

  std::size_t level() const noexcept { return digits_.size(); }
  std::span<const int> digits() const noexcept { return digits_; }
  int operator[](std::size_t i) const { return digits_[i]; }

  Vertex child(int digit) const {
    Vertex v = *this;
    v.digits_.push_back(digit);
    return v;
  }

  Vertex concat(const Vertex &tail) const {
    Vertex v = *this;
    v.digits_.insert(v.digits_.end(), tail.digits_.begin(), tail.digits_.end());
    return v;
  }

  std::string to_string() const {
    if (digits_.empty())
      return "e";
    std::string out;
    for (int d : digits_)
      out += static_cast<char>('0' + d);
    return out;
  }

  friend bool operator==(const Vertex &, const Vertex &) = default;
  friend auto operator<=>(const Vertex &, const Vertex &) = default;

private:
  std::vector<int> digits_;
};

struct WordHash {
  std::size_t operator()(const Word &w) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (const Letter &l : w) {
      h ^= (static_cast<std::uint64_t>(l.symbol) << 16) ^ static_cast<std::uint64_t>(l.exponent);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

} // namespace branchgroup
