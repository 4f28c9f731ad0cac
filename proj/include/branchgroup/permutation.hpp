#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace branchgroup {

using Point = std::uint32_t;

/// A permutation of {0, ..., degree-1} stored as an image table.
///
/// Products read left to right: (x * y)[i] == y[x[i]], i.e. apply x first.
/// This matches the convention for words acting on the tree.
class Permutation {
public:
  Permutation() = default;

  explicit Permutation(std::size_t degree) : images_(degree) {
    std::iota(images_.begin(), images_.end(), Point{0});
  }

  explicit Permutation(std::vector<Point> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size(), false);
    for (Point x : images_) {
      if (x >= images_.size() || seen[x])
        throw Error("image table is not a permutation");
      seen[x] = true;
    }
  }

  static Permutation identity(std::size_t degree) { return Permutation(degree); }

  /// Parses cycle notation such as "(0 1 2)(3 4)"; "()" and "id" give the identity.
  static Permutation from_cycles(std::string_view text, std::size_t degree) {
    Permutation result(degree);
    std::string_view rest = text;
    auto skip_ws = [&] {
      while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.front())))
        rest.remove_prefix(1);
    };
    skip_ws();
    if (rest == "id")
      return result;
    while (!rest.empty()) {
      if (rest.front() != '(')
        throw Error("bad cycle notation: " + std::string(text));
      rest.remove_prefix(1);
      std::vector<Point> cycle;
      for (;;) {
        skip_ws();
        if (rest.empty())
          throw Error("unterminated cycle: " + std::string(text));
        if (rest.front() == ')') {
          rest.remove_prefix(1);
          break;
        }
        if (rest.front() == ',') {
          rest.remove_prefix(1);
          continue;
        }
        std::size_t n = 0;
        Point value = 0;
        while (n < rest.size() && std::isdigit(static_cast<unsigned char>(rest[n])))
          value = value * 10 + static_cast<Point>(rest[n++] - '0');
        if (n == 0)
          throw Error("bad cycle notation: " + std::string(text));
        if (value >= degree)
          throw Error("point out of range in cycle: " + std::string(text));
        cycle.push_back(value);
        rest.remove_prefix(n);
      }
      for (std::size_t i = 0; i < cycle.size(); ++i)
        result.images_[cycle[i]] = cycle[(i + 1) % cycle.size()];
      skip_ws();
    }
    return Permutation(std::move(result.images_));
  }

  std::size_t degree() const noexcept { return images_.size(); }
  Point operator[](Point x) const { return images_[x]; }
  std::span<const Point> images() const noexcept { return images_; }

  bool is_identity() const {
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (images_[i] != i)
        return false;
    return true;
  }

  Permutation inverse() const {
    Permutation result;
    result.images_.resize(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i)
      result.images_[images_[i]] = static_cast<Point>(i);
    return result;
  }

  /// Apply *this, then `next`.
  Permutation then(const Permutation &next) const {
    Permutation result;
    result.images_.resize(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i)
      result.images_[i] = next.images_[images_[i]];
    return result;
  }

  friend Permutation operator*(const Permutation &x, const Permutation &y) { return x.then(y); }

  Permutation pow(long long n) const {
    Permutation base = n < 0 ? inverse() : *this;
    unsigned long long e = n < 0 ? static_cast<unsigned long long>(-n) : static_cast<unsigned long long>(n);
    Permutation result(images_.size());
    while (e) {
      if (e & 1)
        result = result.then(base);
      base = base.then(base);
      e >>= 1;
    }
    return result;
  }

  /// Least n >= 1 with x^n = id.
  std::uint64_t order() const {
    std::vector<bool> seen(images_.size(), false);
    std::uint64_t result = 1;
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (seen[i])
        continue;
      std::uint64_t length = 0;
      for (Point x = static_cast<Point>(i); !seen[x]; x = images_[x]) {
        seen[x] = true;
        ++length;
      }
      result = std::lcm(result, length);
    }
    return result;
  }

  /// First point moved, or degree() for the identity.
  std::size_t first_moved() const {
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (images_[i] != i)
        return i;
    return images_.size();
  }

  /// Disjoint cycles, smallest point first, fixed points omitted.
  std::vector<std::vector<Point>> cycles() const {
    std::vector<std::vector<Point>> result;
    std::vector<bool> seen(images_.size(), false);
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (seen[i] || images_[i] == i)
        continue;
      std::vector<Point> cycle;
      for (Point x = static_cast<Point>(i); !seen[x]; x = images_[x]) {
        seen[x] = true;
        cycle.push_back(x);
      }
      result.push_back(std::move(cycle));
    }
    return result;
  }

  std::string to_cycle_string() const {
    auto cs = cycles();
    if (cs.empty())
      return "id";
    std::string out;
    for (const auto &cycle : cs) {
      out += '(';
      for (std::size_t i = 0; i < cycle.size(); ++i) {
        if (i)
          out += ' ';
        out += std::to_string(cycle[i]);
      }
      out += ')';
    }
    return out;
  }

  friend bool operator==(const Permutation &, const Permutation &) = default;
  friend auto operator<=>(const Permutation &, const Permutation &) = default;

private:
  std::vector<Point> images_;
};

struct PermutationHash {
  std::size_t operator()(const Permutation &p) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (Point x : p.images()) {
      h ^= x;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

} // namespace branchgroup
