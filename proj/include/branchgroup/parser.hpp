#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "errors.hpp"
#include "word.hpp"

namespace branchgroup {

// Grammar (whitespace between tokens is ignored):
//
//   word    := term*
//   term    := base postfix*
//   postfix := '^' signed-int        power
//            | '^' '(' word ')'       conjugation g^h = h^-1 g h
//   base    := symbol digits?         x_i = x^(r^i), r the rooted generator
//            | '1'                    identity
//            | '(' word ')'
//            | '[' word ',' word ']'  commutator [g,h] = g^-1 h^-1 g h
//
// The empty string is the identity.
namespace detail {

class WordParser {
public:
  WordParser(std::string_view text, const Alphabet &alphabet) : text_(text), alphabet_(alphabet) {}

  Word parse() {
    Word w = parse_word();
    skip_ws();
    if (pos_ != text_.size())
      fail(std::string("unexpected '") + text_[pos_] + "'");
    return w;
  }

private:
  std::string_view text_;
  const Alphabet &alphabet_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string &message) const { throw ParseError(pos_, message); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c))
      fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  WordBuilder builder() const { return WordBuilder(alphabet_.orders); }

  Word mul(const Word &x, const Word &y) const { return std::move(builder().append(x).append(y)).build(); }
  Word inv(const Word &x) const { return std::move(builder().append_inverse(x)).build(); }

  Word power(const Word &x, long long n) const {
    WordBuilder b = builder();
    if (n < 0) {
      Word xi = inv(x);
      for (long long i = 0; i < -n; ++i)
        b.append(xi);
    } else {
      for (long long i = 0; i < n; ++i)
        b.append(x);
    }
    return std::move(b).build();
  }

  bool at_term_start() {
    skip_ws();
    if (pos_ >= text_.size())
      return false;
    char c = text_[pos_];
    return c == '(' || c == '[' || c == '1' || std::islower(static_cast<unsigned char>(c));
  }

  Word parse_word() {
    WordBuilder b = builder();
    while (at_term_start())
      b.append(parse_term());
    return std::move(b).build();
  }

  Word parse_term() {
    Word base = parse_base();
    while (peek('^')) {
      ++pos_;
      skip_ws();
      if (peek('(')) {
        ++pos_;
        Word h = parse_word();
        expect(')');
        base = mul(mul(inv(h), base), h);
      } else {
        base = power(base, parse_signed_int());
      }
    }
    return base;
  }

  long long parse_signed_int() {
    skip_ws();
    bool negative = false;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
      negative = text_[pos_] == '-';
      ++pos_;
    }
    std::size_t start = pos_;
    long long value = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = value * 10 + (text_[pos_] - '0');
      if (value > 1'000'000)
        fail("exponent too large");
      ++pos_;
    }
    if (pos_ == start)
      fail("expected an integer exponent or '('");
    return negative ? -value : value;
  }

  Word parse_base() {
    skip_ws();
    if (pos_ >= text_.size())
      fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Word w = parse_word();
      expect(')');
      return w;
    }
    if (c == '[') {
      ++pos_;
      Word g = parse_word();
      expect(',');
      Word h = parse_word();
      expect(']');
      return mul(mul(inv(g), inv(h)), mul(g, h));
    }
    if (c == '1') {
      ++pos_;
      return Word{};
    }
    std::size_t start = pos_;
    auto symbol = alphabet_.find(std::string_view(&text_[pos_], 1));
    if (!symbol)
      fail(std::string("unknown symbol '") + c + "'");
    ++pos_;
    Word letter = std::move(builder().push({*symbol, 1})).build();
    // Subscript digits directly after the symbol (no whitespace).
    if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      long long index = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        index = index * 10 + (text_[pos_] - '0');
        if (index > 1'000'000)
          fail("subscript too large");
        ++pos_;
      }
      if (!alphabet_.rooted) {
        pos_ = start;
        fail("subscripts need a rooted generator");
      }
      Word r = std::move(builder().push({*alphabet_.rooted, 1})).build();
      Word ri = power(r, index);
      letter = mul(mul(inv(ri), letter), ri);
    }
    return letter;
  }
};

} // namespace detail

/// Parses a word expression over `alphabet`. Throws ParseError.
inline Word parse_word(std::string_view text, const Alphabet &alphabet) {
  return detail::WordParser(text, alphabet).parse();
}

} // namespace branchgroup
