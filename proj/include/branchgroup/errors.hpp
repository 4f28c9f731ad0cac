#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace branchgroup {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed word expression; `position` is a 0-based byte offset into the input.
class ParseError : public Error {
public:
  ParseError(std::size_t position, const std::string &message)
      : Error("parse error at position " + std::to_string(position) + ": " + message),
        position_(position), detail_(message) {}

  std::size_t position() const noexcept { return position_; }
  const std::string &detail() const noexcept { return detail_; }

private:
  std::size_t position_;
  std::string detail_;
};

class UnknownSymbol : public Error {
public:
  using Error::Error;
};

class VertexNotStabilized : public Error {
public:
  using Error::Error;
};

/// A level or point count exceeded the configured cap.
class DepthLimit : public Error {
public:
  using Error::Error;
};

class NotOddPrime : public Error {
public:
  using Error::Error;
};

class LevelMismatch : public Error {
public:
  using Error::Error;
};

class NotInStab1 : public Error {
public:
  using Error::Error;
};

class RequiresRootAction : public Error {
public:
  using Error::Error;
};

class PresetError : public Error {
public:
  using Error::Error;
};

/// The word problem solver visited more states than its cap allows (only
/// possible for user presets that are not contracting).
class WordProblemLimit : public Error {
public:
  using Error::Error;
};

/// Raised when the finiteness recursion fails to shorten generators. Section
/// lengths of the Gupta-Sidki 3-group always shrink along the
/// recursion, so seeing this means a bug.
class InternalLengthAssertionFailure : public Error {
public:
  using Error::Error;
};

} // namespace branchgroup
