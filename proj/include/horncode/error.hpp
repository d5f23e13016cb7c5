#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace horncode {

enum class ErrorKind {
  OutOfRangeExponent,
  NoRationalNearby,
  InvalidCode,
  EmptyIncidence,
  InvalidProfile,
  EmptyChain,
  EmptyCycle,
  ParseError,
  UnboundedCheckFailed,
  EmptyAnnulus,
  GridTooSmall,
  BadParams,
  Disconnected,
  LevelSetEmpty,
  NonManifold,
  TooFewFarSamples,
  PunctureTooClose,
  Io,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Parse failures carry a 1-based column into the input text.
class ParseError : public Error {
 public:
  ParseError(std::size_t column, const std::string& what)
      : Error(ErrorKind::ParseError, "column " + std::to_string(column) + ": " + what),
        column_(column) {}

  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

}  // namespace horncode
