#pragma once

#include <stdexcept>
#include <string>

namespace schreier {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Construction / validation
class NonBijectionError : public Error {
 public:
  NonBijectionError(const std::string& letter, int duplicated_image)
      : Error("letter '" + letter + "' is not a bijection, image " +
              std::to_string(duplicated_image) + " hit twice"),
        letter(letter),
        duplicated_image(duplicated_image) {}
  std::string letter;
  int duplicated_image;
};

class LengthMismatchError : public Error {
 public:
  using Error::Error;
};

class ShapeMismatchError : public Error {
 public:
  using Error::Error;
};

class AlphabetMismatchError : public Error {
 public:
  using Error::Error;
};

class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

// Graph-structure preconditions
class NotRegularError : public Error {
 public:
  using Error::Error;
};

class MatchingFailureError : public Error {
 public:
  using Error::Error;
};

class NotTransitiveError : public Error {
 public:
  using Error::Error;
};

class DisconnectedError : public Error {
 public:
  using Error::Error;
};

class WordNotInSubgroupError : public Error {
 public:
  using Error::Error;
};

// Guards
class SizeGuardError : public Error {
 public:
  using Error::Error;
};

class DomainNotInvariantError : public Error {
 public:
  using Error::Error;
};

// Covers
class NotSurjectiveError : public Error {
 public:
  using Error::Error;
};

class MatchFailureError : public Error {
 public:
  using Error::Error;
};

class BaseMismatchError : public Error {
 public:
  using Error::Error;
};

class FiberMismatchError : public Error {
 public:
  using Error::Error;
};

class GirthTooSmallError : public Error {
 public:
  using Error::Error;
};

class RetriesExhaustedError : public Error {
 public:
  using Error::Error;
};

class CapExceededError : public Error {
 public:
  using Error::Error;
};

// Constructions
class TooSmallError : public Error {
 public:
  using Error::Error;
};

class NotPrimeError : public Error {
 public:
  using Error::Error;
};

// File formats
class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace schreier
