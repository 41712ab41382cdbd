#pragma once

#include <stdexcept>
#include <string>

namespace cogrip {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PlacementConflict : public Error {
 public:
  using Error::Error;
};

// A piece center fell into the middle ninth of the board.
class CenterRegionError : public Error {
 public:
  using Error::Error;
};

class EmptyPropertiesError : public Error {
 public:
  using Error::Error;
};

class InvalidTask : public Error {
 public:
  using Error::Error;
};

class EpisodeDone : public Error {
 public:
  using Error::Error;
};

class GenerationFailure : public Error {
 public:
  using Error::Error;
};

class UnreachableTarget : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace cogrip
