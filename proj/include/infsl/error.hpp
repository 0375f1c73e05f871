#pragma once

#include <stdexcept>
#include <string>

namespace infsl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied argument violates a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or text.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// The boundary-value problem is not well posed on the given graph
/// (unlabeled component, isolated node, disconnected Poisson system).
class IllPosedProblem : public Error {
 public:
  using Error::Error;
};

}  // namespace infsl
