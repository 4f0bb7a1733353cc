#pragma once

#include <stdexcept>
#include <string>

namespace gpsl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
  using Error::Error;
};

/// An iterative engine (quadrature, root finder) ran out of budget.
class NonConvergence : public Error {
public:
  using Error::Error;
};

/// Root finder was handed an interval without a sign change.
class NotBracketed : public Error {
public:
  using Error::Error;
};

/// Functional diverges or a profile vanishes where it must not.
class SingularProfile : public Error {
public:
  using Error::Error;
};

class CoincidentPoints : public Error {
public:
  using Error::Error;
};

class MalformedOverlay : public Error {
public:
  using Error::Error;
};

/// Malformed text input: profile spec strings, CSV tables, JSON documents.
class ParseError : public Error {
public:
  using Error::Error;
};

} // namespace gpsl
