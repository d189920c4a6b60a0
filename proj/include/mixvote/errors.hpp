#pragma once

#include <stdexcept>
#include <string>

namespace mixvote {

// Base for every error raised by the library. The CLI maps subclasses to
// exit codes; anything else deriving from std::exception is an internal bug.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: reversed intervals, bad rationals, bad JSON, invalid
// instance or allocation fields.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Argument outside an operation's domain (negative beta, negative x, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Exhaustive search would exceed the configured limit.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Operation does not apply to this kind of instance (e.g. MNW with cake).
class UnsupportedInstance : public Error {
 public:
  using Error::Error;
};

// Allocation larger than alpha or referencing resources outside the instance.
class InvalidAllocation : public Error {
 public:
  using Error::Error;
};

// A generator parameter violates the construction's preconditions. The
// message names the violated inequality.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

}  // namespace mixvote
