#pragma once

#include <stdexcept>
#include <string>

namespace fm {

/// Input outside an operation's domain: unknown generator, basis mismatch,
/// a morphism that is not an automorphism, a set that does not generate.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A search or enumeration hit its configured budget. Never paired with a
/// partial answer.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input (word grammar, files, flags).
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace fm
