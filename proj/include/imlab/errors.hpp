#pragma once

#include <stdexcept>
#include <string>

namespace imlab {

// Requested problem exceeds an enumeration or grid guard.
class SizeLimitError : public std::length_error {
public:
  using std::length_error::length_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// Posterior weights could not be formed at a quadrature point.
class QuadratureUnderflow : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed input file; the message starts with the offending field name.
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

} // namespace imlab
