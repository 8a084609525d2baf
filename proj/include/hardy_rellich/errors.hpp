#pragma once

#include <stdexcept>
#include <string>

namespace hr {

// Parameter outside the range where a formula or inequality is valid.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// A series or improper integral that does not converge.
class DivergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A derivative order was requested that the profile cannot supply.
class DifferentiabilityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed profile files, schedules or configuration.
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace hr
