#pragma once

#include <stdexcept>
#include <string>

namespace nls {

/// Argument outside the mathematical domain of an operation (p < 1, s
/// inadmissible, negative time, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A configured size cap was exceeded (tree generation, support growth,
/// dense grid volume).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical guard tripped: aliasing in the dense oracle, divergence of a
/// fixed-point iteration.
class NumericalGuard : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nls
