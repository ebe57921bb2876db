#pragma once

#include <stdexcept>
#include <string>

namespace gls {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Root finder could not establish a sign change.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// det(A) == 0 (relative to the matrix scale). Dilations need a
// non-degenerate matrix; the projection counterexample shows why.
class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Combination the numerical backends cannot handle (e.g. non-factorable
// mixed norm with many blocks in high dimension).
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad experiment configuration or CLI specification.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gls
