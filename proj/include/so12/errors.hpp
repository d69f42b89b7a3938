#pragma once
#include <stdexcept>
#include <string>

namespace so12 {

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct OverflowError : std::overflow_error {
  using std::overflow_error::overflow_error;
};

// requested tail tolerance not reached at the maximal cutoff
struct CutoffExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// adaptive quadrature did not reach its error target
struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace so12
