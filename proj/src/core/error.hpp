#pragma once

#include <stdexcept>
#include <string>

namespace bellsim {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad argument values: non-unit inputs, empty grids, zero trial counts, ...
struct DomainError : Error {
  using Error::Error;
};

// Settings were requested before the ensemble was recorded.
struct PhaseOrderError : Error {
  using Error::Error;
};

}  // namespace bellsim
