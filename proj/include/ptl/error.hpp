#pragma once

#include <stdexcept>
#include <string>

namespace ptl {

/// Malformed or out-of-range environment/policy description.
class spec_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The requested operation cannot be carried out on this input
/// (e.g. enumerating a stochastic environment, or exceeding the cap).
class infeasible_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ptl
