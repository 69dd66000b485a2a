#pragma once

#include <stdexcept>
#include <string>

namespace corelect {

struct precondition_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct unsupported_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct invariant_error : std::logic_error {
  using std::logic_error::logic_error;
};

struct convergence_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace corelect
