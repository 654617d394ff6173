#pragma once

#include <stdexcept>

namespace khop {

// Thrown when an enumeration would visit more paths than the configured
// feasibility budget allows.
class BudgetExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace khop
