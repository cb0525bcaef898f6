#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace smoothprime {

// Invalid caller-supplied argument or configuration value. The CLI maps this
// to exit code 2.
class argument_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numerical failure during evaluation (non-finite integrand value, degenerate
// normalization). Carries the offending node location when known. The CLI
// maps this to exit code 3.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
  numerical_error(const std::string& what, double where)
      : std::runtime_error(what + " at node " + std::to_string(where)),
        location_(where) {}

  double location() const noexcept { return location_; }

 private:
  double location_ = std::numeric_limits<double>::quiet_NaN();
};

}  // namespace smoothprime
