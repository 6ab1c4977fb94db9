#pragma once

#include <stdexcept>
#include <string>

namespace eulerline {

// Invalid run configuration: bad key, malformed value, violated constraint.
struct config_error : std::runtime_error {
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// A numerical procedure left its domain of validity: blowup, ambiguous
// winding count, non-convergent root polish, missing hyperbolic directions.
struct numerical_error : std::runtime_error {
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace eulerline
