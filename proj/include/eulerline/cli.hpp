#pragma once

#include <string>

#include "eulerline/config.hpp"

namespace eulerline {

// Runs one workflow (classify | spectrum | simulate | manifold | poincare),
// writing its outputs under cfg.out_dir and a short summary to stdout.
// Throws config_error for configuration problems and numerical_error for
// failures of the numerics.
void run_command(const std::string& cmd, const RunConfig& cfg);

}  // namespace eulerline
