#pragma once

#include <filesystem>
#include <string>

#include "eulerline/dynamics.hpp"

namespace eulerline {

// %.17g: enough digits to round-trip a double exactly.
std::string format_g17(double x);

// Writes to a temp file in the target directory, then renames, so readers
// never observe partial content.
void atomic_write(const std::filesystem::path& path, const std::string& content);

// Header t,omega_p,omega_<n_min>,...,omega_<n_max>,E,Z,Hs; one row per
// sample, 17 significant digits.
std::string trajectory_csv(const Trajectory& traj, const ModelParams& params, int sobolev_s);

}  // namespace eulerline
