#include "eulerline/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace eulerline {

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

std::string trajectory_csv(const Trajectory& traj, const ModelParams& params, int sobolev_s) {
  std::string out = "t,omega_p";
  for (int n = params.state_n_min(); n <= params.state_n_max(); ++n)
    out += ",omega_" + std::to_string(n);
  out += ",E,Z,Hs\n";
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const LineState& s = traj.states[k];
    out += format_g17(traj.times[k]);
    for (double x : s.flat) out += "," + format_g17(x);
    const auto [e, z] = invariants(s, params);
    out += "," + format_g17(e) + "," + format_g17(z) + "," +
           format_g17(sobolev_norm(s, params, sobolev_s)) + "\n";
  }
  return out;
}

}  // namespace eulerline
