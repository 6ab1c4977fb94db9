#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace eulerline {

// Fully validated run configuration. Defaults reproduce the reference class
// khat=(-3,-2), p=(1,1) at gamma=2. INI sections: [model], [spectral],
// [integration], [forcing], [manifold], [output]; unknown sections or keys
// are rejected.
struct RunConfig {
  // [model]
  std::array<int, 2> khat{-3, -2};
  std::array<int, 2> p{1, 1};
  double gamma = 2.0;
  int n_min = -28;  // dynamics window, centered on the small-rho modes
  int n_max = 33;

  // [spectral]
  int N = 100;
  long long M = 200;
  std::optional<double> re_threshold;  // nullopt = auto (0.05 * gamma)
  std::array<double, 4> box{-1.0, 1.0, -1.0, 1.0};
  std::string method = "both";  // cf | matrix | both

  // [integration]
  double dt = 1e-3;
  double T = 100.0;
  long long stride = 100;
  int sobolev_s = 1;
  std::string ic = "seeded";  // seeded | inline | file
  std::vector<double> ic_values;
  std::string ic_file;
  double ic_amplitude = 0.0;  // seeded: uniform chain perturbation scale
  unsigned long long seed = 12345;

  // [forcing]
  double epsilon = 0.0;
  double nu = 1.0;
  double a_p = 0.0, b_p = 0.0;
  std::vector<double> a_n, b_n;  // empty, single (broadcast) or range-length

  // [manifold]
  std::optional<double> delta;  // nullopt = auto (1e-6 * gamma)
  int samples = 8;
  std::string direction = "unstable";
  double manifold_T = 60.0;  // key: [manifold] T

  // [output]
  std::string out_dir = "out";

  bool operator==(const RunConfig&) const = default;

  double effective_re_threshold() const { return re_threshold ? *re_threshold : 0.05 * gamma; }
  double effective_delta() const { return delta ? *delta : 1e-6 * gamma; }
};

// Parses INI-style text ('#'/';' comments, 'key = value' lines, "auto" for
// the optional thresholds). Parse errors carry the line number; validation
// errors name the field. Later duplicates win.
RunConfig parse_config(const std::string& text);

// Same, with "section.key=value" overrides applied after the file.
RunConfig parse_config(const std::string& text,
                       const std::vector<std::pair<std::string, std::string>>& overrides);

// Inverse of parse_config: every field rendered explicitly; re-parsing yields
// a field-for-field equal RunConfig.
std::string render_config(const RunConfig& cfg);

}  // namespace eulerline
