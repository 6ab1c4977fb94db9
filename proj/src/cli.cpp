#include "eulerline/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include <json.hpp>

#include "eulerline/dynamics.hpp"
#include "eulerline/errors.hpp"
#include "eulerline/io.hpp"
#include "eulerline/lattice.hpp"
#include "eulerline/manifold.hpp"
#include "eulerline/spectral.hpp"

namespace eulerline {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Modes {
  Mode khat;
  Mode p;
};

Modes modes_of(const RunConfig& cfg) {
  const Mode khat(cfg.khat[0], cfg.khat[1]);
  const Mode p(cfg.p[0], cfg.p[1]);
  if (zero_mode_index(khat, p))
    throw config_error("khat must not be an integer multiple of p (class passes through the origin)");
  return {khat, p};
}

std::string mode_str(const Mode& m) {
  return "(" + std::to_string(m.k1) + "," + std::to_string(m.k2) + ")";
}

json report_json(const SpectrumReport& rep) {
  json evs = json::array();
  for (const EigEntry& e : rep.point_eigenvalues)
    evs.push_back({{"re", e.lambda.real()}, {"im", e.lambda.imag()}, {"type", to_string(e.type)}});
  return {{"b", rep.b},
          {"segment_halfwidth", rep.segment_halfwidth},
          {"eigenvalues", evs},
          {"method", rep.method},
          {"N_or_M", rep.n_or_m}};
}

void write_json(const fs::path& path, const json& j) {
  atomic_write(path, j.dump(2) + "\n");
  std::cout << "wrote " << path.string() << "\n";
}

// Initial condition per [integration]: the fixed point with an optional
// seeded uniform perturbation of the chain modes, an inline vector, or a
// whitespace-separated file (omega_p first, '#' comments allowed).
LineState initial_condition(const RunConfig& cfg, const ModelParams& params) {
  if (cfg.ic == "inline") {
    LineState s(params.state_n_min(), params.state_n_max());
    s.flat = cfg.ic_values;  // length validated by parse_config
    return s;
  }
  if (cfg.ic == "file") {
    std::ifstream in(cfg.ic_file);
    if (!in) throw config_error("cannot read ic_file '" + cfg.ic_file + "'");
    std::vector<double> vals;
    std::string tok;
    while (in >> tok) {
      if (tok.front() == '#') {
        std::string rest;
        std::getline(in, rest);
        continue;
      }
      try {
        std::size_t pos = 0;
        vals.push_back(std::stod(tok, &pos));
        if (pos != tok.size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw config_error("invalid number '" + tok + "' in ic_file");
      }
    }
    LineState s(params.state_n_min(), params.state_n_max());
    if (vals.size() != s.dim())
      throw config_error("ic_file must hold " + std::to_string(s.dim()) +
                         " numbers (omega_p first)");
    s.flat = vals;
    return s;
  }
  // seeded: amplitude 0 is exactly the fixed point
  LineState s = fixed_point(params);
  if (cfg.ic_amplitude > 0) {
    std::mt19937_64 eng(cfg.seed);
    for (int n = s.n_min; n <= s.n_max(); ++n) {
      const double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;  // [0,1)
      s.omega(n) = cfg.ic_amplitude * (2.0 * u - 1.0);
    }
  }
  return s;
}

ForcingSpec forcing_of(const RunConfig& cfg) {
  return ForcingSpec{cfg.epsilon, cfg.nu, cfg.a_p, cfg.b_p, cfg.a_n, cfg.b_n};
}

void cmd_classify(const RunConfig& cfg, const fs::path& out) {
  const auto [khat, p] = modes_of(cfg);
  const long long d = static_cast<long long>(p.k1) * khat.k2 -
                      static_cast<long long>(p.k2) * khat.k1;
  const auto disk = disk_intersection(khat, p);
  const auto splits = boundary_indices(khat, p);
  const auto rep = canonical_representative(khat, p);
  const double b = -0.5 * cfg.gamma * static_cast<double>(d) / static_cast<double>(p.norm2());
  const int spectrum_case = disk.empty() ? 1 : 2;

  json disk_json = json::array();
  std::string disk_text;
  for (long long n : disk) {
    const Mode m(static_cast<int>(khat.k1 + n * p.k1), static_cast<int>(khat.k2 + n * p.k2));
    disk_json.push_back({{"n", n}, {"mode", {m.k1, m.k2}}, {"rho", m.norm2()}});
    if (!disk_text.empty()) disk_text += "; ";
    disk_text += "n=" + std::to_string(n) + " -> " + mode_str(m);
  }

  const json j = {
      {"khat", {khat.k1, khat.k2}},
      {"p", {p.k1, p.k2}},
      {"p_norm2", p.norm2()},
      {"D", d},
      {"disk_intersection", disk_json},
      {"boundary_indices", splits},
      {"canonical_representative", {{"n", rep.n}, {"mode", {rep.mode.k1, rep.mode.k2}}}},
      {"case", spectrum_case},
      {"case_label",
       spectrum_case == 2 ? "point spectrum possible" : "spectrum is the continuum segment only"},
      {"b", b},
      {"segment_halfwidth", 2.0 * std::abs(b)}};

  std::cout << "class khat=" << mode_str(khat) << ", p=" << mode_str(p) << ": D=" << d
            << ", |p|^2=" << p.norm2() << "\n";
  std::cout << "disk modes (|k| <= |p|): " << (disk.empty() ? "none" : disk_text) << "\n";
  for (long long n : splits) std::cout << "chain decouples at n=" << n << "\n";
  std::cout << "case (" << spectrum_case << "): "
            << (spectrum_case == 2 ? "point spectrum possible"
                                   : "spectrum is the continuum segment only")
            << "\n";
  std::cout << "continuum segment halfwidth 2|b| = " << format_g17(2.0 * std::abs(b))
            << " (b = " << format_g17(b) << ")\n";
  write_json(out / "classify.json", j);
}

void cmd_spectrum(const RunConfig& cfg, const fs::path& out) {
  const auto [khat, p] = modes_of(cfg);
  const LinearSubsystem sys(build_chain(khat, p, -cfg.N - 1, cfg.N + 1), cfg.gamma);
  const Box box{cfg.box[0], cfg.box[1], cfg.box[2], cfg.box[3]};
  json j;
  const auto show = [](const SpectrumReport& rep) {
    std::cout << rep.method << ": " << rep.point_eigenvalues.size() << " point eigenvalue(s)\n";
    for (const EigEntry& e : rep.point_eigenvalues)
      std::cout << "  " << format_g17(e.lambda.real()) << (e.lambda.imag() < 0 ? " - " : " + ")
                << format_g17(std::abs(e.lambda.imag())) << "i  (" << to_string(e.type) << ")\n";
  };
  if (cfg.method == "cf" || cfg.method == "both") {
    const SpectrumReport rep = find_point_spectrum_cf(sys, box, cfg.M);
    j["cf"] = report_json(rep);
    show(rep);
  }
  if (cfg.method == "matrix" || cfg.method == "both") {
    const SpectrumReport rep =
        truncated_point_spectrum(sys, cfg.N, cfg.effective_re_threshold());
    j["matrix"] = report_json(rep);
    show(rep);
  }
  write_json(out / "spectrum.json", j);
}

void cmd_simulate(const RunConfig& cfg, const fs::path& out) {
  const auto [khat, p] = modes_of(cfg);
  const ModelParams params = make_params(khat, p, cfg.gamma, cfg.n_min, cfg.n_max);
  const LineState s0 = initial_condition(cfg, params);
  const ForcingSpec forcing = forcing_of(cfg);
  const Field field = [&params, &forcing](double t, const LineState& s) {
    return ns_field(s, params, forcing, t);
  };
  const long long steps = std::max<long long>(1, std::llround(cfg.T / cfg.dt));
  const Trajectory traj = integrate(field, s0, cfg.dt, steps, cfg.stride);
  atomic_write(out / "trajectory.csv", trajectory_csv(traj, params, cfg.sobolev_s));
  std::cout << "wrote " << (out / "trajectory.csv").string() << " (" << traj.states.size()
            << " samples)\n";
  if (traj.blowup_step)
    throw numerical_error("state became non-finite at step " + std::to_string(*traj.blowup_step) +
                          "; partial trajectory written");
  const auto [e, z] = invariants(traj.states.back(), params);
  std::cout << "final E = " << format_g17(e) << ", Z = " << format_g17(z) << "\n";
}

void cmd_manifold(const RunConfig& cfg, const fs::path& out) {
  const auto [khat, p] = modes_of(cfg);
  const ModelParams params = make_params(khat, p, cfg.gamma, cfg.n_min, cfg.n_max);
  const LinearSubsystem sys(params.chain, cfg.gamma);
  const TangentSplit split =
      tangent_split_range(sys, cfg.n_min, cfg.n_max, cfg.effective_re_threshold());
  const ManifoldDirection dir =
      cfg.direction == "stable" ? ManifoldDirection::stable : ManifoldDirection::unstable;
  const ManifoldFamily fam = grow_manifold(split, params, cfg.effective_delta(), cfg.samples,
                                           cfg.manifold_T, cfg.dt, dir);

  std::cout << "lambda_u = " << format_g17(split.lambda_u.real()) << " + "
            << format_g17(split.lambda_u.imag()) << "i\n";
  json rates = json::array();
  for (std::size_t i = 0; i < fam.trajectories.size(); ++i) {
    char name[40];
    std::snprintf(name, sizeof(name), "manifold_seed_%03zu.csv", i);
    atomic_write(out / name, trajectory_csv(fam.trajectories[i], params, cfg.sobolev_s));
    const RateEstimate est = growth_rate(fam.trajectories[i], 1e-3 * cfg.gamma);
    json entry = {{"theta", fam.thetas[i]},
                  {"rate", est.rate},
                  {"frequency", est.frequency},
                  {"file", name}};
    if (fam.trajectories[i].blowup_step)
      entry["blowup_t"] =
          fam.trajectories[i].times.empty() ? 0.0 : fam.trajectories[i].times.back();
    rates.push_back(entry);
    std::cout << "  theta=" << format_g17(fam.thetas[i]) << "  rate=" << format_g17(est.rate)
              << "  frequency=" << format_g17(est.frequency) << "\n";
  }
  const json j = {{"delta", fam.delta},
                  {"samples", cfg.samples},
                  {"direction", cfg.direction},
                  {"lambda_u", {{"re", split.lambda_u.real()}, {"im", split.lambda_u.imag()}}},
                  {"rates", rates}};
  write_json(out / "manifold.json", j);
}

void cmd_poincare(const RunConfig& cfg, const fs::path& out) {
  const auto [khat, p] = modes_of(cfg);
  const ModelParams params = make_params(khat, p, cfg.gamma, cfg.n_min, cfg.n_max);
  const ForcingSpec forcing = forcing_of(cfg);
  const Field field = [&params, &forcing](double t, const LineState& s) {
    return ns_field(s, params, forcing, t);
  };
  const double period = 2.0 * std::acos(-1.0) / cfg.nu;
  const long long sections = static_cast<long long>(std::floor(cfg.T / period));
  if (sections < 1)
    throw config_error("T must cover at least one forcing period 2*pi/nu");

  Trajectory strobe;
  LineState y = initial_condition(cfg, params);
  strobe.times.push_back(0.0);
  strobe.states.push_back(y);
  const long long full_steps = static_cast<long long>(std::floor(period / cfg.dt));
  const double rem = period - static_cast<double>(full_steps) * cfg.dt;
  for (long long k = 1; k <= sections; ++k) {
    const double t0 = static_cast<double>(k - 1) * period;
    // integrate one period; the final sub-step is shortened to land exactly
    // on the section time
    Trajectory leg = integrate(field, y, cfg.dt, full_steps, full_steps, t0);
    if (!leg.blowup_step && rem > 1e-12 * period)
      leg = integrate(field, leg.states.back(), rem, 1, 1,
                      t0 + static_cast<double>(full_steps) * cfg.dt);
    if (leg.blowup_step) {
      atomic_write(out / "poincare.csv", trajectory_csv(strobe, params, cfg.sobolev_s));
      throw numerical_error("state became non-finite inside period " + std::to_string(k) +
                            "; partial section written");
    }
    y = leg.states.back();
    strobe.times.push_back(static_cast<double>(k) * period);
    strobe.states.push_back(y);
  }
  atomic_write(out / "poincare.csv", trajectory_csv(strobe, params, cfg.sobolev_s));
  std::cout << "wrote " << (out / "poincare.csv").string() << " (" << strobe.states.size()
            << " sections)\n";
}

}  // namespace

void run_command(const std::string& cmd, const RunConfig& cfg) {
  const fs::path out(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw config_error("cannot create output directory '" + cfg.out_dir + "'");

  if (cmd == "classify") {
    cmd_classify(cfg, out);
  } else if (cmd == "spectrum") {
    cmd_spectrum(cfg, out);
  } else if (cmd == "simulate") {
    cmd_simulate(cfg, out);
  } else if (cmd == "manifold") {
    cmd_manifold(cfg, out);
  } else if (cmd == "poincare") {
    cmd_poincare(cfg, out);
  } else {
    throw config_error("unknown command '" + cmd + "'");
  }
}

}  // namespace eulerline
