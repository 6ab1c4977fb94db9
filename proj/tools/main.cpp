#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "eulerline/cli.hpp"
#include "eulerline/config.hpp"
#include "eulerline/errors.hpp"

namespace {

using eulerline::config_error;

struct CommandArgs {
  std::string config_file;
  std::vector<std::string> sets;
  std::string out_dir;
  std::string method;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

eulerline::RunConfig build_config(const CommandArgs& args) {
  std::vector<std::pair<std::string, std::string>> overrides;
  for (const std::string& s : args.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0)
      throw config_error("invalid --set '" + s + "': expected section.key=value");
    overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  if (!args.method.empty()) overrides.emplace_back("spectral.method", args.method);
  if (!args.out_dir.empty()) overrides.emplace_back("output.dir", args.out_dir);
  const std::string text = args.config_file.empty() ? std::string() : read_file(args.config_file);
  return eulerline::parse_config(text, overrides);
}

void emit_error(const std::string& kind, const std::string& message) {
  const nlohmann::json j = {{"error", {{"kind", kind}, {"message", message}}}};
  std::cerr << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectrum and dynamics of single lattice classes of the 2D Euler linearization"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"classify", "classify a lattice class and report its continuum segment"},
      {"spectrum", "locate the point spectrum (continued fractions and/or truncation)"},
      {"simulate", "integrate the line model or its forced viscous perturbation"},
      {"manifold", "grow the local invariant manifold at the fixed point"},
      {"poincare", "stroboscopic sections at the forcing period"},
  };

  std::vector<CommandArgs> args(commands.size());
  std::string selected;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    CLI::App* sub = app.add_subcommand(commands[i].first, commands[i].second);
    sub->add_option("--config", args[i].config_file, "INI config file");
    sub->add_option("--set", args[i].sets, "override, section.key=value (repeatable)");
    sub->add_option("--out", args[i].out_dir, "output directory");
    if (commands[i].first == "spectrum")
      sub->add_option("--method", args[i].method, "cf, matrix, or both (= spectral.method)");
    sub->callback([&selected, name = commands[i].first] { selected = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("config", e.what());
    return 2;
  }

  std::size_t idx = 0;
  while (idx < commands.size() && commands[idx].first != selected) ++idx;

  try {
    eulerline::run_command(selected, build_config(args[idx]));
  } catch (const config_error& e) {
    emit_error("config", e.what());
    return 2;
  } catch (const eulerline::numerical_error& e) {
    emit_error("numerical", e.what());
    return 3;
  } catch (const std::exception& e) {
    emit_error("internal", e.what());
    return 3;
  }
  return 0;
}
