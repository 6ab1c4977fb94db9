#include "eulerline/config.hpp"

#include <cstdio>
#include <map>
#include <set>

#include "eulerline/errors.hpp"

namespace eulerline {

namespace {

const std::set<std::string> kSections = {"model",   "spectral", "integration",
                                         "forcing", "manifold", "output"};

const std::set<std::string> kKeys = {
    "model.khat",           "model.p",           "model.gamma",       "model.n_min",
    "model.n_max",          "spectral.N",        "spectral.M",        "spectral.re_threshold",
    "spectral.box",         "spectral.method",   "integration.dt",    "integration.T",
    "integration.stride",   "integration.sobolev_s", "integration.ic",
    "integration.ic_values", "integration.ic_file",  "integration.ic_amplitude",
    "integration.seed",     "forcing.epsilon",   "forcing.nu",        "forcing.a_p",
    "forcing.b_p",          "forcing.a_n",       "forcing.b_n",       "manifold.delta",
    "manifold.samples",     "manifold.direction", "manifold.T",       "output.dir"};

struct RawValue {
  std::string text;
  int line;  // 0 for --set overrides
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string where(const RawValue& rv) {
  return rv.line > 0 ? "line " + std::to_string(rv.line) + ": " : "";
}

double parse_double(const RawValue& rv, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(rv.text, &pos);
    if (pos != rv.text.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw config_error(where(rv) + "invalid number '" + rv.text + "' for " + key);
  }
}

long long parse_int(const RawValue& rv, const std::string& key) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(rv.text, &pos);
    if (pos != rv.text.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw config_error(where(rv) + "invalid integer '" + rv.text + "' for " + key);
  }
}

unsigned long long parse_uint(const RawValue& rv, const std::string& key) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(rv.text, &pos);
    if (pos != rv.text.size() || rv.text.find('-') != std::string::npos)
      throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw config_error(where(rv) + "invalid integer '" + rv.text + "' for " + key);
  }
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    if (comma == std::string::npos) {
      parts.push_back(trim(s.substr(start)));
      break;
    }
    parts.push_back(trim(s.substr(start, comma - start)));
    start = comma + 1;
  }
  if (parts.size() == 1 && parts[0].empty()) parts.clear();
  return parts;
}

std::vector<double> parse_list(const RawValue& rv, const std::string& key) {
  std::vector<double> out;
  for (const std::string& part : split_commas(rv.text))
    out.push_back(parse_double(RawValue{part, rv.line}, key));
  return out;
}

std::array<int, 2> parse_mode_pair(const RawValue& rv, const std::string& key) {
  const auto parts = split_commas(rv.text);
  if (parts.size() != 2)
    throw config_error(where(rv) + "expected two components 'k1,k2' for " + key);
  return {static_cast<int>(parse_int(RawValue{parts[0], rv.line}, key)),
          static_cast<int>(parse_int(RawValue{parts[1], rv.line}, key))};
}

using KvMap = std::map<std::string, RawValue>;

KvMap tokenize(const std::string& text) {
  KvMap kv;
  std::string section;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    std::string line = text.substr(start, nl == std::string::npos ? std::string::npos : nl - start);
    start = nl == std::string::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw config_error("line " + std::to_string(line_no) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!kSections.count(section))
        throw config_error("line " + std::to_string(line_no) + ": unknown section '" + section + "'");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("line " + std::to_string(line_no) +
                         ": expected '[section]' or 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw config_error("line " + std::to_string(line_no) + ": empty key");
    if (section.empty())
      throw config_error("line " + std::to_string(line_no) + ": key '" + key +
                         "' outside any section");
    const std::string full = section + "." + key;
    if (!kKeys.count(full))
      throw config_error("line " + std::to_string(line_no) + ": unknown key '" + full + "'");
    kv[full] = RawValue{value, line_no};
  }
  return kv;
}

void validate(const RunConfig& c) {
  const auto fail = [](const std::string& msg) { throw config_error(msg); };
  if (c.khat[0] == 0 && c.khat[1] == 0) fail("khat must be a nonzero mode");
  if (c.p[0] == 0 && c.p[1] == 0) fail("p must be a nonzero mode");
  if (!(c.gamma > 0)) fail("gamma must be > 0");
  if (c.n_min >= c.n_max) fail("n_min must be < n_max");
  if (c.N < 1) fail("N must be ≥ 1");
  if (c.M < 10) fail("M must be ≥ 10");
  if (c.re_threshold && !(*c.re_threshold >= 0)) fail("re_threshold must be ≥ 0");
  if (!(c.box[0] < c.box[1]) || !(c.box[2] < c.box[3]))
    fail("box must satisfy re_lo < re_hi and im_lo < im_hi");
  if (c.method != "cf" && c.method != "matrix" && c.method != "both")
    fail("method must be one of cf, matrix, both");
  if (!(c.dt > 0)) fail("dt must be > 0");
  if (!(c.T > 0)) fail("T must be > 0");
  if (c.stride < 1) fail("stride must be ≥ 1");
  if (c.sobolev_s < 0) fail("sobolev_s must be ≥ 0");
  if (c.ic != "seeded" && c.ic != "inline" && c.ic != "file")
    fail("ic must be one of seeded, inline, file");
  const std::size_t dim = static_cast<std::size_t>(c.n_max - c.n_min + 2);
  if (c.ic == "inline" && c.ic_values.size() != dim)
    fail("ic_values must have " + std::to_string(dim) + " entries (omega_p first)");
  if (c.ic == "file" && c.ic_file.empty()) fail("ic_file is required when ic = file");
  if (!(c.ic_amplitude >= 0)) fail("ic_amplitude must be ≥ 0");
  if (!(c.epsilon >= 0)) fail("epsilon must be ≥ 0");
  if (!(c.nu > 0)) fail("nu must be > 0");
  const std::size_t len = static_cast<std::size_t>(c.n_max - c.n_min + 1);
  if (!c.a_n.empty() && c.a_n.size() != 1 && c.a_n.size() != len)
    fail("a_n must have 1 or range-length entries");
  if (!c.b_n.empty() && c.b_n.size() != 1 && c.b_n.size() != len)
    fail("b_n must have 1 or range-length entries");
  if (c.delta && !(*c.delta > 0)) fail("delta must be > 0");
  if (c.samples < 1) fail("samples must be ≥ 1");
  if (c.direction != "unstable" && c.direction != "stable")
    fail("direction must be unstable or stable");
  if (!(c.manifold_T > 0)) fail("manifold T must be > 0");
  if (c.out_dir.empty()) fail("output dir must not be empty");
}

RunConfig build(const KvMap& kv) {
  RunConfig c;
  const auto get = [&kv](const char* key) -> const RawValue* {
    const auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  if (const auto* v = get("model.khat")) c.khat = parse_mode_pair(*v, "model.khat");
  if (const auto* v = get("model.p")) c.p = parse_mode_pair(*v, "model.p");
  if (const auto* v = get("model.gamma")) c.gamma = parse_double(*v, "model.gamma");
  if (const auto* v = get("model.n_min"))
    c.n_min = static_cast<int>(parse_int(*v, "model.n_min"));
  if (const auto* v = get("model.n_max"))
    c.n_max = static_cast<int>(parse_int(*v, "model.n_max"));
  if (const auto* v = get("spectral.N")) c.N = static_cast<int>(parse_int(*v, "spectral.N"));
  if (const auto* v = get("spectral.M")) c.M = parse_int(*v, "spectral.M");
  if (const auto* v = get("spectral.re_threshold"))
    c.re_threshold = v->text == "auto"
                         ? std::optional<double>{}
                         : std::optional<double>{parse_double(*v, "spectral.re_threshold")};
  if (const auto* v = get("spectral.box")) {
    const auto vals = parse_list(*v, "spectral.box");
    if (vals.size() != 4)
      throw config_error(where(*v) + "expected 're_lo,re_hi,im_lo,im_hi' for spectral.box");
    c.box = {vals[0], vals[1], vals[2], vals[3]};
  }
  if (const auto* v = get("spectral.method")) c.method = v->text;
  if (const auto* v = get("integration.dt")) c.dt = parse_double(*v, "integration.dt");
  if (const auto* v = get("integration.T")) c.T = parse_double(*v, "integration.T");
  if (const auto* v = get("integration.stride")) c.stride = parse_int(*v, "integration.stride");
  if (const auto* v = get("integration.sobolev_s"))
    c.sobolev_s = static_cast<int>(parse_int(*v, "integration.sobolev_s"));
  if (const auto* v = get("integration.ic")) c.ic = v->text;
  if (const auto* v = get("integration.ic_values"))
    c.ic_values = parse_list(*v, "integration.ic_values");
  if (const auto* v = get("integration.ic_file")) c.ic_file = v->text;
  if (const auto* v = get("integration.ic_amplitude"))
    c.ic_amplitude = parse_double(*v, "integration.ic_amplitude");
  if (const auto* v = get("integration.seed")) c.seed = parse_uint(*v, "integration.seed");
  if (const auto* v = get("forcing.epsilon")) c.epsilon = parse_double(*v, "forcing.epsilon");
  if (const auto* v = get("forcing.nu")) c.nu = parse_double(*v, "forcing.nu");
  if (const auto* v = get("forcing.a_p")) c.a_p = parse_double(*v, "forcing.a_p");
  if (const auto* v = get("forcing.b_p")) c.b_p = parse_double(*v, "forcing.b_p");
  if (const auto* v = get("forcing.a_n")) c.a_n = parse_list(*v, "forcing.a_n");
  if (const auto* v = get("forcing.b_n")) c.b_n = parse_list(*v, "forcing.b_n");
  if (const auto* v = get("manifold.delta"))
    c.delta = v->text == "auto" ? std::optional<double>{}
                                : std::optional<double>{parse_double(*v, "manifold.delta")};
  if (const auto* v = get("manifold.samples"))
    c.samples = static_cast<int>(parse_int(*v, "manifold.samples"));
  if (const auto* v = get("manifold.direction")) c.direction = v->text;
  if (const auto* v = get("manifold.T")) c.manifold_T = parse_double(*v, "manifold.T");
  if (const auto* v = get("output.dir")) c.out_dir = v->text;
  validate(c);
  return c;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string fmt(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += fmt(xs[i]);
  }
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& text) { return parse_config(text, {}); }

RunConfig parse_config(const std::string& text,
                       const std::vector<std::pair<std::string, std::string>>& overrides) {
  KvMap kv = tokenize(text);
  for (const auto& [key, value] : overrides) {
    if (!kKeys.count(key))
      throw config_error("unknown key '" + key + "'");
    kv[key] = RawValue{trim(value), 0};
  }
  return build(kv);
}

std::string render_config(const RunConfig& c) {
  std::string out;
  out += "[model]\n";
  out += "khat = " + std::to_string(c.khat[0]) + "," + std::to_string(c.khat[1]) + "\n";
  out += "p = " + std::to_string(c.p[0]) + "," + std::to_string(c.p[1]) + "\n";
  out += "gamma = " + fmt(c.gamma) + "\n";
  out += "n_min = " + std::to_string(c.n_min) + "\n";
  out += "n_max = " + std::to_string(c.n_max) + "\n";
  out += "\n[spectral]\n";
  out += "N = " + std::to_string(c.N) + "\n";
  out += "M = " + std::to_string(c.M) + "\n";
  out += "re_threshold = " + (c.re_threshold ? fmt(*c.re_threshold) : std::string("auto")) + "\n";
  out += "box = " + fmt({c.box.begin(), c.box.end()}) + "\n";
  out += "method = " + c.method + "\n";
  out += "\n[integration]\n";
  out += "dt = " + fmt(c.dt) + "\n";
  out += "T = " + fmt(c.T) + "\n";
  out += "stride = " + std::to_string(c.stride) + "\n";
  out += "sobolev_s = " + std::to_string(c.sobolev_s) + "\n";
  out += "ic = " + c.ic + "\n";
  out += "ic_values = " + fmt(c.ic_values) + "\n";
  out += "ic_file = " + c.ic_file + "\n";
  out += "ic_amplitude = " + fmt(c.ic_amplitude) + "\n";
  out += "seed = " + std::to_string(c.seed) + "\n";
  out += "\n[forcing]\n";
  out += "epsilon = " + fmt(c.epsilon) + "\n";
  out += "nu = " + fmt(c.nu) + "\n";
  out += "a_p = " + fmt(c.a_p) + "\n";
  out += "b_p = " + fmt(c.b_p) + "\n";
  out += "a_n = " + fmt(c.a_n) + "\n";
  out += "b_n = " + fmt(c.b_n) + "\n";
  out += "\n[manifold]\n";
  out += "delta = " + (c.delta ? fmt(*c.delta) : std::string("auto")) + "\n";
  out += "samples = " + std::to_string(c.samples) + "\n";
  out += "direction = " + c.direction + "\n";
  out += "T = " + fmt(c.manifold_T) + "\n";
  out += "\n[output]\n";
  out += "dir = " + c.out_dir + "\n";
  return out;
}

}  // namespace eulerline
