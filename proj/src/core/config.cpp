#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace mssvdd {

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::linear: return "linear";
    case Variant::kernel: return "kernel";
    case Variant::npt: return "npt";
  }
  return "?";
}

std::string omega_name(OmegaKind w) { return "omega" + std::to_string(static_cast<int>(w)); }

std::string decision_name(Decision d) { return "DS" + std::to_string(static_cast<int>(d)); }

Variant variant_from_name(const std::string& s) {
  if (s == "linear") return Variant::linear;
  if (s == "kernel") return Variant::kernel;
  if (s == "npt") return Variant::npt;
  fail(errc::config_error, "unknown variant '" + s + "'");
}

OmegaKind omega_from_name(const std::string& s) {
  for (int i = 0; i <= 6; ++i)
    if (s == "omega" + std::to_string(i) || s == std::to_string(i)) return static_cast<OmegaKind>(i);
  fail(errc::config_error, "unknown omega '" + s + "' (expected omega0..omega6)");
}

Decision decision_from_name(const std::string& s) {
  for (int i = 1; i <= 4; ++i)
    if (s == "DS" + std::to_string(i) || s == "ds" + std::to_string(i) || s == std::to_string(i))
      return static_cast<Decision>(i);
  fail(errc::config_error, "unknown decision strategy '" + s + "' (expected DS1..DS4)");
}

namespace {

// Minimal TOML reader: [section] headers, key = value lines, # comments.
// Values: quoted strings, integers, floats, booleans, and flat arrays of those.
struct TomlValue {
  std::string raw;       // scalar token (quotes stripped for strings)
  bool is_string = false;
  std::vector<TomlValue> array;
  bool is_array = false;
  int line = 0;
};

using TomlTable = std::map<std::string, std::map<std::string, TomlValue>>;

std::string strip(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

TomlValue parse_scalar(const std::string& token, int line, const std::string& origin) {
  TomlValue v;
  v.line = line;
  std::string t = strip(token);
  if (t.empty()) fail(errc::config_error, origin + ":" + std::to_string(line) + ": empty value");
  if (t.front() == '"') {
    if (t.size() < 2 || t.back() != '"')
      fail(errc::config_error, origin + ":" + std::to_string(line) + ": unterminated string");
    v.raw = t.substr(1, t.size() - 2);
    v.is_string = true;
    return v;
  }
  v.raw = t;
  return v;
}

TomlValue parse_value(const std::string& token, int line, const std::string& origin) {
  std::string t = strip(token);
  if (!t.empty() && t.front() == '[') {
    if (t.back() != ']')
      fail(errc::config_error, origin + ":" + std::to_string(line) + ": unterminated array");
    TomlValue v;
    v.is_array = true;
    v.line = line;
    std::string inner = t.substr(1, t.size() - 2);
    std::string cell;
    bool in_string = false;
    for (char c : inner) {
      if (c == '"') in_string = !in_string;
      if (c == ',' && !in_string) {
        if (!strip(cell).empty()) v.array.push_back(parse_scalar(cell, line, origin));
        cell.clear();
      } else {
        cell += c;
      }
    }
    if (!strip(cell).empty()) v.array.push_back(parse_scalar(cell, line, origin));
    return v;
  }
  return parse_scalar(t, line, origin);
}

TomlTable parse_toml(const std::string& text, const std::string& origin) {
  TomlTable table;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    // strip comments outside strings
    std::string no_comment;
    bool in_string = false;
    for (char c : line) {
      if (c == '"') in_string = !in_string;
      if (c == '#' && !in_string) break;
      no_comment += c;
    }
    std::string s = strip(no_comment);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        fail(errc::config_error, origin + ":" + std::to_string(line_no) + ": bad section header");
      section = strip(s.substr(1, s.size() - 2));
      if (section.empty())
        fail(errc::config_error, origin + ":" + std::to_string(line_no) + ": empty section name");
      table[section];
      continue;
    }
    const size_t eq = s.find('=');
    if (eq == std::string::npos)
      fail(errc::config_error, origin + ":" + std::to_string(line_no) + ": expected key = value");
    const std::string key = strip(s.substr(0, eq));
    if (key.empty())
      fail(errc::config_error, origin + ":" + std::to_string(line_no) + ": empty key");
    if (section.empty())
      fail(errc::config_error, origin + ":" + std::to_string(line_no) + ": key outside any section");
    table[section][key] = parse_value(s.substr(eq + 1), line_no, origin);
  }
  return table;
}

double to_double(const TomlValue& v, const std::string& origin) {
  try {
    size_t used = 0;
    const double d = std::stod(v.raw, &used);
    if (used != v.raw.size()) throw std::invalid_argument("trailing");
    return d;
  } catch (const std::exception&) {
    fail(errc::config_error, origin + ":" + std::to_string(v.line) + ": expected number, got '" + v.raw + "'");
  }
}

long to_int(const TomlValue& v, const std::string& origin) {
  try {
    size_t used = 0;
    const long d = std::stol(v.raw, &used);
    if (used != v.raw.size()) throw std::invalid_argument("trailing");
    return d;
  } catch (const std::exception&) {
    fail(errc::config_error, origin + ":" + std::to_string(v.line) + ": expected integer, got '" + v.raw + "'");
  }
}

bool to_bool(const TomlValue& v, const std::string& origin) {
  if (v.raw == "true") return true;
  if (v.raw == "false") return false;
  fail(errc::config_error, origin + ":" + std::to_string(v.line) + ": expected true/false, got '" + v.raw + "'");
}

std::vector<TomlValue> as_array(const TomlValue& v) {
  if (v.is_array) return v.array;
  return {v};
}

}  // namespace

void ExperimentConfig::validate() const {
  if (kind != "robot" && kind != "spectf" && kind != "dataset")
    fail(errc::config_error, "dataset.kind must be robot, spectf, or dataset");
  if (kind == "robot" && path.empty()) fail(errc::config_error, "dataset.path required for robot");
  if (kind == "dataset" && path.empty()) fail(errc::config_error, "dataset.path required");
  if (kind == "spectf" && (train_path.empty() || test_path.empty()))
    fail(errc::config_error, "dataset.train_path and dataset.test_path required for spectf");
  if (variants.empty() || omegas.empty() || decisions.empty() || c_grid.empty() ||
      beta_grid.empty() || sigma_grid.empty() || d_grid.empty())
    fail(errc::config_error, "grids must be non-empty");
  for (double c : c_grid)
    if (c <= 0.0 || c > 1.0) fail(errc::config_error, "grids.C entries must be in (0,1]");
  for (int d : d_grid)
    if (d < 1) fail(errc::config_error, "grids.d entries must be >= 1");
  for (double s : sigma_grid)
    if (s <= 0.0) fail(errc::config_error, "grids.sigma entries must be positive");
  for (double b : beta_grid)
    if (b < 0.0) fail(errc::config_error, "grids.beta entries must be >= 0");
  if (eta <= 0.0) fail(errc::config_error, "grids.eta must be positive");
  if (max_iter < 0) fail(errc::config_error, "grids.max_iter must be >= 0");
  if (seeds.empty()) fail(errc::config_error, "protocol.seeds must be non-empty");
  if (cv_k < 2) fail(errc::config_error, "protocol.cv_folds must be >= 2");
  if (train_fraction <= 0.0 || train_fraction >= 1.0)
    fail(errc::config_error, "protocol.train_fraction must be in (0,1)");
  // an empty out_dir runs the protocol in memory without writing artifacts
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
  const TomlTable table = parse_toml(text, origin);

  for (const auto& [section, kv] : table)
    if (section != "dataset" && section != "grids" && section != "protocol" && section != "output")
      fail(errc::config_error, origin + ": unknown section [" + section + "]");

  ExperimentConfig cfg;
  auto section = [&](const std::string& name) -> const std::map<std::string, TomlValue>* {
    auto it = table.find(name);
    return it == table.end() ? nullptr : &it->second;
  };

  if (const auto* ds = section("dataset")) {
    for (const auto& [key, v] : *ds) {
      if (key == "kind") cfg.kind = v.raw;
      else if (key == "path") cfg.path = v.raw;
      else if (key == "train_path") cfg.train_path = v.raw;
      else if (key == "test_path") cfg.test_path = v.raw;
      else if (key == "lp") cfg.lp = static_cast<int>(to_int(v, origin));
      else if (key == "target_label") cfg.target_label = v.raw;
      else fail(errc::config_error, origin + ": unknown key dataset." + key);
    }
  } else {
    fail(errc::config_error, origin + ": missing [dataset] section");
  }

  if (const auto* g = section("grids")) {
    for (const auto& [key, v] : *g) {
      if (key == "variant") {
        cfg.variants.clear();
        for (const auto& e : as_array(v)) cfg.variants.push_back(variant_from_name(e.raw));
      } else if (key == "omega") {
        cfg.omegas.clear();
        for (const auto& e : as_array(v)) cfg.omegas.push_back(omega_from_name(e.raw));
      } else if (key == "decision") {
        cfg.decisions.clear();
        for (const auto& e : as_array(v)) cfg.decisions.push_back(decision_from_name(e.raw));
      } else if (key == "C") {
        cfg.c_grid.clear();
        for (const auto& e : as_array(v)) cfg.c_grid.push_back(to_double(e, origin));
      } else if (key == "beta") {
        cfg.beta_grid.clear();
        for (const auto& e : as_array(v)) cfg.beta_grid.push_back(to_double(e, origin));
      } else if (key == "sigma") {
        cfg.sigma_grid.clear();
        for (const auto& e : as_array(v)) cfg.sigma_grid.push_back(to_double(e, origin));
      } else if (key == "d") {
        cfg.d_grid.clear();
        for (const auto& e : as_array(v)) cfg.d_grid.push_back(static_cast<int>(to_int(e, origin)));
      } else if (key == "eta") {
        cfg.eta = to_double(v, origin);
      } else if (key == "max_iter") {
        cfg.max_iter = static_cast<int>(to_int(v, origin));
      } else if (key == "include_baselines") {
        cfg.include_baselines = to_bool(v, origin);
      } else if (key == "center_kernel_gram") {
        cfg.center_kernel_gram = to_bool(v, origin);
      } else {
        fail(errc::config_error, origin + ": unknown key grids." + key);
      }
    }
  }

  if (const auto* p = section("protocol")) {
    for (const auto& [key, v] : *p) {
      if (key == "seeds") {
        cfg.seeds.clear();
        for (const auto& e : as_array(v)) cfg.seeds.push_back(static_cast<uint64_t>(to_int(e, origin)));
      } else if (key == "cv_folds") {
        cfg.cv_k = static_cast<int>(to_int(v, origin));
      } else if (key == "train_fraction") {
        cfg.train_fraction = to_double(v, origin);
      } else if (key == "standardize") {
        cfg.standardize = to_bool(v, origin);
      } else {
        fail(errc::config_error, origin + ": unknown key protocol." + key);
      }
    }
  }

  if (const auto* o = section("output")) {
    for (const auto& [key, v] : *o) {
      if (key == "dir") cfg.out_dir = v.raw;
      else fail(errc::config_error, origin + ": unknown key output." + key);
    }
  }

  // Grid order is part of the contract: ties resolve to the first cell in
  // (beta, C, sigma, d) ascending order.
  std::sort(cfg.beta_grid.begin(), cfg.beta_grid.end());
  std::sort(cfg.c_grid.begin(), cfg.c_grid.end());
  std::sort(cfg.sigma_grid.begin(), cfg.sigma_grid.end());
  std::sort(cfg.d_grid.begin(), cfg.d_grid.end());

  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::config_error, "cannot open config: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

}  // namespace mssvdd
