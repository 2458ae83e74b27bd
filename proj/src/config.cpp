#include "optoepr/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "optoepr/errors.hpp"

namespace optoepr {

namespace {

enum class Kind { Frequency, Temperature, Power, Length, Number, Text };

struct KeyInfo {
  Kind kind;
  std::string slot;  // keys sharing a slot are alternative spellings of one value
};

const std::map<std::string, KeyInfo>& key_table() {
  static const std::map<std::string, KeyInfo> table{
      {"omega_p", {Kind::Frequency, "omega_p"}},
      {"omega_m", {Kind::Frequency, "omega_m"}},
      {"gamma", {Kind::Frequency, "gamma"}},
      {"gamma_m", {Kind::Frequency, "gamma_m"}},
      {"q", {Kind::Number, "gamma_m"}},
      {"nu", {Kind::Frequency, "nu"}},
      {"eta", {Kind::Number, "eta"}},
      {"temperature", {Kind::Temperature, "temperature"}},
      {"radius", {Kind::Length, "radius"}},
      {"n0", {Kind::Number, "n0"}},
      {"drive", {Kind::Text, "drive"}},
      {"alpha", {Kind::Number, "alpha"}},
      {"delta", {Kind::Frequency, "delta"}},
      {"d", {Kind::Frequency, "d"}},
      {"d_over_gamma", {Kind::Number, "d"}},
      {"drive_1", {Kind::Frequency, "drive_1"}},
      {"drive_2", {Kind::Frequency, "drive_2"}},
      {"power_1", {Kind::Power, "power_1"}},
      {"power_2", {Kind::Power, "power_2"}},
      {"laser_1", {Kind::Frequency, "laser_1"}},
      {"laser_2", {Kind::Frequency, "laser_2"}},
      {"command", {Kind::Text, "command"}},
      {"format", {Kind::Text, "format"}},
      {"output", {Kind::Text, "output"}},
      {"omega_min_over_gamma", {Kind::Number, "omega_min_over_gamma"}},
      {"omega_max_over_gamma", {Kind::Number, "omega_max_over_gamma"}},
      {"omega_points", {Kind::Number, "omega_points"}},
      {"model", {Kind::Text, "model"}},
      {"models", {Kind::Text, "models"}},
      {"sweep_axis", {Kind::Text, "sweep_axis"}},
      {"sweep_values", {Kind::Text, "sweep_values"}},
  };
  return table;
}

const char* const kSuffixes[] = {"_rads", "_hz", "_k", "_w", "_m"};

bool suffix_allowed(Kind kind, const std::string& suffix) {
  switch (kind) {
    case Kind::Frequency:
      return suffix == "_hz" || suffix == "_rads";
    case Kind::Temperature:
      return suffix == "_k";
    case Kind::Power:
      return suffix == "_w";
    case Kind::Length:
      return suffix == "_m";
    default:
      return suffix.empty();
  }
}

// line > 0: config file line; 0: --set flag; -1: defaults directive.
struct Entry {
  std::string key;
  std::string base;
  std::string suffix;
  std::string value;
  int line = 0;
};

[[noreturn]] void fail(const Entry& e, const std::string& what) {
  if (e.line > 0) throw ParseError(e.line, what);
  throw ConfigError((e.line == 0 ? "--set " : "defaults: ") + e.key + ": " + what);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

Entry classify(const std::string& key, std::string value, int line) {
  Entry e{key, key, "", std::move(value), line};
  const auto& table = key_table();
  if (auto it = table.find(key); it != table.end()) {
    if (!suffix_allowed(it->second.kind, "")) {
      throw UnitError(fmt::format("key '{}' needs a unit suffix{}", key,
                                  line > 0 ? fmt::format(" (line {})", line) : ""));
    }
    return e;
  }
  for (const char* suffix : kSuffixes) {
    const std::string s = suffix;
    if (key.size() > s.size() && key.ends_with(s)) {
      const std::string base = key.substr(0, key.size() - s.size());
      if (auto it = table.find(base); it != table.end()) {
        if (!suffix_allowed(it->second.kind, s)) {
          throw UnitError(fmt::format("key '{}': unit suffix '{}' does not fit this quantity", key, s));
        }
        e.base = base;
        e.suffix = s;
        return e;
      }
    }
  }
  throw UnknownKey(fmt::format("unknown key '{}'{}", key,
                               line > 0 ? fmt::format(" (line {})", line) : ""));
}

double to_number(const Entry& e) {
  const std::string& v = e.value;
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) {
    fail(e, fmt::format("'{}' is not a number", v));
  }
  return out;
}

// Value in internal units (rad/s, K, W, m).
double to_quantity(const Entry& e) {
  const double x = to_number(e);
  return e.suffix == "_hz" ? hz_to_rads(x) : x;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> items;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

class EntrySet {
 public:
  void add(Entry e, bool override_existing) {
    const std::string slot = key_table().at(e.base).slot;
    auto it = slots_.find(slot);
    if (it != slots_.end() && it->second.line > 0 && e.line > 0 && !override_existing) {
      throw ParseError(e.line, fmt::format("duplicate key '{}' (first set as '{}' on line {})",
                                           e.key, it->second.key, it->second.line));
    }
    slots_[slot] = std::move(e);
  }
  const Entry* find(const std::string& slot) const {
    auto it = slots_.find(slot);
    return it == slots_.end() ? nullptr : &it->second;
  }
  const Entry& require(const std::string& slot) const {
    const Entry* e = find(slot);
    if (!e) throw ConfigError(fmt::format("missing required key '{}'", slot));
    return *e;
  }
  const std::map<std::string, Entry>& all() const { return slots_; }

 private:
  std::map<std::string, Entry> slots_;
};

std::vector<Entry> reference_defaults() {
  const std::pair<const char*, const char*> items[] = {
      {"omega_p_hz", "300e12"},    {"omega_m_hz", "73.5e6"}, {"gamma_hz", "3.2e6"},
      {"q", "30000"},              {"nu_hz", "100e6"},       {"eta", "1e-4"},
      {"temperature_k", "300"},    {"radius_m", "38e-6"},    {"n0", "1.45"},
      {"drive", "operating_point"}, {"alpha", "1000"},       {"delta_hz", "10e6"},
      {"d_over_gamma", "0.07"},
  };
  std::vector<Entry> out;
  for (const auto& [k, v] : items) out.push_back(classify(k, v, -1));
  return out;
}

DriveInput drive_from_string(const Entry& e) {
  if (e.value == "operating_point") return DriveInput::OperatingPoint;
  if (e.value == "amplitudes") return DriveInput::Amplitudes;
  if (e.value == "powers") return DriveInput::Powers;
  fail(e, "drive must be operating_point, amplitudes or powers");
}

RunConfig build(const EntrySet& set) {
  RunConfig cfg;
  auto number = [&](const char* slot) { return to_quantity(set.require(slot)); };

  PhysicalParams& p = cfg.params;
  p.omega_p = number("omega_p");
  p.omega_m = number("omega_m");
  p.gamma = number("gamma");
  const Entry& damping = set.require("gamma_m");
  if (damping.base == "q") {
    const double q = to_number(damping);
    if (!(q > 0.0)) fail(damping, "q must be positive");
    p.gamma_m = p.omega_m / q;
  } else {
    p.gamma_m = to_quantity(damping);
  }
  p.nu = number("nu");
  p.eta = number("eta");
  p.T = number("temperature");
  p.R = number("radius");
  p.n0 = number("n0");

  cfg.drive_input = drive_from_string(set.require("drive"));
  std::vector<std::string> used{"alpha", "delta", "d"};
  switch (cfg.drive_input) {
    case DriveInput::OperatingPoint: {
      cfg.target.alpha = number("alpha");
      cfg.target.delta = number("delta");
      const Entry& d = set.require("d");
      cfg.target.d = d.base == "d_over_gamma" ? to_number(d) * p.gamma : to_quantity(d);
      p = params_for_operating_point(p, cfg.target);
      break;
    }
    case DriveInput::Amplitudes:
      used = {"drive_1", "drive_2", "laser_1", "laser_2"};
      p.drive.mode = DriveMode::Amplitudes;
      p.drive.Omega_1 = number("drive_1");
      p.drive.Omega_2 = number("drive_2");
      p.drive.omega_L = number("laser_1");
      p.drive.omega_Lp = number("laser_2");
      break;
    case DriveInput::Powers:
      used = {"power_1", "power_2", "laser_1", "laser_2"};
      p.drive.mode = DriveMode::Powers;
      p.drive.P_1 = number("power_1");
      p.drive.P_2 = number("power_2");
      p.drive.omega_L = number("laser_1");
      p.drive.omega_Lp = number("laser_2");
      break;
  }
  for (const char* slot : {"alpha", "delta", "d", "drive_1", "drive_2", "power_1", "power_2",
                           "laser_1", "laser_2"}) {
    const Entry* e = set.find(slot);
    if (e && e->line >= 0 && std::find(used.begin(), used.end(), slot) == used.end()) {
      fail(*e, fmt::format("not used with drive = {}", to_string(cfg.drive_input)));
    }
  }

  if (const Entry* e = set.find("command")) {
    try {
      cfg.command = command_from_string(e->value);
    } catch (const ConfigError& err) {
      fail(*e, err.what());
    }
  }
  if (const Entry* e = set.find("format")) {
    try {
      cfg.format = format_from_string(e->value);
    } catch (const ConfigError& err) {
      fail(*e, err.what());
    }
  }
  if (const Entry* e = set.find("output")) cfg.output_path = e->value;
  if (const Entry* e = set.find("omega_min_over_gamma")) cfg.omega_min_over_gamma = to_number(*e);
  if (const Entry* e = set.find("omega_max_over_gamma")) cfg.omega_max_over_gamma = to_number(*e);
  if (const Entry* e = set.find("omega_points")) {
    const double n = to_number(*e);
    if (!(n >= 1.0) || n != std::floor(n) || n > 1e8) fail(*e, "omega_points must be a positive integer");
    cfg.omega_points = static_cast<std::size_t>(n);
  }
  if (!(cfg.omega_max_over_gamma >= cfg.omega_min_over_gamma)) {
    throw ConfigError("omega_max_over_gamma must not be below omega_min_over_gamma");
  }
  if (const Entry* e = set.find("model")) {
    try {
      cfg.model = model_from_string(e->value);
    } catch (const ConfigError& err) {
      fail(*e, err.what());
    }
  }
  if (const Entry* e = set.find("models")) {
    cfg.models.clear();
    try {
      for (const auto& name : split_list(e->value)) cfg.models.push_back(model_from_string(name));
    } catch (const ConfigError& err) {
      fail(*e, err.what());
    }
    if (cfg.models.empty()) fail(*e, "at least one model is required");
  }
  if (const Entry* e = set.find("sweep_axis")) {
    try {
      cfg.sweep_axis = axis_from_string(e->value);
    } catch (const ConfigError& err) {
      fail(*e, err.what());
    }
  }
  if (const Entry* e = set.find("sweep_values")) {
    for (const auto& item : split_list(e->value)) {
      Entry one = *e;
      one.value = item;
      cfg.sweep_values.push_back(to_number(one));
    }
  }
  return cfg;
}

std::string number_text(double x) { return fmt::format("{:.17g}", x); }

std::string join_models(const std::vector<ModelKind>& models) {
  std::string out;
  for (std::size_t i = 0; i < models.size(); ++i) out += (i ? "," : "") + to_string(models[i]);
  return out;
}

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::Derive:
      return "derive";
    case Command::Spectrum:
      return "spectrum";
    case Command::Sweep:
      return "sweep";
    case Command::Optimum:
      return "optimum";
    case Command::Verify:
      return "verify";
    case Command::Occupation:
      return "occupation";
  }
  return "unknown";
}

std::string to_string(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "jsonlines"; }

std::string to_string(DriveInput d) {
  switch (d) {
    case DriveInput::OperatingPoint:
      return "operating_point";
    case DriveInput::Amplitudes:
      return "amplitudes";
    case DriveInput::Powers:
      return "powers";
  }
  return "unknown";
}

Command command_from_string(const std::string& s) {
  for (auto c : {Command::Derive, Command::Spectrum, Command::Sweep, Command::Optimum,
                 Command::Verify, Command::Occupation}) {
    if (to_string(c) == s) return c;
  }
  throw ConfigError("unknown command '" + s + "'");
}

OutputFormat format_from_string(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "jsonlines") return OutputFormat::JsonLines;
  throw ConfigError("unknown format '" + s + "' (expected csv or jsonlines)");
}

RunConfig parse_config(const std::string& text, const std::vector<std::string>& flag_overrides) {
  EntrySet set;
  bool defaults_seen = false;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  std::vector<Entry> file_entries;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(std::string_view(raw).substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const auto colon = line.find(':');
    if (colon != std::string::npos && (eq == std::string::npos || colon < eq)) {
      const std::string directive = trim(std::string_view(line).substr(0, colon));
      const std::string value = trim(std::string_view(line).substr(colon + 1));
      if (directive != "defaults") throw ParseError(line_no, "unknown directive '" + directive + "'");
      if (value != "paper") throw ParseError(line_no, "unknown defaults set '" + value + "'");
      if (defaults_seen) throw ParseError(line_no, "duplicate defaults directive");
      defaults_seen = true;
      continue;
    }
    if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    if (key.empty()) throw ParseError(line_no, "missing key before '='");
    file_entries.push_back(classify(key, trim(std::string_view(line).substr(eq + 1)), line_no));
  }
  if (defaults_seen) {
    for (auto& e : reference_defaults()) set.add(std::move(e), true);
  }
  for (auto& e : file_entries) set.add(std::move(e), false);
  for (const auto& flag : flag_overrides) {
    const auto eq = flag.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + flag + "'");
    const std::string key = trim(std::string_view(flag).substr(0, eq));
    set.add(classify(key, trim(std::string_view(flag).substr(eq + 1)), 0), true);
  }
  return build(set);
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& flag_overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), flag_overrides);
}

std::string serialize_config(const RunConfig& c) {
  const PhysicalParams& p = c.params;
  std::string out;
  auto put = [&](const std::string& key, const std::string& value) {
    out += key + " = " + value + "\n";
  };
  put("command", to_string(c.command));
  put("format", to_string(c.format));
  put("output", c.output_path);
  put("omega_min_over_gamma", number_text(c.omega_min_over_gamma));
  put("omega_max_over_gamma", number_text(c.omega_max_over_gamma));
  put("omega_points", std::to_string(c.omega_points));
  put("model", to_string(c.model));
  put("models", join_models(c.models));
  put("sweep_axis", to_string(c.sweep_axis));
  std::string values;
  for (std::size_t i = 0; i < c.sweep_values.size(); ++i) {
    values += (i ? "," : "") + number_text(c.sweep_values[i]);
  }
  put("sweep_values", values);

  put("omega_p_rads", number_text(p.omega_p));
  put("omega_m_rads", number_text(p.omega_m));
  put("gamma_rads", number_text(p.gamma));
  put("gamma_m_rads", number_text(p.gamma_m));
  put("nu_rads", number_text(p.nu));
  put("eta", number_text(p.eta));
  put("temperature_k", number_text(p.T));
  put("radius_m", number_text(p.R));
  put("n0", number_text(p.n0));
  put("drive", to_string(c.drive_input));
  switch (c.drive_input) {
    case DriveInput::OperatingPoint:
      put("alpha", number_text(c.target.alpha));
      put("delta_rads", number_text(c.target.delta));
      put("d_rads", number_text(c.target.d));
      break;
    case DriveInput::Amplitudes:
      put("drive_1_rads", number_text(p.drive.Omega_1));
      put("drive_2_rads", number_text(p.drive.Omega_2));
      put("laser_1_rads", number_text(p.drive.omega_L));
      put("laser_2_rads", number_text(p.drive.omega_Lp));
      break;
    case DriveInput::Powers:
      put("power_1_w", number_text(p.drive.P_1));
      put("power_2_w", number_text(p.drive.P_2));
      put("laser_1_rads", number_text(p.drive.omega_L));
      put("laser_2_rads", number_text(p.drive.omega_Lp));
      break;
  }
  return out;
}

std::vector<double> omega_grid(const RunConfig& config) {
  const double g = config.params.gamma;
  return linear_grid(config.omega_min_over_gamma * g, config.omega_max_over_gamma * g,
                     config.omega_points);
}

}  // namespace optoepr
