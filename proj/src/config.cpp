#include "actmod/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>

#include "actmod/error.hpp"
#include "actmod/record.hpp"

namespace actmod {

namespace pt = boost::property_tree;

namespace {

using Entries = std::vector<std::pair<std::string, std::string>>;
using Sections = std::vector<std::pair<std::string, Entries>>;

Sections common_sections() {
  return {
      {"sim",
       {{"dt_low", "0.0001"},
        {"rate_ratio", "10"},
        {"seed", "1"},
        {"current_sense_sigma", "0.05"},
        {"torque_disturbance_sigma", "0"},
        {"latency_ticks", "1"},
        {"module_id", "1"}}},
      {"plant",
       {{"kt", "0.022071"},
        {"inertia", "1e-5"},
        {"viscous", "1e-5"},
        {"coulomb", "5e-4"},
        {"cog_amplitude", "2e-4"},
        {"pole_pairs", "12"},
        {"gear_ratio", "4"},
        {"drum_radius", "0.009"},
        {"encoder_cpr", "5000"},
        {"current_limit", "6"},
        {"current_loop_tau", "5e-4"}}},
      {"controller",
       {{"derivative_filter_alpha", "0.5"}, {"integrator_limit", "6"}, {"feedforward", "auto"}}},
      {"p_gains", {{"kp", "1.0"}}},
      {"pd_gains", {{"kp", "1.6"}, {"kd", "0.02"}}},
      {"pid_gains", {{"kp", "0.9"}, {"ki", "10.1"}, {"kd", "0.02"}}},
  };
}

Entries load_section(const std::string& kind, const std::string& mass) {
  return {{"kind", kind},
          {"mass", mass},
          {"flexural_rigidity", "0.01"},
          {"tendon_offset", "0.02"},
          {"length", "0.285"},
          {"pulses", ""}};
}

Sections preset_sections(const std::string& name) {
  Sections s = common_sections();
  auto add = [&](std::string section, Entries entries) {
    s.emplace_back(std::move(section), std::move(entries));
  };
  if (name == "step") {
    add("load", load_section("none", "0"));
    add("reference", {{"height", "1.0"}, {"at", "0.1"}, {"hold", "1.5"}});
    add("scenario", {{"controllers", "P, PD, PID"}});
  } else if (name == "tune") {
    add("load", load_section("none", "0"));
    add("reference", {{"height", "1.0"}, {"at", "0.1"}, {"hold", "3.0"}});
    add("scenario", {{"kp_start", "0.05"},
                     {"kp_growth", "1.1"},
                     {"kp_ceiling", "100"},
                     {"peaks", "8"},
                     {"decay_low", "0.9"},
                     {"decay_high", "1.1"},
                     {"controllers", "P, PD, PID"}});
  } else if (name == "staircase") {
    add("load", load_section("gravity", "1.0"));
    add("reference", {{"levels", "-8, -7, -6, -5, -4, -3, -2, -1, 0, 1, 2, 3, 4, 5, 6, 7"},
                      {"dwell", "2.0"}});
    add("scenario", {{"masses", "0.2, 0.54, 1.0"}, {"controllers", "PD, PDg"}});
  } else if (name == "trajectory") {
    add("load", load_section("gravity", "1.1"));
    add("reference",
        {{"waypoints", "0, 7, -8, 0"}, {"leg_duration", "2.0"}, {"t0", "0.5"}, {"tail", "0.5"}});
    add("scenario", {{"controllers", "PD, PDg"}, {"unloaded", "true"}});
  } else if (name == "beam-step") {
    add("load", load_section("beam", "0"));
    add("reference", {{"at", "0.5"}, {"hold", "2.5"}});
    add("scenario", {{"heights", "2, 3"}, {"controllers", "PD, PID"}});
  } else if (name == "beam-trajectory") {
    add("load", load_section("beam", "0"));
    add("reference",
        {{"waypoints", "0, 15, 0"}, {"leg_duration", "2.0"}, {"t0", "0.5"}, {"tail", "0.5"}});
    add("scenario", {{"controllers", "PD"}});
  } else if (name == "disturbance") {
    Entries load = load_section("pulses", "0");
    for (auto& [k, v] : load) {
      if (k == "pulses") {
        v = "1.0:0.05:0.005, 2.25:0.05:-0.005, 3.5:0.05:0.005, "
            "4.75:0.05:0.02, 6.0:0.05:-0.02, 7.25:0.05:0.02";
      }
    }
    add("load", load);
    add("reference", {{"hold_mm", "0"}});
    add("scenario", {{"duration", "9.0"}, {"controllers", "PD"}, {"low_torque", "0.01"}});
    add("detector", {{"velocity_threshold", "250"},
                     {"min_consecutive", "5"},
                     {"current_threshold", "0.15"},
                     {"window", "16"},
                     {"baseline_duration", "0.5"},
                     {"merge_gap", "0.05"},
                     {"match_margin", "0.1"}});
  } else {
    throw Error(ErrorCode::Config, "unknown scenario '" + name + "'");
  }
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw Error(ErrorCode::Config, "key '" + key + "': expected a number, got '" + text + "'");
  }
  return value;
}

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"tune",       "step",            "staircase",
                                              "trajectory", "beam-step",       "beam-trajectory",
                                              "disturbance"};
  return names;
}

Config Config::preset(const std::string& scenario) {
  Config c;
  c.scenario_ = scenario;
  for (const auto& [section, entries] : preset_sections(scenario)) {
    pt::ptree node;
    for (const auto& [k, v] : entries) node.push_back({k, pt::ptree(v)});
    c.tree_.push_back({section, node});
  }
  return c;
}

void Config::set(const std::string& key, const std::string& value) {
  const auto dot = key.find('.');
  if (dot == std::string::npos || key.find('.', dot + 1) != std::string::npos) {
    throw Error(ErrorCode::Config, "config key '" + key + "' must look like section.name");
  }
  auto section = tree_.get_child_optional(pt::ptree::path_type(key.substr(0, dot), '\0'));
  if (!section) {
    throw Error(ErrorCode::Config, "unknown section '" + key.substr(0, dot) + "' for scenario " +
                                       scenario_);
  }
  auto entry = section->get_child_optional(pt::ptree::path_type(key.substr(dot + 1), '\0'));
  if (!entry) {
    throw Error(ErrorCode::Config, "unknown key '" + key + "' for scenario " + scenario_);
  }
  entry->put_value(trim(value));
}

void Config::set_assignment(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw Error(ErrorCode::Config, "override '" + assignment + "' must look like key=value");
  }
  set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

void Config::merge_text(const std::string& ini_text) {
  pt::ptree parsed;
  std::istringstream in(ini_text);
  try {
    pt::read_ini(in, parsed);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::Config, std::string("config parse error: ") + e.what());
  }
  for (const auto& [section, node] : parsed) {
    if (node.empty()) {
      throw Error(ErrorCode::Config, "config key '" + section + "' is outside any section");
    }
    for (const auto& [key, value] : node) set(section + "." + key, value.data());
  }
}

void Config::merge_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, "cannot read config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  merge_text(buffer.str());
}

bool Config::has(const std::string& key) const {
  const auto dot = key.find('.');
  if (dot == std::string::npos) return false;
  auto section = tree_.get_child_optional(pt::ptree::path_type(key.substr(0, dot), '\0'));
  return section &&
         section->get_child_optional(pt::ptree::path_type(key.substr(dot + 1), '\0')).has_value();
}

std::string Config::text(const std::string& key) const {
  if (!has(key)) throw Error(ErrorCode::Config, "missing config key '" + key + "'");
  const auto dot = key.find('.');
  return tree_.get_child(pt::ptree::path_type(key.substr(0, dot), '\0'))
      .get_child(pt::ptree::path_type(key.substr(dot + 1), '\0'))
      .data();
}

double Config::number(const std::string& key) const { return parse_double(key, text(key)); }

std::int64_t Config::integer(const std::string& key) const {
  const std::string t = trim(text(key));
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw Error(ErrorCode::Config, "key '" + key + "': expected an integer, got '" + t + "'");
  }
  return v;
}

std::uint64_t Config::unsigned_integer(const std::string& key) const {
  const std::string t = trim(text(key));
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw Error(ErrorCode::Config,
                "key '" + key + "': expected an unsigned integer, got '" + t + "'");
  }
  return v;
}

std::vector<double> Config::numbers(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split(text(key), ',')) out.push_back(parse_double(key, item));
  return out;
}

std::vector<std::string> Config::words(const std::string& key) const {
  return split(text(key), ',');
}

std::string Config::echo() const {
  std::ostringstream out;
  out << "; actmod " << kCodeVersion << " scenario=" << scenario_ << "\n";
  for (const auto& [section, node] : tree_) {
    out << "\n[" << section << "]\n";
    for (const auto& [key, value] : node) out << key << " = " << value.data() << "\n";
  }
  return out.str();
}

std::uint64_t Config::hash() const { return fnv1a64(echo()); }

}  // namespace actmod
