// Command-line runner for the actuation-module scenarios. Talks to the
// library through the C API only.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "actmod/actmod.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 1;
constexpr int kExitRunFailure = 2;

int exit_code_for(actmod_status status) {
  switch (status) {
    case ACTMOD_OK: return kExitOk;
    case ACTMOD_E_INVALID_ARGUMENT:
    case ACTMOD_E_CONFIG: return kExitBadInput;
    default: return kExitRunFailure;
  }
}

int report_failure(const char* what, actmod_status status) {
  std::fprintf(stderr, "actmod: %s: %s (%s)\n", what, actmod_last_error(),
               actmod_status_string(status));
  return exit_code_for(status);
}

void print_optional(double value, int present) {
  if (present) {
    std::printf(" %10.4f", value);
  } else {
    std::printf(" %10s", "-");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic actuation-module simulator and experiment runner"};
  app.set_version_flag("--version", actmod_version());

  std::vector<std::string> scenarios;
  for (size_t i = 0; i < actmod_scenario_count(); ++i) scenarios.emplace_back(actmod_scenario_name(i));

  std::string scenario;
  std::string config_path;
  std::string out_dir = "out";
  std::vector<std::string> overrides;
  bool print_config = false;
  bool quiet = false;

  app.add_option("scenario", scenario, "Scenario to run")
      ->required()
      ->check(CLI::IsMember(scenarios));
  app.add_option("--config", config_path, "INI file overriding the scenario preset");
  auto* seed_opt = app.add_option("--seed", "Seed for all noise streams");
  app.add_option("--out", out_dir, "Artifact directory")->capture_default_str();
  app.add_option("--set", overrides, "Override one key, section.name=value")->take_all();
  app.add_flag("--print-config", print_config, "Print the resolved configuration and exit");
  app.add_flag("-q,--quiet", quiet, "Suppress the metrics summary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  actmod_config* config = nullptr;
  if (auto s = actmod_config_preset(scenario.c_str(), &config); s != ACTMOD_OK) {
    return report_failure("preset", s);
  }
  struct ConfigGuard {
    actmod_config* c;
    ~ConfigGuard() { actmod_config_free(c); }
  } config_guard{config};

  if (!config_path.empty()) {
    if (auto s = actmod_config_load_file(config, config_path.c_str()); s != ACTMOD_OK) {
      return report_failure(config_path.c_str(), s);
    }
  }
  for (const auto& assignment : overrides) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "actmod: --set expects key=value, got '%s'\n", assignment.c_str());
      return kExitBadInput;
    }
    const std::string key = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);
    if (auto s = actmod_config_set(config, key.c_str(), value.c_str()); s != ACTMOD_OK) {
      return report_failure("--set", s);
    }
  }
  if (seed_opt->count() > 0) {
    const std::string seed = seed_opt->as<std::string>();
    if (seed.empty() || seed.find_first_not_of("0123456789") != std::string::npos) {
      std::fprintf(stderr, "actmod: --seed expects an unsigned integer\n");
      return kExitBadInput;
    }
    if (auto s = actmod_config_set(config, "sim.seed", seed.c_str()); s != ACTMOD_OK) {
      return report_failure("--seed", s);
    }
  }

  if (print_config) {
    size_t needed = 0;
    actmod_config_echo(config, nullptr, 0, &needed);
    std::string text(needed + 1, '\0');
    actmod_config_echo(config, text.data(), text.size(), &needed);
    text.resize(needed);
    std::fputs(text.c_str(), stdout);
    return kExitOk;
  }

  actmod_report* report = nullptr;
  if (auto s = actmod_run(config, out_dir.c_str(), &report); s != ACTMOD_OK) {
    return report_failure(scenario.c_str(), s);
  }

  if (!quiet) {
    actmod_tuning tuning;
    if (actmod_report_tuning(report, &tuning) == ACTMOD_OK) {
      std::printf("Ku = %.6g A/mm, Tu = %.6g s\n", tuning.ultimate_gain, tuning.ultimate_period);
      std::printf("P   kp=%.6g\n", tuning.p_kp);
      std::printf("PD  kp=%.6g kd=%.6g\n", tuning.pd_kp, tuning.pd_kd);
      std::printf("PID kp=%.6g ki=%.6g kd=%.6g\n", tuning.pid_kp, tuning.pid_ki, tuning.pid_kd);
    }
    std::printf("%-18s %10s %10s %10s %10s %10s %7s\n", "run", "overshoot%", "rise_s",
                "settle_s", "ess_mm", "rms_mm", "events");
    for (size_t i = 0; i < actmod_report_run_count(report); ++i) {
      actmod_metrics m;
      actmod_report_metrics(report, i, &m);
      std::printf("%-18s", actmod_report_run_label(report, i));
      print_optional(m.overshoot_percent, m.has_overshoot);
      print_optional(m.rise_time_s, m.has_rise_time);
      print_optional(m.settling_time_s, m.has_settling_time);
      std::printf(" %10.4f %10.4f %7zu\n", m.steady_state_error_mm, m.rms_tracking_error_mm,
                  actmod_report_event_count(report, i));
    }
    std::printf("artifacts in %s\n", out_dir.c_str());
  }
  actmod_report_free(report);
  return kExitOk;
}
