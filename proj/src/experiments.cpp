#include "actmod/experiments.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "actmod/error.hpp"

namespace actmod {

namespace fs = std::filesystem;

ActuatorParams plant_from(const Config& c) {
  ActuatorParams p;
  p.kt = c.number("plant.kt");
  p.inertia = c.number("plant.inertia");
  p.viscous = c.number("plant.viscous");
  p.coulomb = c.number("plant.coulomb");
  p.cog_amplitude = c.number("plant.cog_amplitude");
  p.pole_pairs = static_cast<int>(c.integer("plant.pole_pairs"));
  p.gear_ratio = c.number("plant.gear_ratio");
  p.drum_radius = c.number("plant.drum_radius");
  p.encoder_cpr = static_cast<int>(c.integer("plant.encoder_cpr"));
  p.current_limit = c.number("plant.current_limit");
  p.current_loop_tau = c.number("plant.current_loop_tau");
  p.validate();
  return p;
}

SimConfig sim_from(const Config& c) {
  SimConfig s;
  s.dt_low = c.number("sim.dt_low");
  s.rate_ratio = static_cast<int>(c.integer("sim.rate_ratio"));
  s.seed = c.unsigned_integer("sim.seed");
  s.noise.current_sense_sigma = c.number("sim.current_sense_sigma");
  s.noise.torque_disturbance_sigma = c.number("sim.torque_disturbance_sigma");
  s.latency_ticks = static_cast<int>(c.integer("sim.latency_ticks"));
  const auto id = c.integer("sim.module_id");
  if (id < 0 || id > 255) throw Error(ErrorCode::Config, "sim.module_id must fit in 8 bits");
  s.module_id = static_cast<std::uint8_t>(id);
  s.duration = 0.0;
  return s;
}

LoadModel load_from(const Config& c) {
  const std::string kind = c.text("load.kind");
  LoadModel load;
  if (kind == "none") {
    load = NullLoad{};
  } else if (kind == "gravity") {
    load = GravityLoad{c.number("load.mass")};
  } else if (kind == "beam") {
    load = BeamLoad{c.number("load.flexural_rigidity"), c.number("load.tendon_offset"),
                    c.number("load.length")};
  } else if (kind == "pulses") {
    PulseLoad pulses;
    for (const auto& item : c.words("load.pulses")) {
      std::vector<double> parts;
      std::size_t pos = 0;
      for (;;) {
        const auto next = item.find(':', pos);
        const std::string field =
            item.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
        if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
          throw Error(ErrorCode::Config, "load.pulses: bad number in '" + item + "'");
        }
        parts.push_back(value);
        if (next == std::string::npos) break;
        pos = next + 1;
      }
      if (parts.size() != 3) {
        throw Error(ErrorCode::Config, "load.pulses entries must be start:duration:torque");
      }
      pulses.schedule.push_back({parts[0], parts[1], parts[2]});
    }
    load = pulses;
  } else {
    throw Error(ErrorCode::Config, "load.kind must be none, gravity, beam or pulses");
  }
  try {
    validate(load);
  } catch (const Error& e) {
    throw Error(ErrorCode::Config, std::string("load: ") + e.what());
  }
  return load;
}

DetectorConfig detector_from(const Config& c) {
  DetectorConfig d;
  if (!c.has("detector.velocity_threshold")) return d;
  d.velocity_threshold = c.number("detector.velocity_threshold");
  d.min_consecutive = static_cast<int>(c.integer("detector.min_consecutive"));
  d.current_threshold = c.number("detector.current_threshold");
  d.window = static_cast<int>(c.integer("detector.window"));
  d.baseline_duration = c.number("detector.baseline_duration");
  d.merge_gap = c.number("detector.merge_gap");
  d.validate();
  return d;
}

namespace {

std::string lower(std::string s) {
  for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

std::string format_label_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

double mass_of(const LoadModel& load) {
  if (const auto* g = std::get_if<GravityLoad>(&load)) return g->mass;
  return 0.0;
}

ControllerSpec controller_from(const Config& c, ControllerKind kind, const LoadModel& load,
                               const ActuatorParams& plant) {
  ControllerSpec spec;
  spec.kind = kind;
  spec.integrator_limit = c.number("controller.integrator_limit");
  const char* section = kind == ControllerKind::P     ? "p_gains"
                        : kind == ControllerKind::PID ? "pid_gains"
                                                      : "pd_gains";
  const std::string s = section;
  spec.gains.kp = c.number(s + ".kp");
  if (c.has(s + ".ki")) spec.gains.ki = c.number(s + ".ki");
  if (c.has(s + ".kd")) spec.gains.kd = c.number(s + ".kd");
  spec.gains.derivative_filter_alpha = c.number("controller.derivative_filter_alpha");
  if (kind == ControllerKind::PDg) {
    const std::string ff = c.text("controller.feedforward");
    spec.gains.feedforward_current = ff == "auto" ? holding_current(mass_of(load) * kGravity, plant)
                                                  : c.number("controller.feedforward");
  }
  try {
    spec.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::Config, std::string("controller: ") + e.what());
  }
  return spec;
}

std::vector<ControllerKind> kinds_from(const Config& c) {
  std::vector<ControllerKind> kinds;
  for (const auto& w : c.words("scenario.controllers")) {
    try {
      kinds.push_back(parse_controller_kind(w));
    } catch (const Error& e) {
      throw Error(ErrorCode::Config, e.what());
    }
  }
  if (kinds.empty()) throw Error(ErrorCode::Config, "scenario.controllers is empty");
  return kinds;
}

Scenario base_scenario(const Config& c) {
  Scenario s;
  s.sim = sim_from(c);
  s.plant = plant_from(c);
  s.load = load_from(c);
  return s;
}

double smooth_duration(const Config& c) {
  const auto waypoints = c.numbers("reference.waypoints");
  return c.number("reference.t0") +
         static_cast<double>(waypoints.size() - 1) * c.number("reference.leg_duration") +
         c.number("reference.tail");
}

}  // namespace

std::vector<std::pair<std::string, Scenario>> build_runs(const Config& c) {
  const std::string& name = c.scenario();
  std::vector<std::pair<std::string, Scenario>> runs;
  const Scenario base = base_scenario(c);
  auto add = [&](std::string label, Scenario s, ControllerKind kind) {
    s.controller = controller_from(c, kind, s.load, s.plant);
    runs.emplace_back(std::move(label), std::move(s));
  };

  if (name == "step") {
    for (auto kind : kinds_from(c)) {
      Scenario s = base;
      s.reference = StepRef{c.number("reference.height"), c.number("reference.at")};
      s.sim.duration = c.number("reference.at") + c.number("reference.hold");
      add(lower(to_string(kind)), s, kind);
    }
  } else if (name == "staircase") {
    StaircaseRef stairs{c.numbers("reference.levels"), c.number("reference.dwell")};
    for (double mass : c.numbers("scenario.masses")) {
      for (auto kind : kinds_from(c)) {
        Scenario s = base;
        s.load = GravityLoad{mass};
        validate(s.load);
        s.reference = stairs;
        s.sim.duration = static_cast<double>(stairs.levels.size()) * stairs.dwell;
        add(lower(to_string(kind)) + "-m" + format_label_number(mass), s, kind);
      }
    }
  } else if (name == "trajectory" || name == "beam-trajectory") {
    const auto ref = smooth_through(c.numbers("reference.waypoints"),
                                    c.number("reference.leg_duration"), c.number("reference.t0"));
    const bool unloaded = c.has("scenario.unloaded") && c.text("scenario.unloaded") == "true";
    for (int pass = unloaded ? 0 : 1; pass < 2; ++pass) {
      for (auto kind : kinds_from(c)) {
        Scenario s = base;
        if (pass == 0) s.load = NullLoad{};
        s.reference = ref;
        s.sim.duration = smooth_duration(c);
        std::string label = lower(to_string(kind));
        if (unloaded) label += pass == 0 ? "-unloaded" : "-loaded";
        add(label, s, kind);
      }
    }
  } else if (name == "beam-step") {
    for (double height : c.numbers("scenario.heights")) {
      for (auto kind : kinds_from(c)) {
        Scenario s = base;
        s.reference = StepRef{height, c.number("reference.at")};
        s.sim.duration = c.number("reference.at") + c.number("reference.hold");
        add(lower(to_string(kind)) + "-" + format_label_number(height) + "mm", s, kind);
      }
    }
  } else if (name == "disturbance") {
    for (auto kind : kinds_from(c)) {
      Scenario s = base;
      s.reference = StepRef{c.number("reference.hold_mm"), 0.0};
      s.sim.duration = c.number("scenario.duration");
      add(lower(to_string(kind)), s, kind);
    }
  } else if (name == "tune") {
    // Runs are built after tuning; see run_experiment.
  } else {
    throw Error(ErrorCode::Config, "unknown scenario '" + name + "'");
  }
  return runs;
}

namespace {

std::vector<SegmentMetrics> segment_metrics(const std::string& scenario, const Scenario& s,
                                            const RunRecord& record) {
  std::vector<SegmentMetrics> out;
  const double end = record.rows.empty() ? 0.0 : record.rows.back().t + record.meta.high_period;
  Segment all{0.0, end, std::nullopt, std::nullopt};
  if (const auto* step = std::get_if<StepRef>(&s.reference.value())) {
    if (scenario != "disturbance") all = Segment{step->at, end, 0.0, step->height};
  }
  out.push_back({"all", all, compute_metrics(record, all)});
  if (const auto* stairs = std::get_if<StaircaseRef>(&s.reference.value())) {
    double from = 0.0;
    for (std::size_t i = 0; i < stairs->levels.size(); ++i) {
      const double to = stairs->levels[i];
      Segment seg{static_cast<double>(i) * stairs->dwell,
                  static_cast<double>(i + 1) * stairs->dwell, from, to};
      out.push_back({"level-" + std::to_string(i), seg, compute_metrics(record, seg)});
      from = to;
    }
  }
  return out;
}

LabeledRun execute(const Config& c, std::string label, Scenario s) {
  LabeledRun run;
  run.label = std::move(label);
  run.scenario = std::move(s);
  run.record = run_scenario(run.scenario);
  run.record.meta.scenario = c.scenario();
  run.record.meta.label = run.label;
  run.record.meta.config_hash = c.hash();
  run.metrics = segment_metrics(c.scenario(), run.scenario, run.record);
  if (c.scenario() == "disturbance") {
    run.events = detect_disturbances(run.record, detector_from(c));
  }
  return run;
}

}  // namespace

ExperimentResult run_experiment(const Config& c) {
  ExperimentResult result;
  result.scenario = c.scenario();
  result.config_echo = c.echo();

  if (c.scenario() == "tune") {
    Scenario base = base_scenario(c);
    TuningOptions options;
    options.kp_start = c.number("scenario.kp_start");
    options.kp_growth = c.number("scenario.kp_growth");
    options.kp_ceiling = c.number("scenario.kp_ceiling");
    options.peaks_considered = static_cast<int>(c.integer("scenario.peaks"));
    options.decay_low = c.number("scenario.decay_low");
    options.decay_high = c.number("scenario.decay_high");
    options.settle_before_step = c.number("reference.at");
    options.response_duration = c.number("reference.hold");
    const double step = c.number("reference.height");
    result.tuning = ziegler_nichols_tune(base, step, options);

    for (auto kind : kinds_from(c)) {
      Scenario s = base;
      s.controller.kind = kind;
      s.controller.integrator_limit = c.number("controller.integrator_limit");
      s.controller.gains = kind == ControllerKind::P    ? result.tuning->p
                           : kind == ControllerKind::PD ? result.tuning->pd
                                                        : result.tuning->pid;
      if (kind == ControllerKind::PDg) {
        s.controller.gains = result.tuning->pd;
        s.controller.gains.feedforward_current =
            holding_current(mass_of(s.load) * kGravity, s.plant);
      }
      s.controller.gains.derivative_filter_alpha = c.number("controller.derivative_filter_alpha");
      s.reference = StepRef{step, options.settle_before_step};
      s.sim.duration = options.settle_before_step + options.response_duration;
      result.runs.push_back(execute(c, "tuned-" + lower(to_string(kind)), s));
    }
    return result;
  }

  for (auto& [label, scenario] : build_runs(c)) {
    result.runs.push_back(execute(c, label, scenario));
  }
  if (c.scenario() == "disturbance") {
    result.injected = std::get<PulseLoad>(load_from(c)).schedule;
  }
  return result;
}

namespace {

void append_optional(std::string& out, const std::optional<double>& v) {
  out += ',';
  if (v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", *v);
    out += buf;
  }
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

}  // namespace

std::string metrics_to_csv(const ExperimentResult& result) {
  std::string out =
      "run,segment,t_begin,t_end,overshoot_percent,rise_time_s,settling_time_s,"
      "steady_state_error_mm,rms_tracking_error_mm\n";
  for (const auto& run : result.runs) {
    for (const auto& m : run.metrics) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "%s,%s,%.9g,%.9g", run.label.c_str(), m.name.c_str(),
                    m.segment.t_begin, m.segment.t_end);
      out += buf;
      append_optional(out, m.metrics.overshoot_percent);
      append_optional(out, m.metrics.rise_time_s);
      append_optional(out, m.metrics.settling_time_s);
      append_optional(out, m.metrics.steady_state_error_mm);
      append_optional(out, m.metrics.rms_tracking_error_mm);
      out += '\n';
    }
  }
  return out;
}

void write_artifacts(const ExperimentResult& result, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());

  write_file(dir / "config.ini", result.config_echo);
  write_file(dir / "metrics.csv", metrics_to_csv(result));

  std::string events = "run,t_start,t_end,channel,peak\n";
  for (const auto& run : result.runs) events += events_to_csv(run.events, run.label);
  write_file(dir / "events.csv", events);

  if (result.tuning) {
    const auto& t = *result.tuning;
    char buf[512];
    std::string tuning = "controller,kp,ki,kd,ultimate_gain,ultimate_period\n";
    for (const auto& [name, g] : {std::pair{"P", &t.p}, std::pair{"PD", &t.pd},
                                  std::pair{"PID", &t.pid}}) {
      std::snprintf(buf, sizeof buf, "%s,%.9g,%.9g,%.9g,%.9g,%.9g\n", name, g->kp, g->ki, g->kd,
                    t.ultimate_gain, t.ultimate_period);
      tuning += buf;
    }
    write_file(dir / "tuning.csv", tuning);
  }

  for (const auto& run : result.runs) {
    const fs::path run_dir = dir / run.label;
    fs::create_directories(run_dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create " + run_dir.string());
    write_file(run_dir / "run.csv", to_csv(run.record));
    const auto& m = run.record.meta;
    char hash[20];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(m.config_hash));
    nlohmann::ordered_json meta = {
        {"scenario", m.scenario},
        {"label", m.label},
        {"seed", m.seed},
        {"config_hash", hash},
        {"code_version", m.code_version},
        {"counts_per_mm", m.counts_per_mm},
        {"high_period_s", m.high_period},
        {"physics_steps", m.physics_steps},
        {"rows", run.record.rows.size()},
        {"saturated_ticks", m.saturated_ticks},
    };
    write_file(run_dir / "meta.json", meta.dump(2) + "\n");
  }
}

}  // namespace actmod
