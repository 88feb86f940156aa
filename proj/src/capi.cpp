#include "actmod/actmod.h"

#include <cstring>
#include <exception>
#include <string>

#include "actmod/actuator.hpp"
#include "actmod/bus.hpp"
#include "actmod/config.hpp"
#include "actmod/error.hpp"
#include "actmod/experiments.hpp"
#include "actmod/proprioception.hpp"
#include "actmod/trajectory.hpp"

struct actmod_config {
  actmod::Config config;
};

struct actmod_report {
  actmod::ExperimentResult result;
};

struct actmod_plant {
  actmod::ActuatorParams params;
  actmod::PlantState state;
};

namespace {

thread_local std::string last_error;

actmod_status to_status(actmod::ErrorCode code) {
  using actmod::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return ACTMOD_E_INVALID_ARGUMENT;
    case ErrorCode::NonFinite: return ACTMOD_E_NON_FINITE;
    case ErrorCode::Unstable: return ACTMOD_E_UNSTABLE;
    case ErrorCode::NoOscillation: return ACTMOD_E_NO_OSCILLATION;
    case ErrorCode::CrcMismatch: return ACTMOD_E_CRC_MISMATCH;
    case ErrorCode::RangeOverflow: return ACTMOD_E_RANGE_OVERFLOW;
    case ErrorCode::UndefinedMetric: return ACTMOD_E_UNDEFINED_METRIC;
    case ErrorCode::Config: return ACTMOD_E_CONFIG;
    case ErrorCode::Io: return ACTMOD_E_IO;
  }
  return ACTMOD_E_INTERNAL;
}

actmod_status fail(actmod_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <class F>
actmod_status guarded(F&& body) noexcept {
  try {
    body();
    return ACTMOD_OK;
  } catch (const actmod::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::exception& e) {
    return fail(ACTMOD_E_INTERNAL, e.what());
  } catch (...) {
    return fail(ACTMOD_E_INTERNAL, "unknown exception");
  }
}

actmod_status copy_out(const std::string& text, char* buffer, size_t capacity, size_t* needed) {
  if (needed) *needed = text.size();
  if (buffer && capacity > 0) {
    const size_t n = text.size() < capacity - 1 ? text.size() : capacity - 1;
    std::memcpy(buffer, text.data(), n);
    buffer[n] = '\0';
  }
  if (buffer && capacity <= text.size()) {
    return fail(ACTMOD_E_BUFFER_TOO_SMALL, "output truncated");
  }
  return ACTMOD_OK;
}

actmod::ActuatorParams from_c(const actmod_params& p) {
  actmod::ActuatorParams out;
  out.kt = p.kt;
  out.inertia = p.inertia;
  out.viscous = p.viscous;
  out.coulomb = p.coulomb;
  out.cog_amplitude = p.cog_amplitude;
  out.pole_pairs = p.pole_pairs;
  out.gear_ratio = p.gear_ratio;
  out.drum_radius = p.drum_radius;
  out.encoder_cpr = p.encoder_cpr;
  out.current_limit = p.current_limit;
  out.current_loop_tau = p.current_loop_tau;
  out.validate();
  return out;
}

actmod_metrics to_c(const actmod::Metrics& m) {
  actmod_metrics out{};
  out.has_overshoot = m.overshoot_percent.has_value();
  out.overshoot_percent = m.overshoot_percent.value_or(0.0);
  out.has_rise_time = m.rise_time_s.has_value();
  out.rise_time_s = m.rise_time_s.value_or(0.0);
  out.has_settling_time = m.settling_time_s.has_value();
  out.settling_time_s = m.settling_time_s.value_or(0.0);
  out.steady_state_error_mm = m.steady_state_error_mm;
  out.rms_tracking_error_mm = m.rms_tracking_error_mm;
  return out;
}

#define ACTMOD_REQUIRE(cond)                                                      \
  do {                                                                            \
    if (!(cond)) return fail(ACTMOD_E_INVALID_ARGUMENT, "invalid argument: " #cond); \
  } while (0)

}  // namespace

extern "C" {

const char* actmod_version(void) { return actmod::kCodeVersion; }

const char* actmod_status_string(actmod_status status) {
  switch (status) {
    case ACTMOD_OK: return "ok";
    case ACTMOD_E_BUFFER_TOO_SMALL: return "buffer too small";
    case ACTMOD_E_INTERNAL: return "internal error";
    default:
      if (status >= ACTMOD_E_INVALID_ARGUMENT && status <= ACTMOD_E_IO) {
        return actmod::to_string(static_cast<actmod::ErrorCode>(status));
      }
      return "unknown status";
  }
}

const char* actmod_last_error(void) { return last_error.c_str(); }

size_t actmod_scenario_count(void) { return actmod::scenario_names().size(); }

const char* actmod_scenario_name(size_t index) {
  const auto& names = actmod::scenario_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

actmod_status actmod_config_preset(const char* scenario, actmod_config** out) {
  ACTMOD_REQUIRE(scenario && out);
  *out = nullptr;
  return guarded([&] { *out = new actmod_config{actmod::Config::preset(scenario)}; });
}

actmod_status actmod_config_load_file(actmod_config* config, const char* path) {
  ACTMOD_REQUIRE(config && path);
  return guarded([&] { config->config.merge_file(path); });
}

actmod_status actmod_config_set(actmod_config* config, const char* key, const char* value) {
  ACTMOD_REQUIRE(config && key && value);
  return guarded([&] { config->config.set(key, value); });
}

actmod_status actmod_config_get(const actmod_config* config, const char* key, char* buffer,
                                size_t capacity, size_t* needed) {
  ACTMOD_REQUIRE(config && key);
  std::string value;
  const actmod_status s = guarded([&] { value = config->config.text(key); });
  if (s != ACTMOD_OK) return s;
  return copy_out(value, buffer, capacity, needed);
}

actmod_status actmod_config_echo(const actmod_config* config, char* buffer, size_t capacity,
                                 size_t* needed) {
  ACTMOD_REQUIRE(config);
  return copy_out(config->config.echo(), buffer, capacity, needed);
}

void actmod_config_free(actmod_config* config) { delete config; }

actmod_status actmod_run(const actmod_config* config, const char* out_dir,
                         actmod_report** out) {
  ACTMOD_REQUIRE(config && out);
  *out = nullptr;
  return guarded([&] {
    auto report = std::make_unique<actmod_report>();
    report->result = actmod::run_experiment(config->config);
    if (out_dir) actmod::write_artifacts(report->result, out_dir);
    *out = report.release();
  });
}

size_t actmod_report_run_count(const actmod_report* report) {
  return report ? report->result.runs.size() : 0;
}

const char* actmod_report_run_label(const actmod_report* report, size_t run) {
  if (!report || run >= report->result.runs.size()) return nullptr;
  return report->result.runs[run].label.c_str();
}

size_t actmod_report_row_count(const actmod_report* report, size_t run) {
  if (!report || run >= report->result.runs.size()) return 0;
  return report->result.runs[run].record.rows.size();
}

actmod_status actmod_report_metrics(const actmod_report* report, size_t run,
                                    actmod_metrics* out) {
  ACTMOD_REQUIRE(report && out && run < report->result.runs.size());
  *out = to_c(report->result.runs[run].metrics.front().metrics);
  return ACTMOD_OK;
}

actmod_status actmod_report_run_csv(const actmod_report* report, size_t run, char* buffer,
                                    size_t capacity, size_t* needed) {
  ACTMOD_REQUIRE(report && run < report->result.runs.size());
  return copy_out(actmod::to_csv(report->result.runs[run].record), buffer, capacity, needed);
}

size_t actmod_report_event_count(const actmod_report* report, size_t run) {
  if (!report || run >= report->result.runs.size()) return 0;
  return report->result.runs[run].events.size();
}

actmod_status actmod_report_event(const actmod_report* report, size_t run, size_t index,
                                  actmod_event* out) {
  ACTMOD_REQUIRE(report && out && run < report->result.runs.size());
  const auto& events = report->result.runs[run].events;
  ACTMOD_REQUIRE(index < events.size());
  const auto& e = events[index];
  *out = actmod_event{e.t_start, e.t_end, e.peak,
                      e.channel == actmod::DetectionChannel::Velocity ? 0 : 1};
  return ACTMOD_OK;
}

actmod_status actmod_report_tuning(const actmod_report* report, actmod_tuning* out) {
  ACTMOD_REQUIRE(report && out);
  if (!report->result.tuning) {
    return fail(ACTMOD_E_INVALID_ARGUMENT, "report has no tuning result");
  }
  const auto& t = *report->result.tuning;
  *out = actmod_tuning{t.ultimate_gain, t.ultimate_period, t.p.kp,  t.pd.kp,
                       t.pd.kd,         t.pid.kp,          t.pid.ki, t.pid.kd};
  return ACTMOD_OK;
}

void actmod_report_free(actmod_report* report) { delete report; }

void actmod_params_default(actmod_params* out) {
  if (!out) return;
  const actmod::ActuatorParams p;
  *out = actmod_params{p.kt,          p.inertia,    p.viscous,     p.coulomb,
                       p.cog_amplitude, p.pole_pairs, p.gear_ratio, p.drum_radius,
                       p.encoder_cpr, p.current_limit, p.current_loop_tau};
}

actmod_status actmod_plant_new(const actmod_params* params, actmod_plant** out) {
  ACTMOD_REQUIRE(params && out);
  *out = nullptr;
  return guarded([&] { *out = new actmod_plant{from_c(*params), {}}; });
}

actmod_status actmod_plant_step(actmod_plant* plant, double command_current,
                                double joint_torque, double dt) {
  ACTMOD_REQUIRE(plant);
  return guarded([&] {
    actmod::require_finite(command_current, "command current");
    actmod::require_finite(joint_torque, "joint torque");
    plant->state =
        actmod::step_physics(plant->state, command_current, joint_torque, plant->params, dt);
  });
}

actmod_status actmod_plant_state_get(const actmod_plant* plant, actmod_plant_state* out) {
  ACTMOD_REQUIRE(plant && out);
  const auto& s = plant->state;
  *out = actmod_plant_state{s.theta, s.omega, s.current, s.encoder_count, s.time};
  return ACTMOD_OK;
}

actmod_status actmod_plant_state_set(actmod_plant* plant, const actmod_plant_state* state) {
  ACTMOD_REQUIRE(plant && state);
  return guarded([&] {
    actmod::require_finite(state->theta, "theta");
    actmod::require_finite(state->omega, "omega");
    actmod::require_finite(state->current, "current");
    actmod::require_finite(state->time, "time");
    actmod::PlantState s;
    s.theta = state->theta;
    s.omega = state->omega;
    s.current = state->current;
    s.time = state->time;
    s.encoder_count = actmod::quantize_encoder(s.theta, plant->params);
    plant->state = s;
  });
}

void actmod_plant_free(actmod_plant* plant) { delete plant; }

actmod_status actmod_counts_from_tendon(const actmod_params* params, double delta_mm,
                                        int64_t* counts) {
  ACTMOD_REQUIRE(params && counts);
  return guarded([&] { *counts = actmod::counts_from_tendon(delta_mm, from_c(*params)); });
}

actmod_status actmod_tendon_from_counts(const actmod_params* params, int64_t counts,
                                        double* delta_mm) {
  ACTMOD_REQUIRE(params && delta_mm);
  return guarded([&] { *delta_mm = actmod::tendon_from_counts(counts, from_c(*params)); });
}

actmod_status actmod_estimate_load(const actmod_params* params, double mean_current,
                                   double* tension_n) {
  ACTMOD_REQUIRE(params && tension_n);
  return guarded(
      [&] { *tension_n = actmod::estimate_load(mean_current, from_c(*params)).tension_n; });
}

actmod_status actmod_smooth_evaluate(double start_mm, double end_mm, double t0, double duration,
                                     double t, double* position, double* velocity) {
  ACTMOD_REQUIRE(position && velocity);
  return guarded([&] {
    const actmod::ReferenceSignal ref(actmod::SmoothRef{start_mm, end_mm, t0, duration});
    actmod::validate(ref);
    actmod::require_finite(t, "t");
    const auto p = actmod::evaluate(ref, t);
    *position = p.position;
    *velocity = p.velocity;
  });
}

uint16_t actmod_crc16(const uint8_t* bytes, size_t length) {
  if (!bytes) return actmod::bus::crc16_ccitt_false({});
  return actmod::bus::crc16_ccitt_false(std::span<const uint8_t>(bytes, length));
}

actmod_status actmod_command_encode(const actmod_command_frame* frame, uint8_t payload[8]) {
  ACTMOD_REQUIRE(frame && payload);
  const actmod::bus::CommandFrame f{frame->module_id, frame->sequence, frame->current_ma,
                                    frame->flags};
  const auto p = actmod::bus::encode(f);
  std::memcpy(payload, p.data(), p.size());
  return ACTMOD_OK;
}

actmod_status actmod_command_decode(const uint8_t payload[8], actmod_command_frame* out) {
  ACTMOD_REQUIRE(payload && out);
  return guarded([&] {
    const auto f = actmod::bus::decode_command(std::span<const uint8_t, 8>(payload, 8));
    *out = actmod_command_frame{f.module_id, f.sequence, f.current_ma, f.flags};
  });
}

actmod_status actmod_status_encode(const actmod_status_frame* frame, uint8_t payload_a[8],
                                   uint8_t payload_b[8]) {
  ACTMOD_REQUIRE(frame && payload_a && payload_b);
  const actmod::bus::StatusFrame f{frame->module_id, frame->sequence, frame->position,
                                   frame->velocity, frame->current_ma};
  const auto p = actmod::bus::encode(f);
  std::memcpy(payload_a, p.a.data(), 8);
  std::memcpy(payload_b, p.b.data(), 8);
  return ACTMOD_OK;
}

actmod_status actmod_status_decode(uint8_t module_id, const uint8_t payload_a[8],
                                   const uint8_t payload_b[8], actmod_status_frame* out) {
  ACTMOD_REQUIRE(payload_a && payload_b && out);
  return guarded([&] {
    const auto f = actmod::bus::decode_status(module_id, std::span<const uint8_t, 8>(payload_a, 8),
                                              std::span<const uint8_t, 8>(payload_b, 8));
    *out = actmod_status_frame{f.module_id, f.sequence, f.position, f.velocity, f.current_ma};
  });
}

}  // extern "C"
