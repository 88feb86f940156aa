#include "actmod/control.hpp"

#include <cctype>

#include <algorithm>
#include <cmath>

#include "actmod/error.hpp"
#include "actmod/loads.hpp"

namespace actmod {

const char* to_string(ControllerKind kind) noexcept {
  switch (kind) {
    case ControllerKind::P: return "P";
    case ControllerKind::PD: return "PD";
    case ControllerKind::PID: return "PID";
    case ControllerKind::PDg: return "PDg";
  }
  return "?";
}

ControllerKind parse_controller_kind(const std::string& name) {
  std::string upper = name;
  for (char& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  if (upper == "P") return ControllerKind::P;
  if (upper == "PD") return ControllerKind::PD;
  if (upper == "PID") return ControllerKind::PID;
  if (upper == "PDG") return ControllerKind::PDg;
  throw Error(ErrorCode::InvalidArgument, "unknown controller kind '" + name + "'");
}

void ControllerSpec::validate() const {
  const auto& g = gains;
  for (double v : {g.kp, g.ki, g.kd, g.derivative_filter_alpha, integrator_limit}) {
    require_finite(v, "controller parameter");
  }
  if (g.kp < 0 || g.ki < 0 || g.kd < 0)
    throw Error(ErrorCode::InvalidArgument, "controller gains must be >= 0");
  if (g.derivative_filter_alpha < 0 || g.derivative_filter_alpha > 1)
    throw Error(ErrorCode::InvalidArgument, "derivative_filter_alpha must be in [0, 1]");
  if (kind == ControllerKind::PDg) {
    if (!g.feedforward_current)
      throw Error(ErrorCode::InvalidArgument, "PDg requires a feedforward current");
    require_finite(*g.feedforward_current, "feedforward_current");
  }
  if (kind == ControllerKind::PID && g.ki > 0 && !(integrator_limit > 0))
    throw Error(ErrorCode::InvalidArgument, "integrator_limit must be > 0 when ki > 0");
}

PositionController::PositionController(ControllerSpec spec, ActuatorParams params)
    : spec_(std::move(spec)), params_(params) {
  spec_.validate();
  params_.validate();
}

void PositionController::reset() noexcept {
  integral_term_ = 0.0;
  filtered_error_rate_ = 0.0;
  previous_position_ = 0.0;
  primed_ = false;
}

ControlOutput PositionController::step(double setpoint_mm, double setpoint_velocity_mm_s,
                                       const Measurement& measurement, double dt) {
  if (!(dt > 0)) throw Error(ErrorCode::InvalidArgument, "dt must be > 0");
  const auto& g = spec_.gains;
  const double position = tendon_from_counts(measurement.encoder_count, params_);
  const double error = setpoint_mm - position;

  // Raw differenced counts are a coarse velocity at 1 kHz; low-pass them.
  const double measured_velocity = primed_ ? (position - previous_position_) / dt : 0.0;
  const double raw_rate = setpoint_velocity_mm_s - measured_velocity;
  filtered_error_rate_ = primed_ ? g.derivative_filter_alpha * raw_rate +
                                       (1.0 - g.derivative_filter_alpha) * filtered_error_rate_
                                 : raw_rate;
  previous_position_ = position;
  primed_ = true;

  double command = g.kp * error;
  if (spec_.kind != ControllerKind::P) command += g.kd * filtered_error_rate_;
  if (spec_.kind == ControllerKind::PID) {
    integral_term_ = std::clamp(integral_term_ + g.ki * error * dt, -spec_.integrator_limit,
                                spec_.integrator_limit);
    command += integral_term_;
  }
  if (spec_.kind == ControllerKind::PDg) command += *g.feedforward_current;

  ControlOutput out;
  out.integral_term = integral_term_;
  out.command = std::clamp(command, -params_.current_limit, params_.current_limit);
  out.saturated = out.command != command;
  return out;
}

double steady_state_error_pd(double mass, const GainSet& gains, const ActuatorParams& params) {
  if (!(gains.kp > 0)) throw Error(ErrorCode::InvalidArgument, "kp must be > 0");
  if (gains.ki != 0) throw Error(ErrorCode::InvalidArgument, "prediction assumes ki = 0");
  return holding_current(mass * kGravity, params) / gains.kp;
}

}  // namespace actmod
