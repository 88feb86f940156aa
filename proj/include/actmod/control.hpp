#pragma once

#include <optional>
#include <string>

#include "actmod/actuator.hpp"

namespace actmod {

enum class ControllerKind { P, PD, PID, PDg };

const char* to_string(ControllerKind kind) noexcept;
ControllerKind parse_controller_kind(const std::string& name);

/// Position gains in tendon space: error in mm, output in A.
struct GainSet {
  double kp = 0.0;  // A/mm
  double ki = 0.0;  // A/(mm*s)
  double kd = 0.0;  // A*s/mm
  std::optional<double> feedforward_current;  // A, constant g(theta) term
  double derivative_filter_alpha = 0.5;       // weight of the newest sample
};

struct ControllerSpec {
  ControllerKind kind = ControllerKind::PD;
  GainSet gains;
  double integrator_limit = 6.0;  // A, clamp on the integral term

  void validate() const;
};

struct ControlOutput {
  double command = 0.0;  // A
  double integral_term = 0.0;
  bool saturated = false;
};

/// Error-driven position controller running once per high-level tick. Terms
/// not used by the selected kind are ignored: P uses kp only, PD adds kd,
/// PID adds ki, PDg is PD plus the constant feedforward current.
class PositionController {
 public:
  PositionController(ControllerSpec spec, ActuatorParams params);

  ControlOutput step(double setpoint_mm, double setpoint_velocity_mm_s,
                     const Measurement& measurement, double dt);

  const ControllerSpec& spec() const noexcept { return spec_; }
  void reset() noexcept;

 private:
  ControllerSpec spec_;
  ActuatorParams params_;
  double integral_term_ = 0.0;
  double filtered_error_rate_ = 0.0;
  double previous_position_ = 0.0;
  bool primed_ = false;
};

/// Predicted PD steady-state error (mm) under a hanging mass: the holding
/// current m*g*r/(N*kt) divided by kp.
double steady_state_error_pd(double mass, const GainSet& gains, const ActuatorParams& params);

}  // namespace actmod
