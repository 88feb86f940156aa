#pragma once

#include <cstdint>
#include <deque>

#include "actmod/rng.hpp"

namespace actmod {

/// Constants of one actuation module: brushless motor, 4:1 gear pair,
/// optical encoder and winch drum. Rotational quantities are at the motor
/// shaft unless the name says otherwise.
struct ActuatorParams {
  // 1 kg of tendon load is held by exactly 1.0 A with this constant.
  // The KV300 datasheet value would be 60 / (2*pi*300) ~= 0.0318 N*m/A.
  double kt = 0.022071;          // N*m/A
  double inertia = 1e-5;         // kg*m^2, rotor plus gears
  double viscous = 1e-5;         // N*m*s/rad
  double coulomb = 5e-4;         // N*m
  double cog_amplitude = 2e-4;   // N*m
  int pole_pairs = 12;
  double gear_ratio = 4.0;
  double drum_radius = 0.009;    // m
  int encoder_cpr = 5000;        // counts per motor revolution
  double current_limit = 6.0;    // A
  double current_loop_tau = 5e-4;  // s, 0 means ideal tracking

  void validate() const;

  /// Tendon millimeters per motor radian.
  double mm_per_rad() const noexcept { return drum_radius * 1000.0 / gear_ratio; }
  double counts_per_rad() const noexcept;
  double counts_per_mm() const noexcept { return counts_per_rad() / mm_per_rad(); }
};

struct PlantState {
  double theta = 0.0;    // rad, motor shaft
  double omega = 0.0;    // rad/s
  double current = 0.0;  // A, actual winding current
  std::int64_t encoder_count = 0;
  double time = 0.0;     // s
};

/// Output-side view of the plant: joint after the gear pair and tendon on
/// the drum. Positive tendon length is tendon pulled onto the drum.
struct JointView {
  double joint_angle = 0.0;      // rad
  double joint_velocity = 0.0;   // rad/s
  double tendon_length = 0.0;    // mm
  double tendon_velocity = 0.0;  // mm/s
};

JointView joint_view(const PlantState& state, const ActuatorParams& params) noexcept;

/// Code-wheel edge count for a shaft angle (floor quantization).
std::int64_t quantize_encoder(double theta, const ActuatorParams& params) noexcept;

/// Smoothed sign used for Coulomb friction.
double smooth_sign(double omega) noexcept;
inline constexpr double kFrictionVelocityEps = 1e-3;  // rad/s

/// Motor-shaft angular acceleration for winding current `current` and an
/// external torque acting on the joint (reflected through the gear ratio).
double torque_balance(const PlantState& state, double current,
                      double external_joint_torque, const ActuatorParams& params);

/// Winding current after `dt` of first-order tracking toward the clamped
/// command.
double current_loop(double command, double current, const ActuatorParams& params,
                    double dt);

/// One semi-implicit Euler step. Current is advanced first; dissipative
/// torques (viscous and Coulomb) are evaluated at the new velocity, so the
/// step never injects energy through friction.
PlantState step_physics(const PlantState& state, double command_current,
                        double external_joint_torque, const ActuatorParams& params,
                        double dt);

std::int64_t counts_from_tendon(double delta_mm, const ActuatorParams& params);
double tendon_from_counts(std::int64_t counts, const ActuatorParams& params) noexcept;

struct NoiseConfig {
  double current_sense_sigma = 0.05;       // A
  double torque_disturbance_sigma = 0.0;   // N*m at the joint

  void validate() const;
};

struct Measurement {
  std::int64_t encoder_count = 0;
  double velocity_estimate = 0.0;  // counts/s, moving average
  double raw_velocity = 0.0;       // counts/s, single backward difference
  double sensed_current = 0.0;     // A
};

/// Encoder and current sensing sampled once per high-level tick.
class Sensor {
 public:
  static constexpr int kDefaultWindow = 16;

  Sensor(double sample_period, NoiseConfig noise, std::uint64_t seed,
         int window = kDefaultWindow);

  Measurement sample(const PlantState& state);

  const Substream& current_stream() const noexcept { return current_noise_; }

 private:
  double period_;
  NoiseConfig noise_;
  int window_;
  Substream current_noise_;
  // Last window_+1 counts, oldest first.
  std::deque<std::int64_t> history_;
};

}  // namespace actmod
