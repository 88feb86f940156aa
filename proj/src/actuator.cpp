#include "actmod/actuator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "actmod/error.hpp"

namespace actmod {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

}  // namespace

void ActuatorParams::validate() const {
  for (double v : {kt, inertia, viscous, coulomb, cog_amplitude, gear_ratio, drum_radius,
                   current_limit, current_loop_tau}) {
    require_finite(v, "actuator parameter");
  }
  require(kt > 0, "kt must be > 0");
  require(inertia > 0, "inertia must be > 0");
  require(gear_ratio > 0, "gear_ratio must be > 0");
  require(drum_radius > 0, "drum_radius must be > 0");
  require(encoder_cpr > 0, "encoder_cpr must be > 0");
  require(current_limit > 0, "current_limit must be > 0");
  require(viscous >= 0, "viscous must be >= 0");
  require(coulomb >= 0, "coulomb must be >= 0");
  require(cog_amplitude >= 0, "cog_amplitude must be >= 0");
  require(pole_pairs >= 0, "pole_pairs must be >= 0");
  require(current_loop_tau >= 0, "current_loop_tau must be >= 0");
}

double ActuatorParams::counts_per_rad() const noexcept {
  return encoder_cpr / (2.0 * std::numbers::pi);
}

JointView joint_view(const PlantState& state, const ActuatorParams& params) noexcept {
  JointView view;
  view.joint_angle = state.theta / params.gear_ratio;
  view.joint_velocity = state.omega / params.gear_ratio;
  view.tendon_length = state.theta * params.mm_per_rad();
  view.tendon_velocity = state.omega * params.mm_per_rad();
  return view;
}

std::int64_t quantize_encoder(double theta, const ActuatorParams& params) noexcept {
  return static_cast<std::int64_t>(std::floor(theta * params.counts_per_rad()));
}

double smooth_sign(double omega) noexcept {
  return std::tanh(omega / kFrictionVelocityEps);
}

double torque_balance(const PlantState& state, double current, double external_joint_torque,
                      const ActuatorParams& params) {
  require_finite(state.theta, "theta");
  require_finite(state.omega, "omega");
  require_finite(current, "current");
  require_finite(external_joint_torque, "external torque");
  const double torque = params.kt * current - params.viscous * state.omega -
                        params.coulomb * smooth_sign(state.omega) -
                        params.cog_amplitude * std::sin(params.pole_pairs * state.theta) +
                        external_joint_torque / params.gear_ratio;
  return torque / params.inertia;
}

double current_loop(double command, double current, const ActuatorParams& params,
                    double dt) {
  if (!(dt > 0)) throw Error(ErrorCode::InvalidArgument, "dt must be > 0");
  const double target = std::clamp(command, -params.current_limit, params.current_limit);
  if (params.current_loop_tau <= 0.0) return target;
  // Exact zero-order-hold discretization of di/dt = (target - i) / tau.
  const double decay = std::exp(-dt / params.current_loop_tau);
  return target + (current - target) * decay;
}

namespace {

// Solves w * (1 + a) + c * tanh(w / eps) = rhs for w. The left side is odd
// and strictly increasing, so the root has the sign of rhs and
// |w| <= |rhs| / (1 + a).
double solve_implicit_velocity(double rhs, double a, double c) {
  if (c == 0.0 || rhs == 0.0) return rhs / (1.0 + a);
  const double r = std::abs(rhs);
  auto residual = [&](double w) {
    return w * (1.0 + a) + c * std::tanh(w / kFrictionVelocityEps) - r;
  };
  double lo = 0.0;
  double hi = r / (1.0 + a);
  double w = std::min(hi, r / (1.0 + a + c / kFrictionVelocityEps));
  for (int iter = 0; iter < 200; ++iter) {
    const double f = residual(w);
    if (f == 0.0) break;
    if (f > 0) hi = w; else lo = w;
    const double t = std::tanh(w / kFrictionVelocityEps);
    const double slope = (1.0 + a) + c * (1.0 - t * t) / kFrictionVelocityEps;
    double next = w - f / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const bool done = std::abs(next - w) <= 1e-15 * std::abs(next);
    w = next;
    if (done || !(hi > lo)) break;
  }
  return std::copysign(w, rhs);
}

}  // namespace

PlantState step_physics(const PlantState& state, double command_current,
                        double external_joint_torque, const ActuatorParams& params,
                        double dt) {
  if (!(dt > 0)) throw Error(ErrorCode::InvalidArgument, "dt must be > 0");
  PlantState next = state;
  next.current = current_loop(command_current, state.current, params, dt);

  const double drive = params.kt * next.current -
                       params.cog_amplitude * std::sin(params.pole_pairs * state.theta) +
                       external_joint_torque / params.gear_ratio;
  const double rhs = state.omega + dt * drive / params.inertia;
  const double a = dt * params.viscous / params.inertia;
  const double c = dt * params.coulomb / params.inertia;
  next.omega = solve_implicit_velocity(rhs, a, c);
  next.theta = state.theta + dt * next.omega;
  next.time = state.time + dt;

  if (!std::isfinite(next.theta) || !std::isfinite(next.omega) ||
      !std::isfinite(next.current)) {
    throw Error(ErrorCode::NonFinite, "plant state became non-finite at t=" +
                                          std::to_string(state.time));
  }
  // Beyond this the encoder count no longer fits 62 bits.
  if (std::abs(next.theta) * params.counts_per_rad() > 0x1p62) {
    throw Error(ErrorCode::NonFinite, "motor angle out of range at t=" +
                                          std::to_string(state.time));
  }
  next.encoder_count = quantize_encoder(next.theta, params);
  return next;
}

std::int64_t counts_from_tendon(double delta_mm, const ActuatorParams& params) {
  require_finite(delta_mm, "tendon displacement");
  return std::llround(delta_mm * params.counts_per_mm());
}

double tendon_from_counts(std::int64_t counts, const ActuatorParams& params) noexcept {
  return static_cast<double>(counts) / params.counts_per_mm();
}

void NoiseConfig::validate() const {
  require_finite(current_sense_sigma, "current_sense_sigma");
  require_finite(torque_disturbance_sigma, "torque_disturbance_sigma");
  require(current_sense_sigma >= 0, "current_sense_sigma must be >= 0");
  require(torque_disturbance_sigma >= 0, "torque_disturbance_sigma must be >= 0");
}

Sensor::Sensor(double sample_period, NoiseConfig noise, std::uint64_t seed, int window)
    : period_(sample_period),
      noise_(noise),
      window_(window),
      current_noise_(seed, NoiseChannel::CurrentSense) {
  require(sample_period > 0, "sample period must be > 0");
  require(window >= 1, "velocity window must be >= 1");
  noise_.validate();
}

Measurement Sensor::sample(const PlantState& state) {
  Measurement m;
  m.encoder_count = state.encoder_count;

  history_.push_back(state.encoder_count);
  if (static_cast<int>(history_.size()) > window_ + 1) history_.pop_front();
  const auto n = static_cast<double>(history_.size());
  if (history_.size() >= 2) {
    // Mean of the available backward differences telescopes to this.
    m.velocity_estimate =
        static_cast<double>(history_.back() - history_.front()) / ((n - 1.0) * period_);
    m.raw_velocity =
        static_cast<double>(history_.back() - history_[history_.size() - 2]) / period_;
  }

  m.sensed_current = state.current;
  if (noise_.current_sense_sigma > 0) {
    m.sensed_current += noise_.current_sense_sigma * current_noise_.normal();
  }
  return m;
}

}  // namespace actmod
