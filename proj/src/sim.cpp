#include "actmod/sim.hpp"

#include <cmath>
#include <string>

#include "actmod/bus.hpp"
#include "actmod/error.hpp"

namespace actmod {

void SimConfig::validate() const {
  require_finite(dt_low, "dt_low");
  require_finite(duration, "duration");
  if (!(dt_low > 0)) throw Error(ErrorCode::InvalidArgument, "dt_low must be > 0");
  if (rate_ratio < 1) throw Error(ErrorCode::InvalidArgument, "rate_ratio must be >= 1");
  if (duration < 0) throw Error(ErrorCode::InvalidArgument, "duration must be >= 0");
  if (latency_ticks < 0) throw Error(ErrorCode::InvalidArgument, "latency_ticks must be >= 0");
  noise.validate();
}

std::int64_t SimConfig::physics_steps() const noexcept {
  return std::llround(duration / dt_low);
}

RunRecord run_scenario(const Scenario& s) {
  s.sim.validate();
  s.plant.validate();
  validate(s.load);
  validate(s.reference);
  for (double v : {s.initial.theta, s.initial.omega, s.initial.current}) {
    require_finite(v, "initial state");
  }

  const double high_dt = s.sim.high_period();
  const std::int64_t total_steps = s.sim.physics_steps();
  const std::int64_t ticks = (total_steps + s.sim.rate_ratio - 1) / s.sim.rate_ratio;

  PlantState state = s.initial;
  state.encoder_count = quantize_encoder(state.theta, s.plant);
  Sensor sensor(high_dt, s.sim.noise, s.sim.seed);
  PositionController controller(s.controller, s.plant);
  Substream torque_noise(s.sim.seed, NoiseChannel::TorqueDisturbance);
  bus::LatencyQueue link(s.sim.latency_ticks);

  RunRecord record;
  record.meta.seed = s.sim.seed;
  record.meta.counts_per_mm = s.plant.counts_per_mm();
  record.meta.high_period = high_dt;
  record.meta.physics_steps = total_steps;
  record.rows.reserve(static_cast<std::size_t>(ticks));
  record.trace.low_ticks.reserve(static_cast<std::size_t>(ticks));
  record.trace.effective_command.reserve(static_cast<std::size_t>(ticks));
  record.trace.delivered_sequence.reserve(static_cast<std::size_t>(ticks));

  double applied_command = 0.0;
  std::int64_t steps_done = 0;
  for (std::int64_t k = 0; k < ticks; ++k) {
    const double t = static_cast<double>(k) * high_dt;
    state.time = t;
    const Measurement m = sensor.sample(state);
    const ReferencePoint ref = evaluate(s.reference, t);
    const ControlOutput out = controller.step(ref.position, ref.velocity, m, high_dt);
    if (out.saturated) ++record.meta.saturated_ticks;

    bus::CommandFrame frame;
    frame.module_id = s.sim.module_id;
    frame.sequence = static_cast<std::uint16_t>(k & 0xFFFF);
    frame.current_ma = bus::amps_to_milliamps(out.command);
    frame.flags = bus::kFlagEnable;
    link.push(k, bus::encode(frame));

    std::int64_t delivered = -1;
    if (auto payload = link.pop_due(k)) {
      const bus::CommandFrame rx = bus::decode_command(*payload);
      applied_command = (rx.flags & bus::kFlagEnable) ? bus::milliamps_to_amps(rx.current_ma) : 0.0;
      delivered = rx.sequence;
    }

    RunRow row;
    row.t = t;
    row.setpoint_mm = ref.position;
    row.setpoint_vel_mm_s = ref.velocity;
    row.encoder_count = m.encoder_count;
    row.position_mm = tendon_from_counts(m.encoder_count, s.plant);
    row.velocity_mm_s = m.velocity_estimate / record.meta.counts_per_mm;
    row.true_current_a = state.current;
    row.sensed_current_a = m.sensed_current;
    row.command_current_a = out.command;
    row.load_torque_nm = joint_torque(s.load, joint_view(state, s.plant), t, s.plant);
    record.rows.push_back(row);

    const int low = static_cast<int>(std::min<std::int64_t>(s.sim.rate_ratio, total_steps - steps_done));
    for (int j = 0; j < low; ++j) {
      const double t_low = t + j * s.sim.dt_low;
      double external = joint_torque(s.load, joint_view(state, s.plant), t_low, s.plant);
      if (s.sim.noise.torque_disturbance_sigma > 0) {
        external += s.sim.noise.torque_disturbance_sigma * torque_noise.normal();
      }
      try {
        state = step_physics(state, applied_command, external, s.plant, s.sim.dt_low);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NonFinite) throw;
        throw Error(ErrorCode::Unstable, std::string("run diverged (unstable gain set?): ") + e.what());
      }
      state.time = t_low + s.sim.dt_low;
    }
    steps_done += low;
    record.trace.low_ticks.push_back(low);
    record.trace.effective_command.push_back(applied_command);
    record.trace.delivered_sequence.push_back(delivered);
  }
  return record;
}

}  // namespace actmod
