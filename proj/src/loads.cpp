#include "actmod/loads.hpp"

#include <algorithm>

#include "actmod/error.hpp"

namespace actmod {

double BeamLoad::stiffness() const noexcept {
  return flexural_rigidity / (tendon_offset * tendon_offset * length);
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

double active_pulse_torque(const PulseLoad& load, double t) {
  double sum = 0.0;
  for (const auto& p : load.schedule) {
    if (p.start > t) break;
    if (t < p.start + p.duration) sum += p.torque;
  }
  return sum;
}

}  // namespace

void validate(const LoadModel& load) {
  std::visit(overloaded{
                 [](const NullLoad&) {},
                 [](const GravityLoad& g) {
                   require_finite(g.mass, "mass");
                   require(g.mass >= 0, "mass must be >= 0");
                 },
                 [](const BeamLoad& b) {
                   require_finite(b.flexural_rigidity, "flexural_rigidity");
                   require_finite(b.tendon_offset, "tendon_offset");
                   require_finite(b.length, "length");
                   require(b.flexural_rigidity > 0 && b.tendon_offset > 0 && b.length > 0,
                           "beam EI, offset and length must be > 0");
                 },
                 [](const PulseLoad& p) {
                   for (std::size_t i = 0; i < p.schedule.size(); ++i) {
                     const auto& pulse = p.schedule[i];
                     require_finite(pulse.start, "pulse start");
                     require_finite(pulse.duration, "pulse duration");
                     require_finite(pulse.torque, "pulse torque");
                     require(pulse.duration > 0, "pulse duration must be > 0");
                     require(i == 0 || p.schedule[i - 1].start <= pulse.start,
                             "pulse schedule must be sorted by start");
                   }
                 },
             },
             load);
}

double tension(const LoadModel& load, const JointView& joint, double t) {
  return std::visit(overloaded{
                        [](const NullLoad&) { return 0.0; },
                        [](const GravityLoad& g) { return g.mass * kGravity; },
                        [&](const BeamLoad& b) {
                          const double pulled_m = joint.tendon_length / 1000.0;
                          return pulled_m > 0 ? b.stiffness() * pulled_m : 0.0;
                        },
                        [&](const PulseLoad& p) { return active_pulse_torque(p, t); },
                    },
                    load);
}

double joint_torque(const LoadModel& load, const JointView& joint, double t,
                    const ActuatorParams& params) {
  if (const auto* pulses = std::get_if<PulseLoad>(&load)) {
    return active_pulse_torque(*pulses, t);
  }
  return -tension(load, joint, t) * params.drum_radius;
}

double holding_current(double tension_n, const ActuatorParams& params) noexcept {
  return tension_n * params.drum_radius / (params.gear_ratio * params.kt);
}

}  // namespace actmod
