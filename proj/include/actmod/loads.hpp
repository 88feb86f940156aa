#pragma once

#include <variant>
#include <vector>

#include "actmod/actuator.hpp"

namespace actmod {

inline constexpr double kGravity = 9.81;  // m/s^2

struct NullLoad {};

/// Weight hanging on the tendon via a pulley: constant tension m*g.
struct GravityLoad {
  double mass = 0.0;  // kg
};

/// Flexible backbone bent by the tendon. Constant-curvature planar bending:
/// tendon displacement dl = kappa*d*L, elastic energy 0.5*EI*L*kappa^2, so
/// tension dE/d(dl) = EI/(d^2 L) * dl. A slack tendon carries nothing.
struct BeamLoad {
  double flexural_rigidity = 0.01;  // EI, N*m^2
  double tendon_offset = 0.02;      // d, m from the neutral axis
  double length = 0.285;            // L, m

  double stiffness() const noexcept;  // N/m of tendon displacement
};

struct Pulse {
  double start = 0.0;     // s
  double duration = 0.0;  // s
  double torque = 0.0;    // N*m at the joint
};

/// Externally applied joint torque pulses, e.g. a hand pushing the output.
struct PulseLoad {
  std::vector<Pulse> schedule;  // sorted by start
};

using LoadModel = std::variant<NullLoad, GravityLoad, BeamLoad, PulseLoad>;

void validate(const LoadModel& load);

/// Tendon tension in newtons. For PulseLoad the active joint torque is
/// returned unchanged since a pulse has no tendon.
double tension(const LoadModel& load, const JointView& joint, double t);

/// Joint torque (N*m) exerted by the load. Tendon loads oppose the pull.
double joint_torque(const LoadModel& load, const JointView& joint, double t,
                    const ActuatorParams& params);

/// Holding current that cancels a static tendon tension at rest.
double holding_current(double tension_n, const ActuatorParams& params) noexcept;

}  // namespace actmod
