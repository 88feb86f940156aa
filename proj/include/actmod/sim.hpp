#pragma once

#include <cstdint>

#include "actmod/actuator.hpp"
#include "actmod/control.hpp"
#include "actmod/loads.hpp"
#include "actmod/record.hpp"
#include "actmod/trajectory.hpp"

namespace actmod {

struct SimConfig {
  double dt_low = 1e-4;  // s, physics and current loop (10 kHz)
  int rate_ratio = 10;   // low-level ticks per high-level tick (1 kHz)
  double duration = 1.0;  // s
  std::uint64_t seed = 1;
  NoiseConfig noise;
  int latency_ticks = 1;  // command link delay in high-level ticks
  std::uint8_t module_id = 1;

  void validate() const;
  double high_period() const noexcept { return dt_low * rate_ratio; }
  std::int64_t physics_steps() const noexcept;
};

struct Scenario {
  SimConfig sim;
  ActuatorParams plant;
  LoadModel load = NullLoad{};
  ControllerSpec controller;
  ReferenceSignal reference;
  PlantState initial;
};

/// Runs one closed-loop scenario. Each high-level tick samples the sensors,
/// evaluates the reference, runs the position controller and sends the
/// command frame over the latency link; then rate_ratio low-level ticks run
/// the current loop and plant physics with the last delivered command.
/// Throws Error(Unstable) if the plant state becomes non-finite.
RunRecord run_scenario(const Scenario& scenario);

}  // namespace actmod
