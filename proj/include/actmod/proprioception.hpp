#pragma once

#include <string>
#include <vector>

#include "actmod/actuator.hpp"
#include "actmod/loads.hpp"
#include "actmod/record.hpp"

namespace actmod {

struct DetectorConfig {
  double velocity_threshold = 250.0;  // counts/s
  int min_consecutive = 5;            // samples above threshold to open
  double current_threshold = 0.15;    // A above baseline
  int window = 16;                    // samples averaged by estimate_load
  double baseline_duration = 0.5;     // s, current baseline = median over this
  double close_fraction = 0.5;        // hysteresis: close below this * threshold
  double merge_gap = 0.05;            // s, events closer than this are one event

  void validate() const;
};

enum class DetectionChannel { Velocity, Current };

const char* to_string(DetectionChannel channel) noexcept;

struct DetectionEvent {
  double t_start = 0.0;
  double t_end = 0.0;
  double peak = 0.0;  // counts/s or A, by channel
  DetectionChannel channel = DetectionChannel::Velocity;
};

struct LoadEstimate {
  double tension_n = 0.0;
  double mass_equivalent_kg = 0.0;
  bool reliable = true;  // false while the plant is moving
};

/// Tendon tension from the mean sensed current: T = i * kt * N / r.
LoadEstimate estimate_load(double mean_sensed_current, const ActuatorParams& params,
                           double velocity_estimate = 0.0,
                           const DetectorConfig& cfg = {});

/// Mean sensed current over the last cfg.window rows ending at `row`,
/// fed to estimate_load together with that row's velocity estimate.
LoadEstimate estimate_load_at(const RunRecord& record, std::size_t row,
                              const ActuatorParams& params, const DetectorConfig& cfg = {});

/// Velocity events from the moving-average encoder velocity and current
/// events from the sensed current's deviation from its early baseline.
/// Events still open at the end of the record close at the last sample.
std::vector<DetectionEvent> detect_disturbances(const RunRecord& record,
                                                const DetectorConfig& cfg = {});

struct DetectionScore {
  int true_positive_events = 0;
  int events = 0;
  int pulses_found = 0;
  int pulses = 0;
  double precision() const noexcept;
  double recall() const noexcept;
};

/// Scores one channel's events against ground-truth pulses. An event
/// matches a pulse if it overlaps [start, start + duration + margin].
DetectionScore score_detection(const std::vector<DetectionEvent>& events,
                               const std::vector<Pulse>& truth, DetectionChannel channel,
                               double margin = 0.1);

std::string events_to_csv(const std::vector<DetectionEvent>& events, const std::string& run);

}  // namespace actmod
