#include "actmod/proprioception.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "actmod/error.hpp"

namespace actmod {

void DetectorConfig::validate() const {
  if (!(velocity_threshold > 0) || !(current_threshold > 0))
    throw Error(ErrorCode::InvalidArgument, "detector thresholds must be > 0");
  if (min_consecutive < 1) throw Error(ErrorCode::InvalidArgument, "min_consecutive must be >= 1");
  if (window < 1) throw Error(ErrorCode::InvalidArgument, "window must be >= 1");
  if (!(close_fraction > 0 && close_fraction <= 1))
    throw Error(ErrorCode::InvalidArgument, "close_fraction must be in (0, 1]");
  if (!(merge_gap >= 0)) throw Error(ErrorCode::InvalidArgument, "merge_gap must be >= 0");
  if (!(baseline_duration > 0))
    throw Error(ErrorCode::InvalidArgument, "baseline_duration must be > 0");
}

const char* to_string(DetectionChannel channel) noexcept {
  return channel == DetectionChannel::Velocity ? "velocity" : "current";
}

LoadEstimate estimate_load(double mean_sensed_current, const ActuatorParams& params,
                           double velocity_estimate, const DetectorConfig& cfg) {
  require_finite(mean_sensed_current, "sensed current");
  LoadEstimate est;
  est.tension_n = mean_sensed_current * params.kt * params.gear_ratio / params.drum_radius;
  est.mass_equivalent_kg = est.tension_n / kGravity;
  est.reliable = std::abs(velocity_estimate) < cfg.velocity_threshold;
  return est;
}

LoadEstimate estimate_load_at(const RunRecord& record, std::size_t row,
                              const ActuatorParams& params, const DetectorConfig& cfg) {
  if (row >= record.rows.size()) throw Error(ErrorCode::InvalidArgument, "row outside record");
  const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(cfg.window), row + 1);
  double sum = 0.0;
  for (std::size_t i = row + 1 - n; i <= row; ++i) sum += record.rows[i].sensed_current_a;
  const double velocity_counts = record.rows[row].velocity_mm_s * record.meta.counts_per_mm;
  return estimate_load(sum / static_cast<double>(n), params, velocity_counts, cfg);
}

namespace {

// Hysteresis detector over |signal|: opens after min_consecutive samples
// above `open`, closes at the first sample below `close`. An event opening
// within merge_gap of the previous one's end extends it (the push and the
// release of one disturbance).
std::vector<DetectionEvent> threshold_events(const std::vector<double>& t,
                                             const std::vector<double>& signal, double open,
                                             double close, int min_consecutive,
                                             double merge_gap, DetectionChannel channel) {
  std::vector<DetectionEvent> events;
  int run = 0;
  bool active = false;
  DetectionEvent current;
  for (std::size_t i = 0; i < signal.size(); ++i) {
    const double mag = std::abs(signal[i]);
    if (!active) {
      run = mag > open ? run + 1 : 0;
      if (run >= min_consecutive) {
        active = true;
        const std::size_t first = i + 1 - static_cast<std::size_t>(run);
        current = DetectionEvent{t[first], t[i], 0.0, channel};
        for (std::size_t j = first; j <= i; ++j) current.peak = std::max(current.peak, std::abs(signal[j]));
      }
    } else if (mag < close) {
      current.t_end = t[i];
      if (!events.empty() && current.t_start - events.back().t_end <= merge_gap) {
        events.back().t_end = current.t_end;
        events.back().peak = std::max(events.back().peak, current.peak);
      } else {
        events.push_back(current);
      }
      active = false;
      run = 0;
    } else {
      current.peak = std::max(current.peak, mag);
      current.t_end = t[i];
    }
  }
  if (active) {
    if (!events.empty() && current.t_start - events.back().t_end <= merge_gap) {
      events.back().t_end = current.t_end;
      events.back().peak = std::max(events.back().peak, current.peak);
    } else {
      events.push_back(current);
    }
  }
  return events;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace

std::vector<DetectionEvent> detect_disturbances(const RunRecord& record,
                                                const DetectorConfig& cfg) {
  cfg.validate();
  std::vector<double> t, velocity, current, early;
  const double t0 = record.rows.empty() ? 0.0 : record.rows.front().t;
  for (const auto& row : record.rows) {
    t.push_back(row.t);
    velocity.push_back(row.velocity_mm_s * record.meta.counts_per_mm);
    current.push_back(row.sensed_current_a);
    if (row.t < t0 + cfg.baseline_duration) early.push_back(row.sensed_current_a);
  }
  const double baseline = median(early);
  for (double& c : current) c -= baseline;

  auto events = threshold_events(t, velocity, cfg.velocity_threshold,
                                 cfg.close_fraction * cfg.velocity_threshold, cfg.min_consecutive,
                                 cfg.merge_gap, DetectionChannel::Velocity);
  auto current_events = threshold_events(t, current, cfg.current_threshold,
                                         cfg.close_fraction * cfg.current_threshold,
                                         cfg.min_consecutive, cfg.merge_gap,
                                         DetectionChannel::Current);
  events.insert(events.end(), current_events.begin(), current_events.end());
  return events;
}

double DetectionScore::precision() const noexcept {
  return events == 0 ? 1.0 : static_cast<double>(true_positive_events) / events;
}

double DetectionScore::recall() const noexcept {
  return pulses == 0 ? 1.0 : static_cast<double>(pulses_found) / pulses;
}

DetectionScore score_detection(const std::vector<DetectionEvent>& events,
                               const std::vector<Pulse>& truth, DetectionChannel channel,
                               double margin) {
  DetectionScore score;
  score.pulses = static_cast<int>(truth.size());
  std::vector<bool> found(truth.size(), false);
  for (const auto& e : events) {
    if (e.channel != channel) continue;
    ++score.events;
    bool matched = false;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      const double lo = truth[i].start;
      const double hi = truth[i].start + truth[i].duration + margin;
      if (e.t_start <= hi && e.t_end >= lo) {
        matched = true;
        found[i] = true;
      }
    }
    if (matched) ++score.true_positive_events;
  }
  score.pulses_found = static_cast<int>(std::count(found.begin(), found.end(), true));
  return score;
}

std::string events_to_csv(const std::vector<DetectionEvent>& events, const std::string& run) {
  std::string out;
  char buf[160];
  for (const auto& e : events) {
    std::snprintf(buf, sizeof buf, "%s,%.9g,%.9g,%s,%.9g\n", run.c_str(), e.t_start, e.t_end,
                  to_string(e.channel), e.peak);
    out += buf;
  }
  return out;
}

}  // namespace actmod
