#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace actmod {

inline constexpr const char* kCodeVersion = "0.3.0";

/// One high-level tick. Column order here is the run.csv column order.
struct RunRow {
  double t = 0.0;                  // s
  double setpoint_mm = 0.0;
  double setpoint_vel_mm_s = 0.0;
  double position_mm = 0.0;        // from encoder counts
  double velocity_mm_s = 0.0;      // moving-average estimate
  double true_current_a = 0.0;
  double sensed_current_a = 0.0;
  double command_current_a = 0.0;
  double load_torque_nm = 0.0;     // joint torque from the load model
  std::int64_t encoder_count = 0;
};

struct RunMeta {
  std::string scenario;
  std::string label;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  std::string code_version = kCodeVersion;
  double counts_per_mm = 0.0;
  double high_period = 0.0;        // s
  std::int64_t physics_steps = 0;
  std::int64_t saturated_ticks = 0;
};

/// Per-tick bookkeeping of the two-rate schedule and the command link. Not
/// written to run.csv.
struct RunTrace {
  std::vector<int> low_ticks;                 // low-level ticks after each row
  std::vector<double> effective_command;      // A applied by the low level
  std::vector<std::int64_t> delivered_sequence;  // -1 when nothing arrived
};

struct RunRecord {
  RunMeta meta;
  std::vector<RunRow> rows;
  RunTrace trace;
};

extern const char* const kRunCsvHeader;

/// run.csv text: fixed columns, 9 significant digits, '\n' line endings.
std::string to_csv(const RunRecord& record);

/// FNV-1a over arbitrary bytes.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// Step-response and tracking metrics over one segment of a record.
/// Absent optionals are metrics that are undefined for the segment.
struct Metrics {
  std::optional<double> overshoot_percent;
  std::optional<double> rise_time_s;      // 10% -> 90%
  std::optional<double> settling_time_s;  // 2% band
  double steady_state_error_mm = 0.0;     // |mean error| over the last 20%
  double rms_tracking_error_mm = 0.0;
};

/// Segment [t_begin, t_end) of a record. For step responses `from_mm` and
/// `to_mm` give the step; without them only the error metrics are computed.
struct Segment {
  double t_begin = 0.0;
  double t_end = 0.0;
  std::optional<double> from_mm;
  std::optional<double> to_mm;
};

Metrics compute_metrics(const RunRecord& record, const Segment& segment);
Metrics compute_metrics(const RunRecord& record);

double pearson(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace actmod
