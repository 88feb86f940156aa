#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "actmod/config.hpp"
#include "actmod/proprioception.hpp"
#include "actmod/record.hpp"
#include "actmod/sim.hpp"
#include "actmod/tuning.hpp"

namespace actmod {

struct SegmentMetrics {
  std::string name;  // "all", "level-3", ...
  Segment segment;
  Metrics metrics;
};

struct LabeledRun {
  std::string label;
  Scenario scenario;
  RunRecord record;
  std::vector<SegmentMetrics> metrics;  // first entry covers the whole run
  std::vector<DetectionEvent> events;
};

struct ExperimentResult {
  std::string scenario;
  std::string config_echo;
  std::vector<LabeledRun> runs;
  std::optional<TuningResult> tuning;
  std::vector<Pulse> injected;  // disturbance ground truth
};

/// Builds the runs of a scenario from a configuration without executing
/// them. Labels are unique and filesystem safe.
std::vector<std::pair<std::string, Scenario>> build_runs(const Config& config);

/// Runs every configured run of the scenario and extracts metrics (and, for
/// the disturbance scenario, detection events). The tune scenario first runs
/// the gain sweep and then step responses of the tuned gain sets.
ExperimentResult run_experiment(const Config& config);

/// Writes config.ini, metrics.csv, events.csv, <label>/run.csv and
/// <label>/meta.json (plus tuning.csv for tune) under `dir`.
void write_artifacts(const ExperimentResult& result, const std::filesystem::path& dir);

std::string metrics_to_csv(const ExperimentResult& result);

// Config section readers, shared with the C API.
ActuatorParams plant_from(const Config& config);
SimConfig sim_from(const Config& config);
LoadModel load_from(const Config& config);
DetectorConfig detector_from(const Config& config);

}  // namespace actmod
