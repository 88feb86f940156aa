#pragma once

#include <vector>

#include "actmod/control.hpp"
#include "actmod/loads.hpp"
#include "actmod/sim.hpp"

namespace actmod {

struct TuningOptions {
  double kp_start = 0.05;       // A/mm
  double kp_growth = 1.1;       // geometric sweep factor
  double kp_ceiling = 100.0;    // A/mm
  double settle_before_step = 0.1;  // s
  double response_duration = 3.0;  // s after the step
  int peaks_considered = 8;
  double decay_low = 0.9;       // sustained if last/first peak amplitude
  double decay_high = 1.1;      //   ratio falls in [decay_low, decay_high]
  double min_peak_amplitude_mm = 0.01;
  int bisection_steps = 30;
};

enum class OscillationClass { Decaying, Sustained, Growing };

struct OscillationReport {
  OscillationClass kind = OscillationClass::Decaying;
  double decay_ratio = 0.0;   // last/first of the considered peaks
  double period = 0.0;        // s, mean peak-to-peak spacing
  int peaks = 0;
};

struct TuningTrial {
  double kp = 0.0;
  OscillationReport report;
};

struct TuningResult {
  double ultimate_gain = 0.0;    // Ku, A/mm
  double ultimate_period = 0.0;  // Tu, s
  GainSet p;
  GainSet pd;
  GainSet pid;
  std::vector<TuningTrial> trials;
};

/// Classic Ziegler-Nichols table from (Ku, Tu).
void apply_classic_table(TuningResult& result);

/// Peak analysis of a P-control step response, deviation about the final
/// setpoint. Exposed for testing.
OscillationReport classify_oscillation(const RunRecord& record, double t_from,
                                       const TuningOptions& options);

/// Sweeps a P controller's gain upward until a step response of `step_mm`
/// oscillates without decay, then fills the classic gain table. `base`
/// supplies the plant, load and sim settings; its controller and reference
/// are replaced. Throws Error(NoOscillation) if the ceiling is reached and
/// Error(Unstable) if the response diverges and bisection cannot bracket a
/// sustained oscillation.
TuningResult ziegler_nichols_tune(const Scenario& base, double step_mm,
                                  const TuningOptions& options = {});

}  // namespace actmod
