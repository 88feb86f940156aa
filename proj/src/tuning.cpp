#include "actmod/tuning.hpp"

#include <cmath>
#include <string>

#include "actmod/error.hpp"

namespace actmod {

void apply_classic_table(TuningResult& r) {
  const double ku = r.ultimate_gain;
  const double tu = r.ultimate_period;
  r.p = GainSet{};
  r.p.kp = 0.5 * ku;

  r.pd = GainSet{};
  r.pd.kp = 0.8 * ku;
  r.pd.kd = r.pd.kp * tu / 8.0;

  r.pid = GainSet{};
  r.pid.kp = 0.6 * ku;
  r.pid.ki = 2.0 * r.pid.kp / tu;
  r.pid.kd = r.pid.kp * tu / 8.0;
}

OscillationReport classify_oscillation(const RunRecord& record, double t_from,
                                       const TuningOptions& options) {
  std::vector<double> t, dev;
  for (const auto& row : record.rows) {
    if (row.t < t_from) continue;
    t.push_back(row.t);
    dev.push_back(row.position_mm - row.setpoint_mm);
  }

  // Maxima of the deviation; plateaus from quantization count once, at
  // their midpoint.
  std::vector<double> peak_t, peak_a;
  std::size_t i = 1;
  while (i + 1 < dev.size()) {
    if (dev[i] > dev[i - 1]) {
      std::size_t j = i;
      while (j + 1 < dev.size() && dev[j + 1] == dev[i]) ++j;
      if (j + 1 < dev.size() && dev[j + 1] < dev[i] && dev[i] > options.min_peak_amplitude_mm) {
        peak_t.push_back(0.5 * (t[i] + t[j]));
        peak_a.push_back(dev[i]);
      }
      i = j + 1;
    } else {
      ++i;
    }
  }

  OscillationReport report;
  report.peaks = static_cast<int>(peak_a.size());
  const auto n = static_cast<std::size_t>(options.peaks_considered);
  if (peak_a.size() < n) {
    report.kind = OscillationClass::Decaying;
    return report;
  }
  const std::size_t first = peak_a.size() - n;
  report.decay_ratio = peak_a.back() / peak_a[first];
  report.period = (peak_t.back() - peak_t[first]) / static_cast<double>(n - 1);
  if (report.decay_ratio < options.decay_low) {
    report.kind = OscillationClass::Decaying;
  } else if (report.decay_ratio > options.decay_high) {
    report.kind = OscillationClass::Growing;
  } else {
    report.kind = OscillationClass::Sustained;
  }
  return report;
}

namespace {

struct Probe {
  TuningTrial trial;
  bool diverged = false;
};

Probe probe(const Scenario& base, double step_mm, double kp, const TuningOptions& options) {
  Scenario s = base;
  s.controller = ControllerSpec{};
  s.controller.kind = ControllerKind::P;
  s.controller.gains.kp = kp;
  s.reference = StepRef{step_mm, options.settle_before_step};
  s.sim.duration = options.settle_before_step + options.response_duration;

  Probe p;
  p.trial.kp = kp;
  try {
    const RunRecord record = run_scenario(s);
    p.trial.report = classify_oscillation(record, options.settle_before_step, options);
    // Riding the current limit is divergence held in check by saturation.
    if (record.meta.saturated_ticks > 0 && p.trial.report.kind != OscillationClass::Decaying) {
      p.trial.report.kind = OscillationClass::Growing;
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Unstable) throw;
    p.diverged = true;
    p.trial.report.kind = OscillationClass::Growing;
  }
  return p;
}

}  // namespace

TuningResult ziegler_nichols_tune(const Scenario& base, double step_mm,
                                  const TuningOptions& options) {
  if (!(step_mm > 0) || !std::isfinite(step_mm))
    throw Error(ErrorCode::InvalidArgument, "tuning step must be > 0");
  if (!(options.kp_growth > 1.0) || !(options.kp_start > 0))
    throw Error(ErrorCode::InvalidArgument, "tuning sweep needs kp_start > 0 and growth > 1");

  TuningResult result;
  auto accept = [&](const TuningTrial& trial) {
    result.ultimate_gain = trial.kp;
    result.ultimate_period = trial.report.period;
    apply_classic_table(result);
    return result;
  };

  double last_stable = 0.0;
  for (double kp = options.kp_start; kp <= options.kp_ceiling; kp *= options.kp_growth) {
    const Probe p = probe(base, step_mm, kp, options);
    result.trials.push_back(p.trial);
    switch (p.trial.report.kind) {
      case OscillationClass::Sustained:
        return accept(p.trial);
      case OscillationClass::Decaying:
        last_stable = kp;
        continue;
      case OscillationClass::Growing:
        break;
    }

    // Diverging: bisect between the last decaying gain and this one.
    if (last_stable == 0.0) {
      throw Error(ErrorCode::Unstable, "step response diverges already at kp=" + std::to_string(kp));
    }
    double lo = last_stable;
    double hi = kp;
    for (int b = 0; b < options.bisection_steps; ++b) {
      const double mid = 0.5 * (lo + hi);
      const Probe q = probe(base, step_mm, mid, options);
      result.trials.push_back(q.trial);
      if (q.trial.report.kind == OscillationClass::Sustained) return accept(q.trial);
      if (q.trial.report.kind == OscillationClass::Decaying) lo = mid; else hi = mid;
    }
    throw Error(ErrorCode::Unstable, "could not bracket a sustained oscillation between kp=" +
                                         std::to_string(lo) + " and kp=" + std::to_string(hi));
  }
  throw Error(ErrorCode::NoOscillation,
              "no sustained oscillation up to kp=" + std::to_string(options.kp_ceiling));
}

}  // namespace actmod
