#include <doctest.h>

#include <cmath>

#include "actmod/error.hpp"
#include "actmod/tuning.hpp"

using namespace actmod;

namespace {

RunRecord oscillation(double growth_per_period, double period, double amplitude = 0.5) {
  RunRecord r;
  r.meta.high_period = 1e-3;
  for (int k = 0; k < 4000; ++k) {
    RunRow row;
    row.t = k * 1e-3;
    row.setpoint_mm = 1.0;
    const double cycles = row.t / period;
    row.position_mm =
        1.0 + amplitude * std::pow(growth_per_period, cycles) * std::sin(2 * M_PI * cycles);
    r.rows.push_back(row);
  }
  return r;
}

}  // namespace

TEST_CASE("classic table identities") {
  TuningResult t;
  t.ultimate_gain = 2.0;
  t.ultimate_period = 0.16;
  apply_classic_table(t);
  CHECK(t.p.kp == 0.5 * 2.0);
  CHECK(t.pd.kp == 0.8 * 2.0);
  CHECK(t.pd.kd == t.pd.kp * 0.16 / 8);
  CHECK(t.pid.kp == 0.6 * 2.0);
  CHECK(t.pid.ki == 2 * t.pid.kp / 0.16);
  CHECK(t.pid.kd == t.pid.kp * 0.16 / 8);
  CHECK(t.p.ki == 0.0);
  CHECK(t.pd.ki == 0.0);
}

TEST_CASE("oscillation classes") {
  TuningOptions o;
  auto sustained = classify_oscillation(oscillation(1.0, 0.2), 0.0, o);
  CHECK(sustained.kind == OscillationClass::Sustained);
  CHECK(sustained.period == doctest::Approx(0.2).epsilon(0.01));
  CHECK(sustained.decay_ratio == doctest::Approx(1.0).epsilon(0.01));
  CHECK(classify_oscillation(oscillation(0.7, 0.2), 0.0, o).kind == OscillationClass::Decaying);
  CHECK(classify_oscillation(oscillation(1.3, 0.2), 0.0, o).kind == OscillationClass::Growing);
  CHECK(classify_oscillation(oscillation(1.0, 0.2, 0.001), 0.0, o).kind ==
        OscillationClass::Decaying);
}

TEST_CASE("tuning the default plant") {
  Scenario base;
  const auto a = ziegler_nichols_tune(base, 1.0);
  CHECK(a.ultimate_gain > 0);
  CHECK(a.ultimate_period > 0);
  CHECK(!a.trials.empty());
  const auto b = ziegler_nichols_tune(base, 1.0);
  CHECK(a.ultimate_gain == b.ultimate_gain);
  CHECK(a.ultimate_period == b.ultimate_period);
  CHECK(a.pid.ki == 2 * a.pid.kp / a.ultimate_period);
}

TEST_CASE("tuning errors") {
  Scenario base;
  TuningOptions o;
  o.kp_ceiling = 0.06;
  try {
    ziegler_nichols_tune(base, 1.0, o);
    FAIL("no oscillation expected");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoOscillation);
  }
  CHECK_THROWS_AS(ziegler_nichols_tune(base, 0.0), Error);
  CHECK_THROWS_AS(ziegler_nichols_tune(base, -1.0), Error);
}
