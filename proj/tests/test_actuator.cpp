#include <doctest.h>

#include <cmath>
#include <numbers>

#include "actmod/actuator.hpp"
#include "actmod/error.hpp"
#include "oracles.hpp"

using namespace actmod;

namespace {

ActuatorParams ideal() {
  ActuatorParams p;
  p.viscous = 0;
  p.coulomb = 0;
  p.cog_amplitude = 0;
  return p;
}

}  // namespace

TEST_CASE("parameter validation") {
  ActuatorParams p;
  CHECK_NOTHROW(p.validate());
  p.kt = 0;
  CHECK_THROWS_AS(p.validate(), Error);
  p = {};
  p.viscous = -1e-6;
  CHECK_THROWS_AS(p.validate(), Error);
  p = {};
  p.current_loop_tau = 0;
  CHECK_NOTHROW(p.validate());
  p.inertia = std::nan("");
  CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("torque balance at rest is zero") {
  CHECK(torque_balance(PlantState{}, 0.0, 0.0, ActuatorParams{}) == 0.0);
}

TEST_CASE("one kilogram is held by one ampere") {
  auto p = ideal();
  const double ext = -oracle::g * oracle::r;  // 1 kg on the tendon, joint torque
  const double acc = torque_balance(PlantState{}, 1.0, ext, p);
  CHECK(std::fabs(acc * p.inertia) < 1e-5);
  CHECK(acc * p.inertia == doctest::Approx(oracle::kt - oracle::g * oracle::r / oracle::N).epsilon(1e-12));
}

TEST_CASE("cogging torque is linear in its amplitude") {
  ActuatorParams p = ideal();
  PlantState s;
  s.theta = 0.3;
  p.cog_amplitude = 2e-4;
  const double a1 = torque_balance(s, 0.0, 0.0, p);
  p.cog_amplitude = 4e-4;
  const double a2 = torque_balance(s, 0.0, 0.0, p);
  CHECK(a2 == doctest::Approx(2 * a1));
  CHECK(a1 * p.inertia == doctest::Approx(-2e-4 * std::sin(12 * 0.3)));
}

TEST_CASE("one Euler step under 1 A gains kt*i/J*dt") {
  auto p = ideal();
  p.current_loop_tau = 0;
  PlantState s;
  s.current = 1.0;
  const auto next = step_physics(s, 1.0, 0.0, p, 1e-4);
  CHECK(next.omega == doctest::Approx(0.22071).epsilon(1e-12));
  CHECK(next.theta == doctest::Approx(0.22071 * 1e-4).epsilon(1e-12));
  CHECK(next.time == doctest::Approx(1e-4));
}

TEST_CASE("rest is an equilibrium") {
  auto p = ActuatorParams{};
  p.cog_amplitude = 0;
  PlantState s;
  for (int i = 0; i < 1000; ++i) s = step_physics(s, 0.0, 0.0, p, 1e-4);
  CHECK(s.theta == 0.0);
  CHECK(s.omega == 0.0);
  CHECK(s.current == 0.0);
}

TEST_CASE("reflected load torque") {
  // 9.81 N of tension on a 9 mm drum, seen at the motor through 4:1.
  CHECK(9.81 * 0.009 / 4 == doctest::Approx(0.02207).epsilon(1e-3));
}

TEST_CASE("current loop") {
  ActuatorParams p;
  SUBCASE("clamp") {
    double i = 0;
    for (int k = 0; k < 200; ++k) i = current_loop(10.0, i, p, 1e-4);
    CHECK(i == doctest::Approx(6.0).epsilon(1e-6));
    CHECK(i <= 6.0);
  }
  SUBCASE("first-order response after one time constant") {
    double i = 0;
    for (int k = 0; k < 5; ++k) i = current_loop(1.0, i, p, 1e-4);
    CHECK(i == doctest::Approx(1 - std::exp(-1.0)).epsilon(1e-12));
    CHECK(i == doctest::Approx(0.632).epsilon(1e-3));
  }
  SUBCASE("zero stays zero") { CHECK(current_loop(0, 0, p, 1e-4) == 0.0); }
  SUBCASE("ideal tracking") {
    p.current_loop_tau = 0;
    CHECK(current_loop(2.5, 0, p, 1e-4) == 2.5);
    CHECK(current_loop(-9, 0, p, 1e-4) == -6.0);
  }
  SUBCASE("bad dt") { CHECK_THROWS_AS(current_loop(1, 0, p, 0.0), Error); }
}

TEST_CASE("encoder quantization") {
  ActuatorParams p;
  CHECK(quantize_encoder(0.44444, p) == 353);
  CHECK(quantize_encoder(0.0, p) == 0);
  CHECK(quantize_encoder(-1e-9, p) == -1);
  CHECK(quantize_encoder(2 * std::numbers::pi, p) == 5000);
  PlantState s;
  s.theta = 0.44444;
  s.current = 0;
  auto q = ideal();
  auto next = step_physics(s, 0.0, 0.0, q, 1e-4);
  CHECK(next.encoder_count == 353);
}

TEST_CASE("tendon conversions") {
  ActuatorParams p;
  CHECK(p.counts_per_mm() == doctest::Approx(oracle::counts_per_mm()).epsilon(1e-12));
  CHECK(counts_from_tendon(1.0, p) == 354);
  CHECK(counts_from_tendon(0.0, p) == 0);
  CHECK(counts_from_tendon(-1.0, p) == -354);
  CHECK(tendon_from_counts(354, p) == doctest::Approx(354 / oracle::counts_per_mm()));
  CHECK_THROWS_AS(counts_from_tendon(INFINITY, p), Error);
  auto v = joint_view(PlantState{1.0, 2.0, 0, 0, 0}, p);
  CHECK(v.joint_angle == doctest::Approx(0.25));
  CHECK(v.joint_velocity == doctest::Approx(0.5));
  CHECK(v.tendon_length == doctest::Approx(2.25));
  CHECK(v.tendon_velocity == doctest::Approx(4.5));
}

TEST_CASE("backdrivability") {
  // A joint torque above the breakaway must move the unpowered plant
  // within 10 ms.
  ActuatorParams p;
  p.cog_amplitude = 0;
  PlantState s;
  const double joint_torque = 2.0 * p.coulomb * p.gear_ratio;
  for (int k = 0; k < 100; ++k) s = step_physics(s, 0.0, joint_torque, p, 1e-4);
  CHECK(s.omega > 0.0);
  CHECK(s.encoder_count > 0);
}

TEST_CASE("non-finite state aborts") {
  PlantState s;
  CHECK_THROWS_AS(step_physics(s, 0.0, INFINITY, ActuatorParams{}, 1e-4), Error);
  CHECK_THROWS_AS(step_physics(s, 0.0, 0.0, ActuatorParams{}, 0.0), Error);
}

TEST_CASE("sensor velocity estimate") {
  NoiseConfig quiet{0.0, 0.0};
  Sensor sensor(1e-3, quiet, 1);
  PlantState s;
  Measurement m;
  for (int k = 0; k < 40; ++k) {
    s.encoder_count = k;
    m = sensor.sample(s);
  }
  CHECK(m.velocity_estimate == doctest::Approx(1000.0));
  CHECK(m.raw_velocity == doctest::Approx(1000.0));

  Sensor still(1e-3, quiet, 1);
  PlantState rest;
  rest.current = 0.7;
  for (int k = 0; k < 20; ++k) m = still.sample(rest);
  CHECK(m.velocity_estimate == 0.0);
  CHECK(m.sensed_current == 0.7);
  CHECK(still.current_stream().draws() == 0);
}

TEST_CASE("sensor current noise statistics") {
  Sensor sensor(1e-3, NoiseConfig{0.05, 0.0}, 7);
  PlantState s;
  s.current = 1.0;
  double sum = 0, sq = 0;
  const int n = 20000;
  for (int k = 0; k < n; ++k) {
    const double e = sensor.sample(s).sensed_current - 1.0;
    sum += e;
    sq += e * e;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sq / n - mean * mean);
  CHECK(std::fabs(mean) < 0.002);
  CHECK(sd == doctest::Approx(0.05).epsilon(0.03));
}

TEST_CASE("sensor argument checks") {
  CHECK_THROWS_AS(Sensor(0.0, NoiseConfig{}, 1), Error);
  CHECK_THROWS_AS(Sensor(1e-3, NoiseConfig{}, 1, 0), Error);
  CHECK_THROWS_AS(Sensor(1e-3, NoiseConfig{-1, 0}, 1), Error);
}
