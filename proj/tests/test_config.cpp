#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "actmod/config.hpp"
#include "actmod/error.hpp"
#include "actmod/experiments.hpp"

using namespace actmod;

TEST_CASE("every scenario has a preset") {
  CHECK(scenario_names().size() == 7);
  for (const auto& name : scenario_names()) {
    const auto c = Config::preset(name);
    CHECK(c.scenario() == name);
    CHECK(c.number("sim.dt_low") == doctest::Approx(1e-4));
    CHECK(c.integer("sim.rate_ratio") == 10);
    CHECK_NOTHROW(plant_from(c).validate());
  }
  CHECK_THROWS_AS(Config::preset("nope"), Error);
}

TEST_CASE("overrides only touch known keys") {
  auto c = Config::preset("step");
  c.set("sim.seed", "17");
  CHECK(c.unsigned_integer("sim.seed") == 17);
  c.set_assignment("plant.viscous=2e-5");
  CHECK(c.number("plant.viscous") == doctest::Approx(2e-5));
  try {
    c.set("plant.viscus", "1");
    FAIL("unknown key accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Config);
  }
  CHECK_THROWS_AS(c.set_assignment("plant.kt"), Error);
  CHECK_THROWS_AS(c.set("nosection", "1"), Error);
  c.set("plant.kt", "abc");
  CHECK_THROWS_AS(c.number("plant.kt"), Error);
}

TEST_CASE("echo reloads to the same configuration") {
  auto c = Config::preset("staircase");
  c.set("scenario.masses", "0.3, 0.6");
  c.set("sim.seed", "5");
  auto d = Config::preset("staircase");
  d.merge_text(c.echo());
  CHECK(d.echo() == c.echo());
  CHECK(d.hash() == c.hash());
  CHECK(d.numbers("scenario.masses") == std::vector<double>{0.3, 0.6});
  CHECK(c.hash() != Config::preset("staircase").hash());
}

TEST_CASE("files") {
  const auto path = std::filesystem::temp_directory_path() / "actmod_test_config.ini";
  {
    std::ofstream f(path);
    f << "[sim]\nseed = 9\n\n[controller]\nderivative_filter_alpha = 0.25\n";
  }
  auto c = Config::preset("step");
  c.merge_file(path);
  CHECK(c.unsigned_integer("sim.seed") == 9);
  CHECK(c.number("controller.derivative_filter_alpha") == 0.25);
  {
    std::ofstream f(path);
    f << "[sim]\nsed = 9\n";
  }
  CHECK_THROWS_AS(c.merge_file(path), Error);
  {
    std::ofstream f(path);
    f << "[sim\nseed = 9\n";
  }
  CHECK_THROWS_AS(c.merge_file(path), Error);
  std::filesystem::remove(path);
  try {
    c.merge_file(path);
    FAIL("missing file accepted");
  } catch (const Error& e) {
    CHECK((e.code() == ErrorCode::Io || e.code() == ErrorCode::Config));
  }
}

TEST_CASE("section readers") {
  auto c = Config::preset("disturbance");
  const auto load = load_from(c);
  const auto* pulses = std::get_if<PulseLoad>(&load);
  REQUIRE(pulses);
  CHECK(pulses->schedule.size() == 6);
  CHECK(pulses->schedule[3].torque == doctest::Approx(0.02));
  c.set("load.pulses", "1.0:0.05");
  CHECK_THROWS_AS(load_from(c), Error);
  auto b = Config::preset("beam-step");
  CHECK(std::holds_alternative<BeamLoad>(load_from(b)));
  CHECK(detector_from(c).velocity_threshold == 250);
  CHECK(sim_from(b).noise.current_sense_sigma == doctest::Approx(0.05));
}

TEST_CASE("run labels") {
  std::vector<std::string> labels;
  for (const auto& [label, s] : build_runs(Config::preset("staircase"))) labels.push_back(label);
  CHECK(labels == std::vector<std::string>{"pd-m0.2", "pdg-m0.2", "pd-m0.54", "pdg-m0.54",
                                           "pd-m1", "pdg-m1"});
  labels.clear();
  for (const auto& [label, s] : build_runs(Config::preset("trajectory"))) labels.push_back(label);
  CHECK(labels == std::vector<std::string>{"pd-unloaded", "pdg-unloaded", "pd-loaded",
                                           "pdg-loaded"});
}
