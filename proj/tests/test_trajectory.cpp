#include <doctest.h>

#include <cmath>

#include "actmod/error.hpp"
#include "actmod/trajectory.hpp"
#include "oracles.hpp"

using namespace actmod;

TEST_CASE("polynomial matches the power form") {
  for (int i = 0; i <= 100; ++i) {
    const double u = i / 100.0;
    CHECK(c4::position(u) == doctest::Approx(oracle::s(u)).epsilon(1e-12));
    CHECK(c4::velocity(u) == doctest::Approx(oracle::ds(u)).epsilon(1e-10));
  }
  CHECK(c4::position(0.5) == 0.5);
  CHECK(c4::velocity(0.5) == doctest::Approx(315.0 / 128.0).epsilon(1e-12));
}

TEST_CASE("smooth segment evaluation") {
  SmoothRef seg{0.0, 1.0, 0.0, 1.0};
  auto a = evaluate(seg, 0.0);
  CHECK(a.position == 0.0);
  CHECK(a.velocity == 0.0);
  auto b = evaluate(seg, 1.0);
  CHECK(b.position == 1.0);
  CHECK(b.velocity == 0.0);
  CHECK(evaluate(seg, 0.5).position == 0.5);

  SmoothRef scaled{2.0, -6.0, 1.0, 4.0};
  auto mid = evaluate(scaled, 3.0);
  CHECK(mid.position == doctest::Approx(-2.0));
  CHECK(mid.velocity == doctest::Approx(-8.0 * 315.0 / 128.0 / 4.0));
  CHECK(evaluate(scaled, 0.0).position == 2.0);
  CHECK(evaluate(scaled, 10.0).position == -6.0);
}

TEST_CASE("smooth velocity is the derivative of position") {
  SmoothRef seg{-1.0, 3.0, 0.2, 1.5};
  const double h = 1e-6;
  for (double t = 0.25; t < 1.7; t += 0.05) {
    const double fd = (evaluate(seg, t + h).position - evaluate(seg, t - h).position) / (2 * h);
    CHECK(evaluate(seg, t).velocity == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("monotone and unit integral") {
  for (int i = 1; i < 1000; ++i) CHECK(c4::position(i / 1000.0) > c4::position((i - 1) / 1000.0));
  double integral = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    integral += 0.5 * (c4::velocity(double(i) / n) + c4::velocity(double(i + 1) / n)) / n;
  }
  CHECK(std::fabs(integral - 1.0) < 1e-9);
}

TEST_CASE("step and staircase") {
  StepRef step{1.5, 0.1};
  CHECK(evaluate(step, 0.05).position == 0.0);
  CHECK(evaluate(step, 0.1).position == 1.5);
  CHECK(evaluate(step, 0.2).velocity == 0.0);
  StaircaseRef stairs{{-8, -7, -6}, 2.0};
  CHECK(evaluate(stairs, 0.0).position == -8);
  CHECK(evaluate(stairs, 1.999).position == -8);
  CHECK(evaluate(stairs, 2.0).position == -7);
  CHECK(evaluate(stairs, 100.0).position == -6);
}

TEST_CASE("composite is left-continuous") {
  auto ref = smooth_through({0, 7, -8, 0}, 2.0, 0.5);
  CHECK(start_time(ref) == doctest::Approx(0.5));
  CHECK(evaluate(ref, 0.0).position == 0.0);
  for (double joint : {2.5, 4.5, 6.5}) {
    const auto at = evaluate(ref, joint);
    const auto before = evaluate(ref, joint - 1e-9);
    CHECK(at.position == doctest::Approx(before.position).epsilon(1e-6));
    CHECK(std::fabs(at.velocity) < 1e-6);
  }
  CHECK(evaluate(ref, 2.5).position == 7.0);
  CHECK(evaluate(ref, 4.5).position == -8.0);
  CHECK(evaluate(ref, 9.0).position == 0.0);
}

TEST_CASE("reference validation") {
  CHECK_THROWS_AS(validate(SmoothRef{0, 1, 0, 0}), Error);
  CHECK_THROWS_AS(validate(StaircaseRef{{1, 2}, 0}), Error);
  CHECK_THROWS_AS(validate(StaircaseRef{{}, 1}), Error);
  CHECK_THROWS_AS(evaluate(StepRef{1, 0}, -1.0), Error);
  CHECK_THROWS_AS(smooth_through({1.0}, 1.0), Error);
}
