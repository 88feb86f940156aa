#pragma once

#include <variant>
#include <vector>

namespace actmod {

/// Minimal-order rest-to-rest polynomial with vanishing derivatives 1..4 at
/// both ends: s(u) = 126u^5 - 420u^6 + 540u^7 - 315u^8 + 70u^9, u in [0, 1].
namespace c4 {
double position(double u) noexcept;
double velocity(double u) noexcept;  // ds/du
}  // namespace c4

struct ReferencePoint {
  double position = 0.0;  // mm
  double velocity = 0.0;  // mm/s
};

struct StepRef {
  double height = 0.0;  // mm
  double at = 0.0;      // s
};

/// Holds levels[i] on [i*dwell, (i+1)*dwell); the last level holds forever.
struct StaircaseRef {
  std::vector<double> levels;  // mm
  double dwell = 2.0;          // s
};

struct SmoothRef {
  double start = 0.0;  // mm
  double end = 0.0;    // mm
  double t0 = 0.0;     // s
  double duration = 1.0;  // s
};

class ReferenceSignal;

/// Piecewise reference: at time t the last part starting strictly before t
/// is active (the first part before its own start), which keeps chains of
/// smooth segments left-continuous at the joints.
struct CompositeRef {
  std::vector<ReferenceSignal> parts;
};

class ReferenceSignal {
 public:
  using Variant = std::variant<StepRef, StaircaseRef, SmoothRef, CompositeRef>;

  ReferenceSignal() : value_(StepRef{}) {}
  ReferenceSignal(StepRef r) : value_(std::move(r)) {}
  ReferenceSignal(StaircaseRef r) : value_(std::move(r)) {}
  ReferenceSignal(SmoothRef r) : value_(std::move(r)) {}
  ReferenceSignal(CompositeRef r) : value_(std::move(r)) {}

  const Variant& value() const noexcept { return value_; }

  ReferenceSignal& operator=(const ReferenceSignal&) = default;
  ReferenceSignal(const ReferenceSignal&) = default;
  ReferenceSignal(ReferenceSignal&&) noexcept = default;
  ReferenceSignal& operator=(ReferenceSignal&&) noexcept = default;

 private:
  Variant value_;
};

void validate(const ReferenceSignal& ref);

ReferencePoint evaluate(const ReferenceSignal& ref, double t);

/// Time at which the reference starts acting.
double start_time(const ReferenceSignal& ref);

/// Chain of smooth segments through the given waypoints, one segment of
/// `leg_duration` per pair, starting at t0.
ReferenceSignal smooth_through(const std::vector<double>& waypoints, double leg_duration,
                               double t0 = 0.0);

}  // namespace actmod
