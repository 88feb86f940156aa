#include "actmod/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "actmod/error.hpp"

namespace actmod {

namespace c4 {

double position(double u) noexcept {
  u = std::clamp(u, 0.0, 1.0);
  // Horner form of 126u^5 - 420u^6 + 540u^7 - 315u^8 + 70u^9.
  const double u5 = u * u * u * u * u;
  return u5 * (126.0 + u * (-420.0 + u * (540.0 + u * (-315.0 + u * 70.0))));
}

double velocity(double u) noexcept {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  // 630u^4 (1-u)^4
  const double v = u * (1.0 - u);
  return 630.0 * v * v * v * v;
}

}  // namespace c4

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

void validate(const ReferenceSignal& ref) {
  std::visit(overloaded{
                 [](const StepRef& r) {
                   require_finite(r.height, "step height");
                   require_finite(r.at, "step time");
                 },
                 [](const StaircaseRef& r) {
                   if (!(r.dwell > 0)) throw Error(ErrorCode::InvalidArgument, "dwell must be > 0");
                   if (r.levels.empty())
                     throw Error(ErrorCode::InvalidArgument, "staircase needs levels");
                   for (double l : r.levels) require_finite(l, "staircase level");
                 },
                 [](const SmoothRef& r) {
                   require_finite(r.start, "smooth start");
                   require_finite(r.end, "smooth end");
                   require_finite(r.t0, "smooth t0");
                   if (!(r.duration > 0) || !std::isfinite(r.duration))
                     throw Error(ErrorCode::InvalidArgument, "smooth duration must be > 0");
                 },
                 [](const CompositeRef& r) {
                   if (r.parts.empty())
                     throw Error(ErrorCode::InvalidArgument, "composite needs parts");
                   for (const auto& p : r.parts) validate(p);
                 },
             },
             ref.value());
}

double start_time(const ReferenceSignal& ref) {
  return std::visit(overloaded{
                        [](const StepRef& r) { return r.at; },
                        [](const StaircaseRef&) { return 0.0; },
                        [](const SmoothRef& r) { return r.t0; },
                        [](const CompositeRef& r) {
                          return r.parts.empty() ? 0.0 : start_time(r.parts.front());
                        },
                    },
                    ref.value());
}

ReferencePoint evaluate(const ReferenceSignal& ref, double t) {
  require_finite(t, "reference time");
  if (t < 0) throw Error(ErrorCode::InvalidArgument, "reference time must be >= 0");
  return std::visit(
      overloaded{
          [&](const StepRef& r) {
            return ReferencePoint{t >= r.at ? r.height : 0.0, 0.0};
          },
          [&](const StaircaseRef& r) {
            const double index = std::floor(std::max(t, 0.0) / r.dwell);
            const auto last = static_cast<double>(r.levels.size() - 1);
            return ReferencePoint{r.levels[static_cast<std::size_t>(std::min(index, last))], 0.0};
          },
          [&](const SmoothRef& r) {
            const double u = (t - r.t0) / r.duration;
            const double span = r.end - r.start;
            return ReferencePoint{r.start + span * c4::position(u),
                                  span * c4::velocity(u) / r.duration};
          },
          [&](const CompositeRef& r) {
            const ReferenceSignal* active = &r.parts.front();
            for (const auto& part : r.parts) {
              if (start_time(part) < t) active = &part;
            }
            return evaluate(*active, t);
          },
      },
      ref.value());
}

ReferenceSignal smooth_through(const std::vector<double>& waypoints, double leg_duration,
                               double t0) {
  if (waypoints.size() < 2)
    throw Error(ErrorCode::InvalidArgument, "smooth trajectory needs at least two waypoints");
  CompositeRef composite;
  for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
    composite.parts.emplace_back(SmoothRef{waypoints[i], waypoints[i + 1],
                                           t0 + static_cast<double>(i) * leg_duration,
                                           leg_duration});
  }
  return composite;
}

}  // namespace actmod
