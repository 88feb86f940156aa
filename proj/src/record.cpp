#include "actmod/record.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>

#include "actmod/error.hpp"

namespace actmod {

const char* const kRunCsvHeader =
    "t,setpoint_mm,setpoint_vel_mm_s,position_mm,velocity_mm_s,true_current_A,"
    "sensed_current_A,command_current_A,load_torque_Nm,encoder_count";

namespace {

void append_number(std::string& out, double v) {
  char buf[32];
  // Normalize negative zero so equal runs print equal text.
  if (v == 0.0) v = 0.0;
  std::snprintf(buf, sizeof buf, "%.9g", v);
  out += buf;
}

}  // namespace

std::string to_csv(const RunRecord& record) {
  std::string out;
  out.reserve(record.rows.size() * 120 + 200);
  out += kRunCsvHeader;
  out += '\n';
  for (const auto& r : record.rows) {
    for (double v : {r.t, r.setpoint_mm, r.setpoint_vel_mm_s, r.position_mm, r.velocity_mm_s,
                     r.true_current_a, r.sensed_current_a, r.command_current_a,
                     r.load_torque_nm}) {
      append_number(out, v);
      out += ',';
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%" PRId64 "\n", r.encoder_count);
    out += buf;
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x00000100000001b3ull;
  }
  return hash;
}

namespace {

// Linear interpolation of the first time r crosses `level` upward.
std::optional<double> first_crossing(const std::vector<double>& t, const std::vector<double>& r,
                                     double level) {
  if (r.empty()) return std::nullopt;
  if (r.front() >= level) return t.front();
  for (std::size_t i = 1; i < r.size(); ++i) {
    if (r[i] >= level) {
      const double f = (level - r[i - 1]) / (r[i] - r[i - 1]);
      return t[i - 1] + f * (t[i] - t[i - 1]);
    }
  }
  return std::nullopt;
}

}  // namespace

Metrics compute_metrics(const RunRecord& record, const Segment& seg) {
  if (!(seg.t_end > seg.t_begin))
    throw Error(ErrorCode::InvalidArgument, "segment must have t_end > t_begin");
  std::vector<double> t, y, err;
  for (const auto& row : record.rows) {
    if (row.t < seg.t_begin || row.t >= seg.t_end) continue;
    t.push_back(row.t);
    y.push_back(row.position_mm);
    err.push_back(row.setpoint_mm - row.position_mm);
  }
  if (t.empty()) throw Error(ErrorCode::InvalidArgument, "segment lies outside the record");

  Metrics m;
  double sq = 0.0;
  for (double e : err) sq += e * e;
  m.rms_tracking_error_mm = std::sqrt(sq / static_cast<double>(err.size()));

  const double tail_begin = seg.t_begin + 0.8 * (seg.t_end - seg.t_begin);
  double tail_sum = 0.0;
  std::size_t tail_n = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] >= tail_begin) {
      tail_sum += err[i];
      ++tail_n;
    }
  }
  if (tail_n == 0) {
    tail_sum = err.back();
    tail_n = 1;
  }
  m.steady_state_error_mm = std::abs(tail_sum / static_cast<double>(tail_n));

  if (seg.from_mm && seg.to_mm && *seg.to_mm != *seg.from_mm) {
    const double from = *seg.from_mm;
    const double height = *seg.to_mm - from;
    std::vector<double> r(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) r[i] = (y[i] - from) / height;

    m.overshoot_percent = std::max(0.0, (*std::max_element(r.begin(), r.end()) - 1.0) * 100.0);

    const auto t10 = first_crossing(t, r, 0.1);
    const auto t90 = first_crossing(t, r, 0.9);
    if (t10 && t90) m.rise_time_s = *t90 - *t10;

    constexpr double kBand = 0.02;
    if (std::abs(r.back() - 1.0) <= kBand) {
      std::size_t last_out = r.size();
      for (std::size_t i = r.size(); i-- > 0;) {
        if (std::abs(r[i] - 1.0) > kBand) {
          last_out = i;
          break;
        }
      }
      const std::size_t settled = last_out == r.size() ? 0 : last_out + 1;
      m.settling_time_s = t[settled] - seg.t_begin;
    }
  }
  return m;
}

Metrics compute_metrics(const RunRecord& record) {
  if (record.rows.empty()) throw Error(ErrorCode::InvalidArgument, "empty record");
  const double dt = record.meta.high_period > 0 ? record.meta.high_period : 1e-3;
  return compute_metrics(record, Segment{record.rows.front().t, record.rows.back().t + dt, std::nullopt, std::nullopt});
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error(ErrorCode::InvalidArgument, "pearson needs two equal-length series");
  const auto n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) throw Error(ErrorCode::UndefinedMetric, "pearson of a constant series");
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace actmod
