#pragma once

// Reference formulas written out independently of the library, used as
// test oracles.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace oracle {

inline constexpr double g = 9.81;
inline constexpr double kt = 0.022071;
inline constexpr double r = 0.009;
inline constexpr double N = 4.0;
inline constexpr double cpr = 5000.0;

// Bitwise CRC-16/CCITT-FALSE, one bit at a time.
inline std::uint16_t crc16(const std::uint8_t* p, std::size_t n) {
  std::uint16_t crc = 0xFFFF;
  for (std::size_t i = 0; i < n; ++i) {
    for (int b = 7; b >= 0; --b) {
      const bool in = (p[i] >> b) & 1;
      const bool top = crc & 0x8000;
      crc = static_cast<std::uint16_t>(crc << 1);
      if (in != top) crc ^= 0x1021;
    }
  }
  return crc;
}

inline double counts_per_mm() { return cpr / (2.0 * std::numbers::pi) * N / r / 1000.0; }

inline double holding_current(double mass) { return mass * g * r / (N * kt); }

inline double pd_offset_mm(double mass, double kp) { return holding_current(mass) / kp; }

inline double tension_from_current(double amps) { return amps * kt * N / r; }

// Expanded power form of the rest-to-rest polynomial and its derivative.
inline double s(double u) {
  return 126 * std::pow(u, 5) - 420 * std::pow(u, 6) + 540 * std::pow(u, 7) -
         315 * std::pow(u, 8) + 70 * std::pow(u, 9);
}
inline double ds(double u) {
  return 630 * std::pow(u, 4) - 2520 * std::pow(u, 5) + 3780 * std::pow(u, 6) -
         2520 * std::pow(u, 7) + 630 * std::pow(u, 8);
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    syy += y[i] * y[i];
    sxy += x[i] * y[i];
  }
  const double cov = sxy - sx * sy / n;
  return cov / std::sqrt((sxx - sx * sx / n) * (syy - sy * sy / n));
}

// xorshift64*, for test-case generation only.
struct Gen {
  std::uint64_t x;
  explicit Gen(std::uint64_t seed) : x(seed ? seed : 0x9E3779B97F4A7C15ULL) {}
  std::uint64_t next() {
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    return x * 2685821657736338717ULL;
  }
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
  template <class T>
  T integer() {
    return static_cast<T>(next());
  }
};

}  // namespace oracle
