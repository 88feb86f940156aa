#include "actmod/rng.hpp"

#include <cmath>
#include <numbers>

namespace actmod {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

Substream::Substream(std::uint64_t seed, NoiseChannel channel) noexcept
    : key_(mix64(mix64(seed) ^ static_cast<std::uint64_t>(channel))) {}

std::uint64_t Substream::next_u64() noexcept {
  return mix64(key_ ^ mix64(counter_++));
}

double Substream::uniform() noexcept {
  // 53 random mantissa bits, shifted off zero.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Substream::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

}  // namespace actmod
