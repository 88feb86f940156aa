#pragma once

#include <cstdint>

namespace actmod {

/// Channel identifiers for random substreams. New channels must take new ids
/// so existing streams keep their values.
enum class NoiseChannel : std::uint64_t {
  CurrentSense = 1,
  TorqueDisturbance = 2,
};

/// Counter-based generator: every draw is a pure function of
/// (seed, channel, counter), hashed with a SplitMix64 finalizer. Normal
/// variates use Box-Muller on two consecutive uniforms so results are
/// identical on every platform and standard library.
class Substream {
 public:
  Substream(std::uint64_t seed, NoiseChannel channel) noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform on the open interval (0, 1).
  double uniform() noexcept;
  double normal() noexcept;

  std::uint64_t draws() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace actmod
