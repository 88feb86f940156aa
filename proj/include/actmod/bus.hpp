#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>

namespace actmod::bus {

using Payload = std::array<std::uint8_t, 8>;

/// CRC-16/CCITT-FALSE: poly 0x1021, init 0xFFFF, no reflection, no xorout.
std::uint16_t crc16_ccitt_false(std::span<const std::uint8_t> bytes) noexcept;

inline constexpr std::uint8_t kFlagEnable = 0x01;
inline constexpr std::uint8_t kFlagClearFault = 0x02;

/// High-level -> low-level current command.
/// Layout: [id][seq lo][seq hi][mA lo][mA hi][flags][crc lo][crc hi],
/// crc over bytes 0..5.
struct CommandFrame {
  std::uint8_t module_id = 0;
  std::uint16_t sequence = 0;
  std::int16_t current_ma = 0;
  std::uint8_t flags = 0;

  bool operator==(const CommandFrame&) const = default;
};

Payload encode(const CommandFrame& frame) noexcept;
CommandFrame decode_command(std::span<const std::uint8_t, 8> payload);

/// Low-level -> high-level status, split over two payloads. The module id
/// travels in the frame identifier and is folded into the CRC.
/// A: [seq lo][seq hi][pos b0..b3][crc lo][crc hi]
/// B: [seq lo][seq hi][vel lo][vel hi][mA lo][mA hi][crc lo][crc hi]
/// crc over (module_id, bytes 0..5). Velocity is counts per ms times 256.
struct StatusFrame {
  std::uint8_t module_id = 0;
  std::uint16_t sequence = 0;
  std::int32_t position = 0;   // counts
  std::int16_t velocity = 0;   // counts/ms * 256
  std::int16_t current_ma = 0;

  bool operator==(const StatusFrame&) const = default;
};

struct StatusPayloads {
  Payload a{};
  Payload b{};
};

StatusPayloads encode(const StatusFrame& frame) noexcept;
StatusFrame decode_status(std::uint8_t module_id, std::span<const std::uint8_t, 8> a,
                          std::span<const std::uint8_t, 8> b);

/// CAN-style identifiers for the three payload kinds of one module.
std::uint16_t command_id(std::uint8_t module_id) noexcept;
std::uint16_t status_a_id(std::uint8_t module_id) noexcept;
std::uint16_t status_b_id(std::uint8_t module_id) noexcept;

// Fixed-point conversions; throw RangeOverflow outside 16 bits.
std::int16_t amps_to_milliamps(double amps);
double milliamps_to_amps(std::int16_t ma) noexcept;
std::int16_t counts_per_s_to_fixed(double counts_per_s);
double fixed_to_counts_per_s(std::int16_t fixed) noexcept;

/// In-order, lossless delivery of payloads with a fixed delay in
/// high-level ticks.
class LatencyQueue {
 public:
  explicit LatencyQueue(int latency_ticks);

  void push(std::int64_t tick, const Payload& payload);
  /// The payload due at `tick`, if any. Call once per tick, in order.
  std::optional<Payload> pop_due(std::int64_t tick);

  int latency() const noexcept { return latency_; }
  std::size_t in_flight() const noexcept { return queue_.size(); }

 private:
  struct Entry {
    std::int64_t due;
    Payload payload;
  };
  int latency_;
  std::deque<Entry> queue_;
};

}  // namespace actmod::bus
