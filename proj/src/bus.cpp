#include "actmod/bus.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "actmod/error.hpp"

namespace actmod::bus {

std::uint16_t crc16_ccitt_false(std::span<const std::uint8_t> bytes) noexcept {
  std::uint16_t crc = 0xFFFF;
  for (std::uint8_t byte : bytes) {
    crc ^= static_cast<std::uint16_t>(byte) << 8;
    for (int bit = 0; bit < 8; ++bit) {
      crc = (crc & 0x8000) ? static_cast<std::uint16_t>((crc << 1) ^ 0x1021)
                           : static_cast<std::uint16_t>(crc << 1);
    }
  }
  return crc;
}

namespace {

void put_u16(Payload& p, std::size_t at, std::uint16_t v) noexcept {
  p[at] = static_cast<std::uint8_t>(v & 0xFF);
  p[at + 1] = static_cast<std::uint8_t>(v >> 8);
}

std::uint16_t get_u16(std::span<const std::uint8_t, 8> p, std::size_t at) noexcept {
  return static_cast<std::uint16_t>(p[at] | (p[at + 1] << 8));
}

std::uint16_t status_crc(std::uint8_t module_id, std::span<const std::uint8_t, 8> p) noexcept {
  std::array<std::uint8_t, 7> bytes{module_id, p[0], p[1], p[2], p[3], p[4], p[5]};
  return crc16_ccitt_false(bytes);
}

void check_crc(std::uint16_t expected, std::uint16_t stored, const char* what) {
  if (expected != stored) {
    throw Error(ErrorCode::CrcMismatch, std::string(what) + ": crc mismatch");
  }
}

std::int16_t to_i16(double value, const char* what) {
  if (!std::isfinite(value)) throw Error(ErrorCode::RangeOverflow, std::string(what) + " not finite");
  const double rounded = std::round(value);
  if (rounded > std::numeric_limits<std::int16_t>::max() ||
      rounded < -std::numeric_limits<std::int16_t>::max()) {
    throw Error(ErrorCode::RangeOverflow, std::string(what) + " exceeds 16-bit range");
  }
  return static_cast<std::int16_t>(rounded);
}

}  // namespace

Payload encode(const CommandFrame& frame) noexcept {
  Payload p{};
  p[0] = frame.module_id;
  put_u16(p, 1, frame.sequence);
  put_u16(p, 3, static_cast<std::uint16_t>(frame.current_ma));
  p[5] = frame.flags;
  put_u16(p, 6, crc16_ccitt_false(std::span(p).first<6>()));
  return p;
}

CommandFrame decode_command(std::span<const std::uint8_t, 8> payload) {
  check_crc(crc16_ccitt_false(payload.first<6>()), get_u16(payload, 6), "command frame");
  CommandFrame f;
  f.module_id = payload[0];
  f.sequence = get_u16(payload, 1);
  f.current_ma = static_cast<std::int16_t>(get_u16(payload, 3));
  f.flags = payload[5];
  return f;
}

StatusPayloads encode(const StatusFrame& frame) noexcept {
  StatusPayloads out;
  put_u16(out.a, 0, frame.sequence);
  const auto pos = static_cast<std::uint32_t>(frame.position);
  put_u16(out.a, 2, static_cast<std::uint16_t>(pos & 0xFFFF));
  put_u16(out.a, 4, static_cast<std::uint16_t>(pos >> 16));
  put_u16(out.a, 6, status_crc(frame.module_id, out.a));

  put_u16(out.b, 0, frame.sequence);
  put_u16(out.b, 2, static_cast<std::uint16_t>(frame.velocity));
  put_u16(out.b, 4, static_cast<std::uint16_t>(frame.current_ma));
  put_u16(out.b, 6, status_crc(frame.module_id, out.b));
  return out;
}

StatusFrame decode_status(std::uint8_t module_id, std::span<const std::uint8_t, 8> a,
                          std::span<const std::uint8_t, 8> b) {
  check_crc(status_crc(module_id, a), get_u16(a, 6), "status frame A");
  check_crc(status_crc(module_id, b), get_u16(b, 6), "status frame B");
  const std::uint16_t seq = get_u16(a, 0);
  if (get_u16(b, 0) != seq) {
    throw Error(ErrorCode::InvalidArgument, "status frames A and B carry different sequences");
  }
  StatusFrame f;
  f.module_id = module_id;
  f.sequence = seq;
  f.position = static_cast<std::int32_t>(static_cast<std::uint32_t>(get_u16(a, 2)) |
                                         (static_cast<std::uint32_t>(get_u16(a, 4)) << 16));
  f.velocity = static_cast<std::int16_t>(get_u16(b, 2));
  f.current_ma = static_cast<std::int16_t>(get_u16(b, 4));
  return f;
}

std::uint16_t command_id(std::uint8_t module_id) noexcept {
  return static_cast<std::uint16_t>(0x100 + module_id);
}
std::uint16_t status_a_id(std::uint8_t module_id) noexcept {
  return static_cast<std::uint16_t>(0x200 + module_id);
}
std::uint16_t status_b_id(std::uint8_t module_id) noexcept {
  return static_cast<std::uint16_t>(0x300 + module_id);
}

std::int16_t amps_to_milliamps(double amps) { return to_i16(amps * 1000.0, "current"); }

double milliamps_to_amps(std::int16_t ma) noexcept { return ma / 1000.0; }

std::int16_t counts_per_s_to_fixed(double counts_per_s) {
  return to_i16(counts_per_s / 1000.0 * 256.0, "velocity");
}

double fixed_to_counts_per_s(std::int16_t fixed) noexcept { return fixed / 256.0 * 1000.0; }

LatencyQueue::LatencyQueue(int latency_ticks) : latency_(latency_ticks) {
  if (latency_ticks < 0) throw Error(ErrorCode::InvalidArgument, "latency_ticks must be >= 0");
}

void LatencyQueue::push(std::int64_t tick, const Payload& payload) {
  queue_.push_back({tick + latency_, payload});
}

std::optional<Payload> LatencyQueue::pop_due(std::int64_t tick) {
  if (queue_.empty() || queue_.front().due > tick) return std::nullopt;
  Payload p = queue_.front().payload;
  queue_.pop_front();
  return p;
}

}  // namespace actmod::bus
