#include <doctest.h>

#include <cstring>
#include <string_view>

#include "actmod/bus.hpp"
#include "actmod/error.hpp"
#include "oracles.hpp"

using namespace actmod;
using namespace actmod::bus;

namespace {

CommandFrame random_command(oracle::Gen& g) {
  return {g.integer<std::uint8_t>(), g.integer<std::uint16_t>(), g.integer<std::int16_t>(),
          g.integer<std::uint8_t>()};
}

StatusFrame random_status(oracle::Gen& g) {
  return {g.integer<std::uint8_t>(), g.integer<std::uint16_t>(), g.integer<std::int32_t>(),
          g.integer<std::int16_t>(), g.integer<std::int16_t>()};
}

}  // namespace

TEST_CASE("crc check value") {
  constexpr std::string_view check = "123456789";
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(check.data());
  CHECK(crc16_ccitt_false({bytes, check.size()}) == 0x29B1);
  CHECK(oracle::crc16(bytes, check.size()) == 0x29B1);
  CHECK(crc16_ccitt_false({}) == 0xFFFF);
}

TEST_CASE("zero command frame") {
  const auto p = encode(CommandFrame{});
  const std::uint8_t zeros[6] = {};
  const auto crc = oracle::crc16(zeros, 6);
  for (int i = 0; i < 6; ++i) CHECK(p[i] == 0);
  CHECK(p[6] == (crc & 0xFF));
  CHECK(p[7] == (crc >> 8));
}

TEST_CASE("command layout") {
  CommandFrame f{0x12, 0xABCD, amps_to_milliamps(1.0), kFlagEnable};
  const auto p = encode(f);
  CHECK(p[0] == 0x12);
  CHECK(p[1] == 0xCD);
  CHECK(p[2] == 0xAB);
  CHECK(p[3] == 0xE8);
  CHECK(p[4] == 0x03);
  CHECK(p[5] == 0x01);
  CHECK((p[6] | (p[7] << 8)) == oracle::crc16(p.data(), 6));
  const auto neg = encode(CommandFrame{0, 0, amps_to_milliamps(-1.0), 0});
  CHECK(neg[3] == 0x18);
  CHECK(neg[4] == 0xFC);
  CHECK(decode_command(p) == f);
}

TEST_CASE("status layout") {
  StatusFrame f{7, 0x0102, -2, counts_per_s_to_fixed(1000.0), -1500};
  const auto [a, b] = encode(f);
  CHECK(a[0] == 0x02);
  CHECK(a[1] == 0x01);
  CHECK(a[2] == 0xFE);
  CHECK(a[3] == 0xFF);
  CHECK(a[4] == 0xFF);
  CHECK(a[5] == 0xFF);
  std::uint8_t buf[7] = {7, a[0], a[1], a[2], a[3], a[4], a[5]};
  CHECK((a[6] | (a[7] << 8)) == oracle::crc16(buf, 7));
  CHECK(b[0] == 0x02);
  CHECK(b[2] == 0x00);  // 1 count/ms * 256 = 0x0100
  CHECK(b[3] == 0x01);
  CHECK(std::int16_t(b[4] | (b[5] << 8)) == -1500);
  CHECK(decode_status(7, a, b) == f);
  // Same payload under another module id fails the CRC.
  CHECK_THROWS_AS(decode_status(8, a, b), Error);
}

TEST_CASE("status halves must share a sequence") {
  const auto one = encode(StatusFrame{1, 10, 5, 6, 7});
  const auto two = encode(StatusFrame{1, 11, 5, 6, 7});
  CHECK_THROWS_AS(decode_status(1, one.a, two.b), Error);
}

TEST_CASE("randomized round trip") {
  oracle::Gen g(42);
  for (int i = 0; i < 10000; ++i) {
    const auto c = random_command(g);
    REQUIRE(decode_command(encode(c)) == c);
    const auto s = random_status(g);
    const auto p = encode(s);
    REQUIRE(decode_status(s.module_id, p.a, p.b) == s);
  }
}

TEST_CASE("every single-bit flip is caught") {
  oracle::Gen g(7);
  for (int i = 0; i < 100; ++i) {
    const auto p = encode(random_command(g));
    for (int bit = 0; bit < 64; ++bit) {
      auto bad = p;
      bad[bit / 8] ^= std::uint8_t(1u << (bit % 8));
      try {
        decode_command(bad);
        FAIL("flip not detected");
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::CrcMismatch);
      }
    }
    const auto s = random_status(g);
    const auto sp = encode(s);
    for (int bit = 0; bit < 128; ++bit) {
      auto a = sp.a;
      auto b = sp.b;
      (bit < 64 ? a : b)[(bit % 64) / 8] ^= std::uint8_t(1u << (bit % 8));
      CHECK_THROWS_AS(decode_status(s.module_id, a, b), Error);
    }
  }
}

TEST_CASE("fixed-point ranges") {
  CHECK(amps_to_milliamps(32.767) == 32767);
  CHECK(amps_to_milliamps(-32.767) == -32767);
  CHECK_THROWS_AS(amps_to_milliamps(33.0), Error);
  CHECK_THROWS_AS(amps_to_milliamps(NAN), Error);
  CHECK(milliamps_to_amps(1234) == doctest::Approx(1.234));
  CHECK(counts_per_s_to_fixed(-2000.0) == -512);
  CHECK(fixed_to_counts_per_s(-512) == doctest::Approx(-2000.0));
  CHECK_THROWS_AS(counts_per_s_to_fixed(200000.0), Error);
  try {
    amps_to_milliamps(40.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RangeOverflow);
  }
}

TEST_CASE("identifiers") {
  CHECK(command_id(1) == 0x101);
  CHECK(status_a_id(1) == 0x201);
  CHECK(status_b_id(0xFF) == 0x3FF);
}

TEST_CASE("latency queue") {
  SUBCASE("zero latency delivers the same tick") {
    LatencyQueue q(0);
    q.push(5, encode(CommandFrame{1, 5, 100, 1}));
    auto got = q.pop_due(5);
    REQUIRE(got);
    CHECK(decode_command(*got).sequence == 5);
  }
  SUBCASE("one tick") {
    LatencyQueue q(1);
    std::int64_t first_seen = -1;
    std::int64_t last_seq = -1;
    for (std::int64_t k = 0; k < 20; ++k) {
      q.push(k, encode(CommandFrame{1, std::uint16_t(k), std::int16_t(k >= 5 ? 1000 : 0), 1}));
      if (auto got = q.pop_due(k)) {
        const auto f = decode_command(*got);
        CHECK(f.sequence > last_seq);
        last_seq = f.sequence;
        if (f.current_ma == 1000 && first_seen < 0) first_seen = k;
      }
    }
    CHECK(first_seen == 6);
    CHECK(q.in_flight() == 1);
  }
  SUBCASE("negative latency rejected") { CHECK_THROWS_AS(LatencyQueue(-1), Error); }
}
