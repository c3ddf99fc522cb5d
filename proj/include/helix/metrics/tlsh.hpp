#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace helix::metrics {

inline constexpr std::size_t kTlshBuckets = 128;
inline constexpr std::size_t kTlshMinLength = 50;
inline constexpr double kTlshDefaultMaxDistance = 300.0;

// Locality-sensitive digest: a 5-byte sliding window feeds six byte triplets
// per position into 128 buckets; bucket counts are quantized against their
// quartiles into 2-bit digits.
struct TlshDigest {
  std::uint8_t checksum = 0;
  std::uint8_t log_length = 0;
  std::uint8_t q1_ratio = 0;  // 4 bits
  std::uint8_t q2_ratio = 0;  // 4 bits
  std::array<std::uint8_t, kTlshBuckets / 4> body{};

  // Digit (0..3) of bucket i.
  unsigned digit(std::size_t i) const { return (body[i / 4] >> (2 * (i % 4))) & 3u; }

  // 70 hex characters: checksum, log length, q ratios, body.
  std::string str() const;
  static TlshDigest parse(std::string_view hex);
  friend bool operator==(const TlshDigest&, const TlshDigest&) = default;
};

// Throws helix::Error("tlsh not defined") when data is shorter than 50 bytes or
// too uniform to populate the upper quartile.
TlshDigest tlsh_digest(std::span<const std::uint8_t> data);

// Header penalties (log length and q ratios, modular differences multiplied
// by 12 when above 1; checksum mismatch adds 1) plus body digit differences
// (a difference of 3 counts as 6).
int tlsh_distance(const TlshDigest& a, const TlshDigest& b);

// clamp(1 - distance / max_distance, 0, 1).
double tlsh_similarity(const TlshDigest& a, const TlshDigest& b, double max_distance = kTlshDefaultMaxDistance);

// Length code stored in the header.
std::uint8_t tlsh_log_length(std::uint64_t length);

}  // namespace helix::metrics
