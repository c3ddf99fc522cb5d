#include "helix/metrics/tlsh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "helix/error.hpp"
#include "helix/util.hpp"

namespace helix::metrics {
namespace {

// Pearson permutation of 0..255: Fisher-Yates driven by splitmix64 from a
// fixed seed, so the table is reproducible and needs no literal.
constexpr std::array<std::uint8_t, 256> make_pearson_table() {
  std::array<std::uint8_t, 256> t{};
  for (int i = 0; i < 256; ++i) t[i] = static_cast<std::uint8_t>(i);
  std::uint64_t state = 0x5445534c48ULL;
  for (int i = 255; i > 0; --i) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    int j = static_cast<int>(z % static_cast<std::uint64_t>(i + 1));
    std::uint8_t tmp = t[i];
    t[i] = t[j];
    t[j] = tmp;
  }
  return t;
}

constexpr auto kPearson = make_pearson_table();

std::uint8_t pearson(std::uint8_t salt, std::uint8_t i, std::uint8_t j, std::uint8_t k) {
  std::uint8_t h = kPearson[salt];
  h = kPearson[h ^ i];
  h = kPearson[h ^ j];
  h = kPearson[h ^ k];
  return h;
}

int mod_diff(int x, int y, int range) {
  int d = std::abs(x - y);
  return std::min(d, range - d);
}

int header_penalty(int diff) { return diff <= 1 ? diff : diff * 12; }

[[noreturn]] void undefined() { throw Error("tlsh not defined"); }

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::uint8_t tlsh_log_length(std::uint64_t length) {
  const double len = static_cast<double>(length);
  double v;
  if (length <= 656) {
    v = std::floor(std::log(len) / std::log(1.5));
  } else if (length <= 3199) {
    v = std::floor(std::log(len) / std::log(1.3) - 8.72777);
  } else {
    v = std::floor(std::log(len) / std::log(1.1) - 62.5472);
  }
  return static_cast<std::uint8_t>(static_cast<std::int64_t>(v) & 0xff);
}

TlshDigest tlsh_digest(std::span<const std::uint8_t> data) {
  if (data.size() < kTlshMinLength) undefined();

  std::array<std::uint32_t, kTlshBuckets> buckets{};
  std::uint8_t checksum = 0;
  for (std::size_t i = 4; i < data.size(); ++i) {
    const std::uint8_t b0 = data[i], b1 = data[i - 1], b2 = data[i - 2], b3 = data[i - 3], b4 = data[i - 4];
    checksum = pearson(0, b0, b1, checksum);
    ++buckets[pearson(2, b0, b1, b2) % kTlshBuckets];
    ++buckets[pearson(3, b0, b1, b3) % kTlshBuckets];
    ++buckets[pearson(5, b0, b2, b3) % kTlshBuckets];
    ++buckets[pearson(7, b0, b2, b4) % kTlshBuckets];
    ++buckets[pearson(11, b0, b1, b4) % kTlshBuckets];
    ++buckets[pearson(13, b0, b3, b4) % kTlshBuckets];
  }

  auto sorted = buckets;
  std::sort(sorted.begin(), sorted.end());
  const std::uint32_t q1 = sorted[kTlshBuckets / 4 - 1];
  const std::uint32_t q2 = sorted[kTlshBuckets / 2 - 1];
  const std::uint32_t q3 = sorted[3 * kTlshBuckets / 4 - 1];
  if (q3 == 0) undefined();

  TlshDigest d;
  d.checksum = checksum;
  d.log_length = tlsh_log_length(data.size());
  d.q1_ratio = static_cast<std::uint8_t>((static_cast<std::uint64_t>(q1) * 100 / q3) % 16);
  d.q2_ratio = static_cast<std::uint8_t>((static_cast<std::uint64_t>(q2) * 100 / q3) % 16);
  for (std::size_t i = 0; i < kTlshBuckets; ++i) {
    unsigned code = buckets[i] <= q1 ? 0 : buckets[i] <= q2 ? 1 : buckets[i] <= q3 ? 2 : 3;
    d.body[i / 4] |= static_cast<std::uint8_t>(code << (2 * (i % 4)));
  }
  return d;
}

int tlsh_distance(const TlshDigest& a, const TlshDigest& b) {
  int diff = 0;
  diff += header_penalty(mod_diff(a.log_length, b.log_length, 256));
  diff += header_penalty(mod_diff(a.q1_ratio, b.q1_ratio, 16));
  diff += header_penalty(mod_diff(a.q2_ratio, b.q2_ratio, 16));
  diff += a.checksum != b.checksum;
  for (std::size_t i = 0; i < kTlshBuckets; ++i) {
    int d = std::abs(static_cast<int>(a.digit(i)) - static_cast<int>(b.digit(i)));
    diff += d == 3 ? 6 : d;
  }
  return diff;
}

double tlsh_similarity(const TlshDigest& a, const TlshDigest& b, double max_distance) {
  if (!(max_distance > 0)) throw Error("tlsh max distance must be positive");
  return std::clamp(1.0 - tlsh_distance(a, b) / max_distance, 0.0, 1.0);
}

std::string TlshDigest::str() const {
  std::array<std::uint8_t, 3 + kTlshBuckets / 4> raw{};
  raw[0] = checksum;
  raw[1] = log_length;
  raw[2] = static_cast<std::uint8_t>((q1_ratio << 4) | q2_ratio);
  std::copy(body.begin(), body.end(), raw.begin() + 3);
  return to_hex(raw);
}

TlshDigest TlshDigest::parse(std::string_view hex) {
  if (hex.size() != 70) throw Error("TLSH digest must be 70 hex characters");
  std::array<std::uint8_t, 35> raw{};
  for (std::size_t i = 0; i < raw.size(); ++i) {
    int hi = hex_value(hex[2 * i]), lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw Error("TLSH digest has a non-hex character");
    raw[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  TlshDigest d;
  d.checksum = raw[0];
  d.log_length = raw[1];
  d.q1_ratio = raw[2] >> 4;
  d.q2_ratio = raw[2] & 0xf;
  std::copy(raw.begin() + 3, raw.end(), d.body.begin());
  return d;
}

}  // namespace helix::metrics
