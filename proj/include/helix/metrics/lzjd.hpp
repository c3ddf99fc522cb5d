#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace helix::metrics {

inline constexpr std::size_t kLzjdDefaultK = 1024;

// LZ78-style dictionary: grow the current substring until it is new, record
// it, restart. A trailing substring that is already known is dropped.
// Throws helix::Error("empty input") on empty data.
std::set<std::string> lz_set(std::span<const std::uint8_t> data);

// Same parse, returning the 64-bit hash of every entry (unsorted, unique).
std::vector<std::uint64_t> lz_hashes(std::span<const std::uint8_t> data);

// FNV-1a over the raw bytes followed by the splitmix64 finalizer.
std::uint64_t lz_entry_hash(std::string_view bytes);

struct LzjdSketch {
  std::size_t k = kLzjdDefaultK;
  std::vector<std::uint64_t> min_hashes;  // strictly increasing, at most k

  // `k:` followed by 16 hex digits per hash.
  std::string str() const;
  static LzjdSketch parse(std::string_view text);
  friend bool operator==(const LzjdSketch&, const LzjdSketch&) = default;
};

LzjdSketch lzjd_sketch(std::span<const std::uint8_t> data, std::size_t k = kLzjdDefaultK);

// Bottom-k estimate of the Jaccard index of the two hashed LZ sets: among the
// k smallest hashes of the union, the fraction present in both. Exact when the
// union has at most k elements. Throws helix::Error on mismatched k.
double lzjd_similarity(const LzjdSketch& a, const LzjdSketch& b);

}  // namespace helix::metrics
