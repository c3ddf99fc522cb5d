#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace helix::metrics {

// Context-triggered piecewise hash: a rolling hash over a 7-byte window picks
// chunk boundaries; each chunk contributes one base64 character of an FNV-style
// hash. sig1 uses block_size, sig2 uses 2 * block_size.
struct CtphDigest {
  std::uint32_t block_size = 0;
  std::string sig1;  // at most 64 characters
  std::string sig2;  // at most 32 characters

  std::string str() const;
  static CtphDigest parse(std::string_view text);
  friend bool operator==(const CtphDigest&, const CtphDigest&) = default;
};

inline constexpr std::uint32_t kCtphMinBlockSize = 3;
inline constexpr std::size_t kCtphSignatureLength = 64;
inline constexpr std::size_t kCtphWindow = 7;

// Throws helix::Error("empty input") on empty data.
CtphDigest ctph_digest(std::span<const std::uint8_t> data);

// 0..100 match score. Block sizes must be equal or differ by a factor of two,
// otherwise 0. Signatures without a common substring of 7 characters score 0.
int ctph_score(const CtphDigest& a, const CtphDigest& b);

// ctph_score / 100.
double ctph_similarity(const CtphDigest& a, const CtphDigest& b);

// Weighted edit distance used by the comparison: insert and delete cost 1,
// substitution costs 2.
std::size_t ctph_edit_distance(std::string_view a, std::string_view b);

}  // namespace helix::metrics
