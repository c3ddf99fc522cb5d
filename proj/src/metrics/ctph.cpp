#include "helix/metrics/ctph.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <vector>

#include "helix/error.hpp"

namespace helix::metrics {
namespace {

constexpr std::string_view kBase64 = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
constexpr std::uint32_t kHashPrime = 0x01000193;
constexpr std::uint32_t kHashInit = 0x28021967;

class RollingHash {
 public:
  std::uint32_t push(std::uint8_t c) {
    h2_ -= h1_;
    h2_ += static_cast<std::uint32_t>(kCtphWindow) * c;
    h1_ += c;
    h1_ -= window_[n_ % kCtphWindow];
    window_[n_ % kCtphWindow] = c;
    ++n_;
    h3_ = (h3_ << 5) ^ c;
    return h1_ + h2_ + h3_;
  }

 private:
  std::array<std::uint8_t, kCtphWindow> window_{};
  std::uint32_t h1_ = 0, h2_ = 0, h3_ = 0;
  std::size_t n_ = 0;
};

std::uint32_t piece_hash(std::uint32_t h, std::uint8_t c) { return (h * kHashPrime) ^ c; }

struct Signatures {
  std::string sig1, sig2;
};

Signatures signatures_at(std::span<const std::uint8_t> data, std::uint32_t bs) {
  Signatures out;
  RollingHash roll;
  std::uint32_t h1 = kHashInit, h2 = kHashInit;
  bool tail1 = false, tail2 = false;
  for (std::uint8_t c : data) {
    std::uint32_t r = roll.push(c);
    h1 = piece_hash(h1, c);
    h2 = piece_hash(h2, c);
    tail1 = tail2 = true;
    if (r % bs == bs - 1 && out.sig1.size() < kCtphSignatureLength - 1) {
      out.sig1.push_back(kBase64[h1 % 64]);
      h1 = kHashInit;
      tail1 = false;
    }
    if (r % (bs * 2) == bs * 2 - 1 && out.sig2.size() < kCtphSignatureLength / 2 - 1) {
      out.sig2.push_back(kBase64[h2 % 64]);
      h2 = kHashInit;
      tail2 = false;
    }
  }
  if (tail1) out.sig1.push_back(kBase64[h1 % 64]);
  if (tail2) out.sig2.push_back(kBase64[h2 % 64]);
  return out;
}

// Runs of more than three identical characters carry little information and
// inflate scores; collapse them to three.
std::string eliminate_sequences(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i >= 3 && s[i] == s[i - 1] && s[i] == s[i - 2] && s[i] == s[i - 3]) continue;
    out.push_back(s[i]);
  }
  return out;
}

bool has_common_substring(std::string_view a, std::string_view b) {
  if (a.size() < kCtphWindow || b.size() < kCtphWindow) return false;
  for (std::size_t i = 0; i + kCtphWindow <= a.size(); ++i) {
    if (b.find(a.substr(i, kCtphWindow)) != std::string_view::npos) return true;
  }
  return false;
}

int score_strings(std::string_view s1, std::string_view s2, std::uint32_t block_size) {
  if (s1.size() > kCtphSignatureLength || s2.size() > kCtphSignatureLength) return 0;
  if (!has_common_substring(s1, s2)) return 0;
  auto len1 = static_cast<std::uint32_t>(s1.size());
  auto len2 = static_cast<std::uint32_t>(s2.size());
  auto score = static_cast<std::uint32_t>(ctph_edit_distance(s1, s2));
  score = (score * kCtphSignatureLength) / (len1 + len2);
  score = (100 * score) / kCtphSignatureLength;
  if (score >= 100) return 0;
  score = 100 - score;
  // Small block sizes cannot justify high confidence: cap by signature length.
  constexpr std::uint32_t kUncapped = (99 + kCtphWindow) / kCtphWindow * kCtphMinBlockSize;
  if (block_size >= kUncapped) return static_cast<int>(score);
  std::uint32_t cap = block_size / kCtphMinBlockSize * std::min(len1, len2);
  return static_cast<int>(std::min(score, cap));
}

}  // namespace

std::string CtphDigest::str() const { return std::to_string(block_size) + ":" + sig1 + ":" + sig2; }

CtphDigest CtphDigest::parse(std::string_view text) {
  auto c1 = text.find(':');
  auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
  if (c2 == std::string_view::npos) throw Error("malformed CTPH digest '" + std::string(text) + "'");
  CtphDigest d;
  auto [p, ec] = std::from_chars(text.data(), text.data() + c1, d.block_size);
  if (ec != std::errc() || p != text.data() + c1 || d.block_size == 0) {
    throw Error("malformed CTPH block size in '" + std::string(text) + "'");
  }
  d.sig1 = std::string(text.substr(c1 + 1, c2 - c1 - 1));
  d.sig2 = std::string(text.substr(c2 + 1));
  return d;
}

CtphDigest ctph_digest(std::span<const std::uint8_t> data) {
  if (data.empty()) throw Error("empty input");
  std::uint32_t bs = kCtphMinBlockSize;
  while (static_cast<std::uint64_t>(bs) * kCtphSignatureLength < data.size()) bs *= 2;
  for (;;) {
    Signatures sig = signatures_at(data, bs);
    if (bs > kCtphMinBlockSize && sig.sig1.size() < kCtphSignatureLength / 2) {
      bs /= 2;
      continue;
    }
    return {bs, std::move(sig.sig1), std::move(sig.sig2)};
  }
}

std::size_t ctph_edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 2);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

int ctph_score(const CtphDigest& a, const CtphDigest& b) {
  const std::uint32_t bs1 = a.block_size, bs2 = b.block_size;
  if (bs1 != bs2 && bs1 != bs2 * 2 && bs2 != bs1 * 2) return 0;

  const std::string a1 = eliminate_sequences(a.sig1), a2 = eliminate_sequences(a.sig2);
  const std::string b1 = eliminate_sequences(b.sig1), b2 = eliminate_sequences(b.sig2);
  if (bs1 == bs2 && a1 == b1 && a2 == b2) return 100;

  if (bs1 == bs2) return std::max(score_strings(a1, b1, bs1), score_strings(a2, b2, bs1 * 2));
  if (bs1 == bs2 * 2) return score_strings(a1, b2, bs1);
  return score_strings(a2, b1, bs2);
}

double ctph_similarity(const CtphDigest& a, const CtphDigest& b) { return ctph_score(a, b) / 100.0; }

}  // namespace helix::metrics
