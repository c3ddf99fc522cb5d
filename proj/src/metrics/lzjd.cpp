#include "helix/metrics/lzjd.hpp"

#include <algorithm>
#include <unordered_set>

#include "helix/error.hpp"

namespace helix::metrics {
namespace {

template <typename Visit>
void lz_parse(std::span<const std::uint8_t> data, Visit&& visit) {
  if (data.empty()) throw Error("empty input");
  std::string_view text(reinterpret_cast<const char*>(data.data()), data.size());
  std::unordered_set<std::string_view> seen;
  std::size_t start = 0;
  for (std::size_t end = 1; end <= text.size(); ++end) {
    std::string_view current = text.substr(start, end - start);
    if (seen.insert(current).second) {
      visit(current);
      start = end;
    }
  }
}

}  // namespace

std::uint64_t lz_entry_hash(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : bytes) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 0x100000001b3ULL;
  }
  h ^= h >> 30;
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 27;
  h *= 0x94d049bb133111ebULL;
  h ^= h >> 31;
  return h;
}

std::set<std::string> lz_set(std::span<const std::uint8_t> data) {
  std::set<std::string> out;
  lz_parse(data, [&](std::string_view s) { out.emplace(s); });
  return out;
}

std::vector<std::uint64_t> lz_hashes(std::span<const std::uint8_t> data) {
  std::vector<std::uint64_t> out;
  lz_parse(data, [&](std::string_view s) { out.push_back(lz_entry_hash(s)); });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

LzjdSketch lzjd_sketch(std::span<const std::uint8_t> data, std::size_t k) {
  if (k == 0) throw Error("lzjd sketch size must be positive");
  LzjdSketch s;
  s.k = k;
  s.min_hashes = lz_hashes(data);
  if (s.min_hashes.size() > k) s.min_hashes.resize(k);
  return s;
}

double lzjd_similarity(const LzjdSketch& a, const LzjdSketch& b) {
  if (a.k != b.k) throw Error("lzjd sketches built with different k");
  std::size_t taken = 0, shared = 0;
  auto ia = a.min_hashes.begin(), ib = b.min_hashes.begin();
  while (taken < a.k && (ia != a.min_hashes.end() || ib != b.min_hashes.end())) {
    if (ib == b.min_hashes.end() || (ia != a.min_hashes.end() && *ia < *ib)) {
      ++ia;
    } else if (ia == a.min_hashes.end() || *ib < *ia) {
      ++ib;
    } else {
      ++shared;
      ++ia;
      ++ib;
    }
    ++taken;
  }
  if (taken == 0) return 1.0;
  return static_cast<double>(shared) / static_cast<double>(taken);
}

std::string LzjdSketch::str() const {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out = std::to_string(k) + ":";
  out.reserve(out.size() + min_hashes.size() * 16);
  for (auto h : min_hashes) {
    for (int shift = 60; shift >= 0; shift -= 4) out.push_back(digits[(h >> shift) & 0xf]);
  }
  return out;
}

LzjdSketch LzjdSketch::parse(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos || colon == 0) throw Error("malformed LZJD sketch");
  LzjdSketch s;
  s.k = 0;
  for (char c : text.substr(0, colon)) {
    if (c < '0' || c > '9') throw Error("malformed LZJD sketch size");
    s.k = s.k * 10 + static_cast<std::size_t>(c - '0');
  }
  auto hex = text.substr(colon + 1);
  if (hex.size() % 16 != 0) throw Error("malformed LZJD hash list");
  for (std::size_t i = 0; i < hex.size(); i += 16) {
    std::uint64_t h = 0;
    for (char c : hex.substr(i, 16)) {
      int v = (c >= '0' && c <= '9') ? c - '0' : (c >= 'a' && c <= 'f') ? c - 'a' + 10 : -1;
      if (v < 0) throw Error("malformed LZJD hash list");
      h = h << 4 | static_cast<std::uint64_t>(v);
    }
    s.min_hashes.push_back(h);
  }
  if (s.k == 0 || s.min_hashes.size() > s.k || !std::is_sorted(s.min_hashes.begin(), s.min_hashes.end()) ||
      std::adjacent_find(s.min_hashes.begin(), s.min_hashes.end()) != s.min_hashes.end()) {
    throw Error("malformed LZJD sketch: hashes must be strictly increasing and at most k");
  }
  return s;
}

}  // namespace helix::metrics
