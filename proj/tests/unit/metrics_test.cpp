#include <doctest.h>

#include <random>
#include <set>

#include "../support/oracles.hpp"
#include "helix/error.hpp"
#include "helix/metrics/metric.hpp"
#include "helix/util.hpp"

using namespace helix;
using namespace helix::metrics;

namespace {

Bytes bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

Bytes random_blob(std::mt19937_64& gen, std::size_t n) {
  Bytes b(n);
  for (auto& x : b) x = static_cast<std::uint8_t>(gen());
  return b;
}

std::set<std::string> as_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("lz_set examples") {
  CHECK(lz_set(bytes("abcabc")) == std::set<std::string>{"a", "b", "c", "ab"});
  CHECK(lz_set(bytes("abcabd")) == std::set<std::string>{"a", "b", "c", "ab", "d"});
  CHECK(lz_set(bytes("aaaa")) == std::set<std::string>{"a", "aa"});
  CHECK_THROWS_WITH_AS(lz_set(Bytes{}), "empty input", Error);
}

TEST_CASE("lz_set agrees with the brute-force parser on random text") {
  std::mt19937_64 gen(8);
  for (int i = 0; i < 200; ++i) {
    std::string s(1 + gen() % 300, 'a');
    for (auto& c : s) c = static_cast<char>('a' + gen() % 4);
    CHECK(lz_set(bytes(s)) == as_set(oracle::lz_phrases(s)));
  }
}

TEST_CASE("lzjd") {
  auto a = lzjd_sketch(bytes("abcabc"), 8), b = lzjd_sketch(bytes("abcabd"), 8);
  CHECK(lzjd_similarity(a, b) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(lzjd_similarity(a, a) == 1.0);
  CHECK(lzjd_similarity(a, b) == lzjd_similarity(b, a));
  CHECK_THROWS_AS(lzjd_similarity(a, lzjd_sketch(bytes("abcabd"), 16)), Error);

  std::mt19937_64 gen(3);
  auto x = random_blob(gen, 4096), y = random_blob(gen, 4096);
  CHECK(lzjd_similarity(lzjd_sketch(x), lzjd_sketch(y)) < 0.1);

  auto sk = lzjd_sketch(x);
  CHECK(sk.min_hashes.size() == std::min<std::size_t>(1024, lz_set(x).size()));
  CHECK(std::is_sorted(sk.min_hashes.begin(), sk.min_hashes.end()));
  CHECK(std::adjacent_find(sk.min_hashes.begin(), sk.min_hashes.end()) == sk.min_hashes.end());
  CHECK(LzjdSketch::parse(sk.str()) == sk);
  CHECK(sk.str().starts_with("1024:"));
}

TEST_CASE("weighted edit distance matches the oracle") {
  std::mt19937_64 gen(5);
  for (int i = 0; i < 300; ++i) {
    std::string a(gen() % 20, 'x'), b(gen() % 20, 'x');
    for (auto& c : a) c = static_cast<char>('A' + gen() % 3);
    for (auto& c : b) c = static_cast<char>('A' + gen() % 3);
    CHECK(ctph_edit_distance(a, b) == oracle::weighted_edit_distance(a, b));
  }
  CHECK(ctph_edit_distance("abc", "abd") == 2);
  CHECK(ctph_edit_distance("", "abc") == 3);
}

TEST_CASE("ctph") {
  std::mt19937_64 gen(21);
  auto x = random_blob(gen, 8192), y = random_blob(gen, 8192);
  auto dx = ctph_digest(x);
  CHECK(dx.sig1.size() <= 64);
  CHECK(dx.sig2.size() <= 32);
  CHECK(dx.block_size % 3 == 0);
  CHECK(ctph_digest(x) == dx);
  CHECK(CtphDigest::parse(dx.str()) == dx);
  CHECK(ctph_similarity(dx, dx) == 1.0);
  CHECK(ctph_similarity(dx, ctph_digest(y)) == 0.0);

  auto flipped = x;
  flipped[4096] ^= 0x5a;
  auto df = ctph_digest(flipped);
  double s = ctph_similarity(dx, df);
  CHECK(s > 0.0);
  CHECK(s <= 1.0);
  CHECK(ctph_similarity(df, dx) == s);
  if (df.block_size == dx.block_size) CHECK(oracle::weighted_edit_distance(dx.sig1, df.sig1) <= 4);

  // Block sizes more than a factor of two apart are incomparable.
  CtphDigest far = dx;
  far.block_size = dx.block_size * 4;
  CHECK(ctph_score(dx, far) == 0);
  CHECK_THROWS_AS(ctph_digest(Bytes{}), Error);
  CHECK_NOTHROW(ctph_digest(bytes("a")));
}

TEST_CASE("tlsh") {
  std::mt19937_64 gen(13);
  auto x = random_blob(gen, 4096);
  auto dx = tlsh_digest(x);
  CHECK(dx.str().size() == 70);
  CHECK(TlshDigest::parse(dx.str()) == dx);
  CHECK(tlsh_distance(dx, dx) == 0);
  CHECK(tlsh_similarity(dx, dx) == 1.0);

  auto longer = x;
  auto tail = random_blob(gen, 64);
  longer.insert(longer.end(), tail.begin(), tail.end());
  auto dl = tlsh_digest(longer);
  CHECK(tlsh_similarity(dx, dl) > 0.5);
  CHECK(tlsh_distance(dx, dl) == tlsh_distance(dl, dx));
  CHECK(tlsh_similarity(dx, dl, 1e-9) == 0.0);

  std::array<int, 4> digits{};
  auto big = tlsh_digest(random_blob(gen, 1 << 16));
  for (std::size_t i = 0; i < kTlshBuckets; ++i) ++digits[big.digit(i)];
  CAPTURE(digits);
  for (int d : digits) {
    CHECK(d >= 30);
    CHECK(d <= 34);
  }

  CHECK_THROWS_WITH_AS(tlsh_digest(Bytes(49, 7)), doctest::Contains("tlsh not defined"), Error);
  CHECK_THROWS_WITH_AS(tlsh_digest(Bytes(4096, 7)), doctest::Contains("tlsh not defined"), Error);
}

TEST_CASE("metric registry and contracts") {
  CHECK(metric_names() == std::vector<std::string>{"ctph", "tlsh", "lzjd", "naive"});
  CHECK_THROWS_WITH_AS(make_metric("sdhash"), doctest::Contains("valid"), Error);
  CHECK(naive_similarity(Bytes{}, Bytes{}) == 0.5);

  std::mt19937_64 gen(17);
  for (const auto& name : metric_names()) {
    auto m = make_metric(name);
    CHECK(m->name() == name);
    for (int i = 0; i < 5; ++i) {
      auto a = random_blob(gen, 64 + gen() % 4000), b = random_blob(gen, 64 + gen() % 4000);
      double ab = m->score(a, b).value, ba = m->score(b, a).value;
      CHECK(ab == ba);
      CHECK(ab >= 0.0);
      CHECK(ab <= 1.0);
      CHECK(m->score(a, a).value == (name == "naive" ? 0.5 : 1.0));
    }
  }
  CHECK_THROWS_AS(MetricScore("x", 1.5), Error);
  CHECK_THROWS_AS(MetricScore("x", -0.1), Error);
}
