#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "helix/metrics/ctph.hpp"
#include "helix/metrics/lzjd.hpp"
#include "helix/metrics/tlsh.hpp"

namespace helix::metrics {

struct MetricScore {
  std::string metric_name;
  double value = 0.0;

  // Throws helix::Error unless 0 <= value <= 1.
  MetricScore(std::string name, double v);
};

// Always 0.5.
double naive_similarity(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

using Digest = std::variant<std::monostate, CtphDigest, TlshDigest, LzjdSketch>;

struct MetricOptions {
  double tlsh_max_distance = kTlshDefaultMaxDistance;
  std::size_t lzjd_k = kLzjdDefaultK;
};

// Two-phase similarity metric: digest each input once, compare digests
// pairwise. digest() throws helix::Error when the input violates the metric's
// preconditions.
class Metric {
 public:
  virtual ~Metric() = default;
  virtual std::string_view name() const = 0;
  virtual Digest digest(std::span<const std::uint8_t> data) const = 0;
  virtual double compare(const Digest& a, const Digest& b) const = 0;

  MetricScore score(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) const;
};

// "ctph", "tlsh", "lzjd", "naive". Throws helix::Error for anything else.
std::unique_ptr<Metric> make_metric(std::string_view name, const MetricOptions& options = {});
const std::vector<std::string>& metric_names();

}  // namespace helix::metrics
