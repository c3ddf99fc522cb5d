#include "helix/metrics/metric.hpp"

#include "helix/error.hpp"

namespace helix::metrics {

MetricScore::MetricScore(std::string name, double v) : metric_name(std::move(name)), value(v) {
  if (!(v >= 0.0 && v <= 1.0)) throw Error("metric " + metric_name + " produced out-of-range value " + std::to_string(v));
}

double naive_similarity(std::span<const std::uint8_t>, std::span<const std::uint8_t>) { return 0.5; }

MetricScore Metric::score(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) const {
  return MetricScore(std::string(name()), compare(digest(a), digest(b)));
}

namespace {

template <typename D>
const D& as(const Digest& d, std::string_view metric) {
  if (const D* p = std::get_if<D>(&d)) return *p;
  throw Error(std::string(metric) + ": digest of the wrong kind");
}

class CtphMetric final : public Metric {
 public:
  std::string_view name() const override { return "ctph"; }
  Digest digest(std::span<const std::uint8_t> data) const override { return ctph_digest(data); }
  double compare(const Digest& a, const Digest& b) const override {
    return ctph_similarity(as<CtphDigest>(a, name()), as<CtphDigest>(b, name()));
  }
};

class TlshMetric final : public Metric {
 public:
  explicit TlshMetric(double max_distance) : max_distance_(max_distance) {
    if (!(max_distance > 0)) throw Error("tlsh max distance must be positive");
  }
  std::string_view name() const override { return "tlsh"; }
  Digest digest(std::span<const std::uint8_t> data) const override { return tlsh_digest(data); }
  double compare(const Digest& a, const Digest& b) const override {
    return tlsh_similarity(as<TlshDigest>(a, name()), as<TlshDigest>(b, name()), max_distance_);
  }

 private:
  double max_distance_;
};

class LzjdMetric final : public Metric {
 public:
  explicit LzjdMetric(std::size_t k) : k_(k) {}
  std::string_view name() const override { return "lzjd"; }
  Digest digest(std::span<const std::uint8_t> data) const override { return lzjd_sketch(data, k_); }
  double compare(const Digest& a, const Digest& b) const override {
    return lzjd_similarity(as<LzjdSketch>(a, name()), as<LzjdSketch>(b, name()));
  }

 private:
  std::size_t k_;
};

class NaiveMetric final : public Metric {
 public:
  std::string_view name() const override { return "naive"; }
  Digest digest(std::span<const std::uint8_t>) const override { return std::monostate{}; }
  double compare(const Digest&, const Digest&) const override { return naive_similarity({}, {}); }
};

}  // namespace

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names{"ctph", "tlsh", "lzjd", "naive"};
  return names;
}

std::unique_ptr<Metric> make_metric(std::string_view name, const MetricOptions& options) {
  if (name == "ctph") return std::make_unique<CtphMetric>();
  if (name == "tlsh") return std::make_unique<TlshMetric>(options.tlsh_max_distance);
  if (name == "lzjd") return std::make_unique<LzjdMetric>(options.lzjd_k);
  if (name == "naive") return std::make_unique<NaiveMetric>();
  throw Error("unknown metric '" + std::string(name) + "' (valid: ctph, tlsh, lzjd, naive)");
}

}  // namespace helix::metrics
