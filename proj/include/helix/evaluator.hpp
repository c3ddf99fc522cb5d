#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "helix/generator.hpp"
#include "helix/metrics/metric.hpp"

namespace helix {

struct PairRow {
  std::string id_a;  // id_a < id_b
  std::string id_b;
  double ground_truth = 0.0;
  std::map<std::string, std::optional<double>> scores;  // nullopt: metric error
};

struct PairScoreTable {
  std::vector<std::string> metrics;  // column order
  std::vector<PairRow> rows;         // sorted by (id_a, id_b)
};

// Table with ground truth only, no metric columns.
PairScoreTable ground_truth_table(const DatasetManifest& manifest);

// Scores every unordered sample pair with every metric. Binaries are read from
// `dataset_dir`; a missing binary throws helix::Error naming the sample. Inputs
// a metric cannot digest are recorded as errors for every row they touch.
PairScoreTable score_pairs(const DatasetManifest& manifest, const std::filesystem::path& dataset_dir,
                           const std::vector<std::string>& metric_names, const metrics::MetricOptions& options = {},
                           unsigned jobs = 1);

// Mean |score - ground truth| over rows where the metric produced a score.
// Throws helix::Error if there are none.
double mean_absolute_error(const PairScoreTable& table, const std::string& metric);
std::size_t error_count(const PairScoreTable& table, const std::string& metric);

struct HistogramBin {
  double low = 0.0;
  double high = 0.0;
  std::size_t count = 0;
};

// Equal-width bins over [0, 1]; lower-inclusive, the last bin also holds 1.0.
std::vector<HistogramBin> histogram(const std::vector<double>& values, std::size_t bins);
std::vector<HistogramBin> ground_truth_histogram(const DatasetManifest& manifest, std::size_t bins);

// Merges a CSV (`id_a,id_b,score`) as column `metric_name`. Pairs absent from
// the file become errors. Throws helix::Error with the row number on malformed
// rows, out-of-range scores, unknown sample ids, or repeated pairs.
PairScoreTable import_external_scores(PairScoreTable table, const std::string& metric_name,
                                      const std::filesystem::path& score_file);
PairScoreTable import_external_scores(PairScoreTable table, const std::string& metric_name, std::istream& csv);

struct EvaluationReport {
  std::map<std::string, double> mae;  // metrics with at least one score
  std::map<std::string, std::size_t> errors;
  std::vector<HistogramBin> histogram;
  std::size_t pair_count = 0;
  std::string dataset_fingerprint;
  double tlsh_max_distance = metrics::kTlshDefaultMaxDistance;
};

EvaluationReport make_report(const PairScoreTable& table, std::vector<HistogramBin> hist,
                             std::string dataset_fingerprint, double tlsh_max_distance);

// JSON with keys mae, errors, histogram, pair_count, dataset_fingerprint,
// tlsh_max_distance. Newline-terminated.
std::string report_json(const EvaluationReport& report);

// Aligned text table, metrics sorted by ascending MAE.
std::string report_table(const EvaluationReport& report);

// One line per pair: id_a,id_b,ground_truth,<metric...>; unscored cells read "error".
std::string pair_table_csv(const PairScoreTable& table);

}  // namespace helix
