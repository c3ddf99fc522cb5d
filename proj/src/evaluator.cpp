#include "helix/evaluator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <json.hpp>

#include "helix/error.hpp"
#include "helix/parallel.hpp"
#include "helix/util.hpp"

namespace fs = std::filesystem;

namespace helix {

PairScoreTable ground_truth_table(const DatasetManifest& manifest) {
  PairScoreTable table;
  for (auto& p : ground_truth_matrix(manifest)) table.rows.push_back({p.id_a, p.id_b, p.similarity, {}});
  return table;
}

PairScoreTable score_pairs(const DatasetManifest& manifest, const fs::path& dataset_dir,
                           const std::vector<std::string>& metric_names, const metrics::MetricOptions& options,
                           unsigned jobs) {
  std::vector<std::unique_ptr<metrics::Metric>> metrics;
  for (const auto& name : metric_names) metrics.push_back(metrics::make_metric(name, options));

  PairScoreTable table = ground_truth_table(manifest);
  table.metrics = metric_names;

  std::map<std::string, std::size_t> slot;
  for (std::size_t i = 0; i < manifest.samples.size(); ++i) {
    const auto& s = manifest.samples[i];
    slot[s.record.id] = i;
    if (!fs::is_regular_file(dataset_dir / s.record.artifact_path)) {
      throw Error("sample " + s.record.id + ": missing binary " + (dataset_dir / s.record.artifact_path).string());
    }
  }

  // digests[sample][metric]; nullopt when the metric rejects the input.
  const std::size_t k = manifest.samples.size();
  std::vector<std::vector<std::optional<metrics::Digest>>> digests(k);
  parallel_for(k, jobs, [&](std::size_t i) {
    Bytes data = read_file(dataset_dir / manifest.samples[i].record.artifact_path);
    digests[i].resize(metrics.size());
    for (std::size_t m = 0; m < metrics.size(); ++m) {
      try {
        digests[i][m] = metrics[m]->digest(data);
      } catch (const Error&) {
        digests[i][m] = std::nullopt;
      }
    }
  });

  parallel_for(table.rows.size(), jobs, [&](std::size_t r) {
    PairRow& row = table.rows[r];
    const auto& da = digests[slot.at(row.id_a)];
    const auto& db = digests[slot.at(row.id_b)];
    for (std::size_t m = 0; m < metrics.size(); ++m) {
      std::optional<double> v;
      if (da[m] && db[m]) {
        try {
          v = metrics::MetricScore(metric_names[m], metrics[m]->compare(*da[m], *db[m])).value;
        } catch (const Error&) {
          v = std::nullopt;
        }
      }
      row.scores[metric_names[m]] = v;
    }
  });
  return table;
}

double mean_absolute_error(const PairScoreTable& table, const std::string& metric) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& row : table.rows) {
    auto it = row.scores.find(metric);
    if (it == row.scores.end() || !it->second) continue;
    sum += std::abs(*it->second - row.ground_truth);
    ++n;
  }
  if (n == 0) throw Error("metric " + metric + " has no scored pairs");
  return sum / static_cast<double>(n);
}

std::size_t error_count(const PairScoreTable& table, const std::string& metric) {
  std::size_t n = 0;
  for (const auto& row : table.rows) {
    auto it = row.scores.find(metric);
    n += it == row.scores.end() || !it->second;
  }
  return n;
}

std::vector<HistogramBin> histogram(const std::vector<double>& values, std::size_t bins) {
  if (bins == 0) throw Error("histogram needs at least one bin");
  std::vector<HistogramBin> out(bins);
  const double width = static_cast<double>(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    out[i].low = static_cast<double>(i) / width;
    out[i].high = static_cast<double>(i + 1) / width;
  }
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) throw Error("histogram value outside [0, 1]");
    auto idx = static_cast<std::size_t>(std::floor(v * width));
    idx = std::min(idx, bins - 1);
    // Correct floating-point drift so the bin edges above are authoritative.
    while (idx + 1 < bins && v >= out[idx + 1].low) ++idx;
    while (idx > 0 && v < out[idx].low) --idx;
    ++out[idx].count;
  }
  return out;
}

std::vector<HistogramBin> ground_truth_histogram(const DatasetManifest& manifest, std::size_t bins) {
  std::vector<double> values;
  for (const auto& p : ground_truth_matrix(manifest)) values.push_back(p.similarity);
  return histogram(values, bins);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

PairScoreTable import_external_scores(PairScoreTable table, const std::string& metric_name, std::istream& csv) {
  if (metric_name.empty()) throw Error("external metric needs a name");
  std::set<std::string> ids;
  std::map<std::pair<std::string, std::string>, std::size_t> row_of;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    ids.insert(table.rows[i].id_a);
    ids.insert(table.rows[i].id_b);
    row_of[{table.rows[i].id_a, table.rows[i].id_b}] = i;
  }

  std::map<std::size_t, double> parsed;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(csv, line)) {
    ++line_no;
    std::string_view l = trim(line);
    if (l.empty()) continue;
    auto fields = split_csv(l);
    if (!header_seen) {
      header_seen = true;
      if (fields.size() != 3 || fields[0] != "id_a" || fields[1] != "id_b" || fields[2] != "score") {
        throw Error("row " + std::to_string(line_no) + ": expected header 'id_a,id_b,score'");
      }
      continue;
    }
    const std::string where = "row " + std::to_string(line_no) + ": ";
    if (fields.size() != 3) throw Error(where + "expected 3 fields, got " + std::to_string(fields.size()));
    std::string a(fields[0]), b(fields[1]);
    if (!ids.contains(a)) throw Error(where + "unknown sample id '" + a + "'");
    if (!ids.contains(b)) throw Error(where + "unknown sample id '" + b + "'");
    if (a == b) throw Error(where + "pair of a sample with itself");
    if (b < a) std::swap(a, b);
    double v = 0.0;
    auto s = fields[2];
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw Error(where + "score '" + std::string(s) + "' is not a number");
    if (!(v >= 0.0 && v <= 1.0)) throw Error(where + "score " + std::string(s) + " outside [0, 1]");
    auto row = row_of.at({a, b});
    if (!parsed.emplace(row, v).second) throw Error(where + "duplicate pair " + a + "," + b);
  }
  if (!header_seen) throw Error("score file is empty");

  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    auto it = parsed.find(i);
    table.rows[i].scores[metric_name] = it == parsed.end() ? std::nullopt : std::optional<double>(it->second);
  }
  if (std::find(table.metrics.begin(), table.metrics.end(), metric_name) == table.metrics.end()) {
    table.metrics.push_back(metric_name);
  }
  return table;
}

PairScoreTable import_external_scores(PairScoreTable table, const std::string& metric_name, const fs::path& score_file) {
  std::ifstream in(score_file);
  if (!in) throw Error("cannot open score file " + score_file.string());
  try {
    return import_external_scores(std::move(table), metric_name, in);
  } catch (const Error& e) {
    throw Error(score_file.string() + ": " + e.what());
  }
}

EvaluationReport make_report(const PairScoreTable& table, std::vector<HistogramBin> hist, std::string fingerprint,
                             double tlsh_max_distance) {
  EvaluationReport r;
  r.pair_count = table.rows.size();
  r.histogram = std::move(hist);
  r.dataset_fingerprint = std::move(fingerprint);
  r.tlsh_max_distance = tlsh_max_distance;
  for (const auto& m : table.metrics) {
    r.errors[m] = error_count(table, m);
    if (r.errors[m] < table.rows.size()) r.mae[m] = mean_absolute_error(table, m);
  }
  return r;
}

std::string report_json(const EvaluationReport& r) {
  nlohmann::json hist = nlohmann::json::array();
  for (const auto& b : r.histogram) hist.push_back({{"low", b.low}, {"high", b.high}, {"count", b.count}});
  nlohmann::json doc = {{"mae", r.mae},
                        {"errors", r.errors},
                        {"histogram", hist},
                        {"pair_count", r.pair_count},
                        {"dataset_fingerprint", r.dataset_fingerprint},
                        {"tlsh_max_distance", r.tlsh_max_distance}};
  return doc.dump(2) + "\n";
}

std::string report_table(const EvaluationReport& r) {
  std::vector<std::pair<std::string, std::optional<double>>> rows;
  for (const auto& [m, errs] : r.errors) {
    auto it = r.mae.find(m);
    rows.emplace_back(m, it == r.mae.end() ? std::nullopt : std::optional<double>(it->second));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.second.has_value() != b.second.has_value()) return a.second.has_value();
    return a.second.value_or(0) < b.second.value_or(0);
  });
  std::size_t width = 6;
  for (const auto& row : rows) width = std::max(width, row.first.size());

  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(width)) << "metric" << "  " << std::right << std::setw(8) << "MAE"
      << "  " << std::setw(8) << "errors" << "\n";
  for (const auto& [m, mae] : rows) {
    out << std::left << std::setw(static_cast<int>(width)) << m << "  " << std::right << std::setw(8);
    if (mae) {
      out << std::fixed << std::setprecision(4) << *mae;
    } else {
      out << "n/a";
    }
    out << "  " << std::setw(8) << r.errors.at(m) << "\n";
  }
  out << "pairs: " << r.pair_count << "\n";
  return out.str();
}

std::string pair_table_csv(const PairScoreTable& table) {
  std::ostringstream out;
  out << std::setprecision(17) << "id_a,id_b,ground_truth";
  for (const auto& m : table.metrics) out << "," << m;
  out << "\n";
  for (const auto& row : table.rows) {
    out << row.id_a << "," << row.id_b << "," << row.ground_truth;
    for (const auto& m : table.metrics) {
      auto it = row.scores.find(m);
      if (it == row.scores.end() || !it->second) {
        out << ",error";
      } else {
        out << "," << *it->second;
      }
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace helix
