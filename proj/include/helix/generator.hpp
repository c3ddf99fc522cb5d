#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "helix/corpus.hpp"
#include "helix/error.hpp"
#include "helix/model.hpp"
#include "helix/rng.hpp"
#include "helix/toolchain.hpp"

namespace helix {

struct GeneratorConfig {
  std::size_t n = 3;            // components per sample
  double p = 0.5;               // replacement fraction
  std::size_t count = 16;       // samples wanted
  std::uint64_t seed = 0;
  std::size_t max_attempts = 0; // 0: 4 * count
  std::string blueprint = "sh-c";
  std::vector<std::string> transforms;
  unsigned jobs = 1;

  std::size_t effective_max_attempts() const { return max_attempts ? max_attempts : 4 * count; }
  // Throws helix::Error on n == 0, count == 0, or p outside [0, 1].
  void validate() const;
};

// Position in a corpus: library index (name order) and component index.
struct Pick {
  std::size_t library = 0;
  std::size_t component = 0;
  friend bool operator==(const Pick&, const Pick&) = default;
};
using Selection = std::vector<Pick>;

// floor(n * p), with a small tolerance so that e.g. 100 * 0.29 counts as 29.
std::size_t max_replacements(std::size_t n, double p);

// n distinct uniformly chosen libraries, one uniformly chosen component each.
// Throws helix::Error when the corpus has fewer than n libraries.
Selection select_initial(const Corpus& corpus, const GeneratorConfig& config, Rng& rng);

// Replaces r ~ U{0..floor(n*p)} uniformly chosen positions. Each replacement
// draws a library not held by any other position (the replaced library is
// allowed), then a component of it.
Selection mutate_selection(const Selection& current, const Corpus& corpus, const GeneratorConfig& config, Rng& rng);

// Candidate sequence of the generation procedure: the initial selection
// followed by successive mutations. Depends only on (seed, corpus, n, p).
class SelectionChain {
 public:
  SelectionChain(const Corpus& corpus, const GeneratorConfig& config);
  const Selection& next();

 private:
  const Corpus& corpus_;
  GeneratorConfig config_;
  Rng rng_;
  Selection current_;
  bool started_ = false;
};

std::vector<ComponentSpec> resolve(const Corpus& corpus, const Selection& selection);

struct DatasetSample {
  SampleRecord record;   // artifact_path relative to the dataset directory
  std::string build_log; // relative to the dataset directory
};

struct DatasetManifest {
  GeneratorConfig config;
  std::string rng_algorithm = std::string(Rng::algorithm);
  std::string corpus_fingerprint;
  std::vector<DatasetSample> samples;
  std::size_t discarded_count = 0;
};

// Thrown when max_attempts runs out; the partial manifest is already on disk.
class GenerationExhausted : public Error {
 public:
  GenerationExhausted(const std::string& what, DatasetManifest partial)
      : Error(what), partial_(std::move(partial)) {}
  const DatasetManifest& partial() const noexcept { return partial_; }

 private:
  DatasetManifest partial_;
};

// Builds samples along the selection chain into `out_dir` (manifest.json,
// bin/<id>, logs/<id>.txt) until config.count succeed. Failed candidates are
// discarded and the chain continues from them.
DatasetManifest generate(const Corpus& corpus, const GeneratorConfig& config, const ToolchainConfig& toolchain,
                         const std::filesystem::path& out_dir);

std::string manifest_json(const DatasetManifest& manifest);
void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);
DatasetManifest read_manifest(const std::filesystem::path& path);

// log10 C(library_count, n) via log-gamma.
double capacity_lower_bound(std::uint64_t library_count, std::uint64_t n);

struct PairTruth {
  std::string id_a;
  std::string id_b;
  double similarity = 0.0;
};

// All unordered pairs (id_a < id_b) with their label-set Jaccard similarity.
std::vector<PairTruth> ground_truth_matrix(const DatasetManifest& manifest);

}  // namespace helix
