#include "helix/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <json.hpp>

#include "helix/blueprint.hpp"
#include "helix/parallel.hpp"
#include "helix/transform.hpp"
#include "helix/util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace helix {

void GeneratorConfig::validate() const {
  if (n == 0) throw Error("n must be positive");
  if (count == 0) throw Error("count must be positive");
  if (!(p >= 0.0 && p <= 1.0)) throw Error("p must lie in [0, 1]");
}

std::size_t max_replacements(std::size_t n, double p) {
  return static_cast<std::size_t>(std::floor(static_cast<double>(n) * p + 1e-9));
}

Selection select_initial(const Corpus& corpus, const GeneratorConfig& config, Rng& rng) {
  const std::size_t libs = corpus.size();
  if (config.n > libs) {
    throw Error("corpus too small: n = " + std::to_string(config.n) + " but only " + std::to_string(libs) +
                " libraries");
  }
  std::vector<std::size_t> order(libs);
  std::iota(order.begin(), order.end(), 0);
  Selection out;
  out.reserve(config.n);
  for (std::size_t i = 0; i < config.n; ++i) {
    std::size_t j = i + rng.below(libs - i);
    std::swap(order[i], order[j]);
    std::size_t lib = order[i];
    out.push_back({lib, rng.below(corpus.libraries()[lib].components.size())});
  }
  return out;
}

Selection mutate_selection(const Selection& current, const Corpus& corpus, const GeneratorConfig& config, Rng& rng) {
  const std::size_t n = current.size();
  const std::size_t r = rng.below(max_replacements(n, config.p) + 1);
  if (r == 0) return current;

  std::vector<std::size_t> positions(n);
  std::iota(positions.begin(), positions.end(), 0);
  Selection out = current;
  for (std::size_t i = 0; i < r; ++i) {
    std::size_t j = i + rng.below(n - i);
    std::swap(positions[i], positions[j]);
    const std::size_t pos = positions[i];

    std::set<std::size_t> held;
    for (std::size_t k = 0; k < n; ++k) {
      if (k != pos) held.insert(out[k].library);
    }
    std::vector<std::size_t> allowed;
    for (std::size_t lib = 0; lib < corpus.size(); ++lib) {
      if (!held.contains(lib)) allowed.push_back(lib);
    }
    std::size_t lib = allowed[rng.below(allowed.size())];
    out[pos] = {lib, rng.below(corpus.libraries()[lib].components.size())};
  }
  return out;
}

SelectionChain::SelectionChain(const Corpus& corpus, const GeneratorConfig& config)
    : corpus_(corpus), config_(config), rng_(config.seed) {}

const Selection& SelectionChain::next() {
  if (!started_) {
    current_ = select_initial(corpus_, config_, rng_);
    started_ = true;
  } else {
    current_ = mutate_selection(current_, corpus_, config_, rng_);
  }
  return current_;
}

std::vector<ComponentSpec> resolve(const Corpus& corpus, const Selection& selection) {
  std::vector<ComponentSpec> out;
  out.reserve(selection.size());
  for (const auto& pick : selection) out.push_back(corpus.libraries().at(pick.library).components.at(pick.component));
  return out;
}

namespace {

struct Attempt {
  std::size_t chain_index = 0;
  std::vector<ComponentSpec> components;
  bool ok = false;
  LabelSet labels;
  std::string log;
  fs::path artifact;
};

std::string sample_id(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "s%05zu", i);
  return buf;
}

json config_json(const GeneratorConfig& c, const std::string& rng_algorithm) {
  return {{"n", c.n},
          {"p", c.p},
          {"count", c.count},
          {"seed", c.seed},
          {"max_attempts", c.effective_max_attempts()},
          {"rng", rng_algorithm},
          {"blueprint", c.blueprint},
          {"transforms", c.transforms}};
}

Blueprint blueprint_for(const std::string& id_or_dir) {
  if (fs::is_directory(id_or_dir)) return Blueprint::load(id_or_dir);
  return Blueprint::builtin(id_or_dir);
}

}  // namespace

DatasetManifest generate(const Corpus& corpus, const GeneratorConfig& config, const ToolchainConfig& toolchain,
                         const fs::path& out_dir) {
  config.validate();
  if (config.n > corpus.size()) {
    throw Error("corpus too small: n = " + std::to_string(config.n) + " but only " + std::to_string(corpus.size()) +
                " libraries");
  }
  const Blueprint bp = blueprint_for(config.blueprint);
  std::vector<std::unique_ptr<Transform>> transforms;
  for (const auto& t : config.transforms) transforms.push_back(make_transform(t, toolchain));

  fs::create_directories(out_dir / "bin");
  fs::create_directories(out_dir / "logs");
  const fs::path work = out_dir / ".work";

  DatasetManifest manifest;
  manifest.config = config;
  manifest.config.max_attempts = config.effective_max_attempts();
  manifest.corpus_fingerprint = corpus.fingerprint();

  SelectionChain chain(corpus, config);
  const std::size_t max_attempts = config.effective_max_attempts();
  const std::size_t wave_size = std::max(1u, config.jobs);
  std::size_t attempts = 0;
  auto resolver = [&](const std::string& ref) { return corpus.archive_for(ref); };

  while (manifest.samples.size() < config.count) {
    if (attempts >= max_attempts) {
      fs::remove_all(work);
      write_manifest(manifest, out_dir / "manifest.json");
      throw GenerationExhausted("max_attempts (" + std::to_string(max_attempts) + ") exhausted with " +
                                    std::to_string(manifest.samples.size()) + " of " + std::to_string(config.count) +
                                    " samples",
                                manifest);
    }
    const std::size_t needed = config.count - manifest.samples.size();
    const std::size_t wave = std::min({wave_size, needed, max_attempts - attempts});
    std::vector<Attempt> batch(wave);
    for (auto& a : batch) {
      a.chain_index = attempts++;
      a.components = resolve(corpus, chain.next());
      a.labels = label_union(std::span<const ComponentSpec>(a.components));
    }

    parallel_for(batch.size(), config.jobs, [&](std::size_t i) {
      Attempt& a = batch[i];
      fs::path dir = work / std::to_string(a.chain_index);
      fs::remove_all(dir);
      ProjectDir project = render_blueprint(bp, a.components, resolver, dir);
      SampleRecord scratch;
      for (const auto& t : transforms) {
        if (t->spec().kind == TransformKind::source) apply_transform(*t, {TransformKind::source, project.root}, scratch);
      }
      BuildOutcome built = build_project(project, toolchain);
      a.log = built.log;
      a.ok = built.ok;
      if (a.ok) {
        for (const auto& t : transforms) {
          if (t->spec().kind == TransformKind::artifact) {
            apply_transform(*t, {TransformKind::artifact, built.artifact}, scratch);
          }
        }
        a.artifact = built.artifact;
        a.labels.merge(scratch.labels);
      }
    });

    for (auto& a : batch) {
      if (!a.ok) {
        ++manifest.discarded_count;
        write_text(out_dir / "logs" / ("discarded-" + std::to_string(a.chain_index) + ".txt"), a.log);
        continue;
      }
      if (manifest.samples.size() == config.count) break;
      DatasetSample s;
      s.record.id = sample_id(manifest.samples.size());
      for (const auto& c : a.components) s.record.component_ids.push_back(c.id);
      s.record.labels = a.labels;
      s.record.artifact_path = fs::path("bin") / s.record.id;
      s.record.build_status = BuildStatus::ok;
      s.build_log = "logs/" + s.record.id + ".txt";
      fs::copy_file(a.artifact, out_dir / s.record.artifact_path, fs::copy_options::overwrite_existing);
      write_text(out_dir / s.build_log, a.log);
      manifest.samples.push_back(std::move(s));
    }
    for (auto& a : batch) fs::remove_all(work / std::to_string(a.chain_index));
  }
  fs::remove_all(work);
  write_manifest(manifest, out_dir / "manifest.json");
  return manifest;
}

std::string manifest_json(const DatasetManifest& m) {
  json samples = json::array();
  for (const auto& s : m.samples) {
    samples.push_back({{"id", s.record.id},
                       {"components", s.record.component_ids},
                       {"labels", s.record.labels.rendered()},
                       {"binary", s.record.artifact_path.generic_string()},
                       {"build_log", s.build_log}});
  }
  json doc = {{"config", config_json(m.config, m.rng_algorithm)},
              {"corpus_fingerprint", m.corpus_fingerprint},
              {"samples", samples},
              {"discarded_count", m.discarded_count}};
  return doc.dump(2) + "\n";
}

void write_manifest(const DatasetManifest& manifest, const fs::path& path) {
  write_text(path, manifest_json(manifest));
}

DatasetManifest read_manifest(const fs::path& path) {
  try {
    json doc = json::parse(read_text(path));
    DatasetManifest m;
    const json& c = doc.at("config");
    m.config.n = c.at("n").get<std::size_t>();
    m.config.p = c.at("p").get<double>();
    m.config.count = c.at("count").get<std::size_t>();
    m.config.seed = c.at("seed").get<std::uint64_t>();
    m.config.max_attempts = c.value("max_attempts", std::size_t{0});
    m.config.blueprint = c.value("blueprint", std::string("sh-c"));
    m.config.transforms = c.value("transforms", std::vector<std::string>{});
    m.rng_algorithm = c.value("rng", std::string(Rng::algorithm));
    m.corpus_fingerprint = doc.value("corpus_fingerprint", "");
    m.discarded_count = doc.value("discarded_count", std::size_t{0});
    for (const auto& js : doc.at("samples")) {
      DatasetSample s;
      s.record.id = js.at("id").get<std::string>();
      s.record.component_ids = js.at("components").get<std::vector<std::string>>();
      s.record.labels = LabelSet::from_strings(js.at("labels").get<std::vector<std::string>>());
      s.record.artifact_path = js.at("binary").get<std::string>();
      s.record.build_status = BuildStatus::ok;
      s.build_log = js.value("build_log", "");
      m.samples.push_back(std::move(s));
    }
    return m;
  } catch (const json::exception& e) {
    throw Error("manifest " + path.string() + ": " + e.what());
  }
}

double capacity_lower_bound(std::uint64_t library_count, std::uint64_t n) {
  if (n > library_count) {
    throw Error("n (" + std::to_string(n) + ") exceeds library count (" + std::to_string(library_count) + ")");
  }
  if (n == 0 || n == library_count) return 0.0;
  const double L = static_cast<double>(library_count);
  const double k = static_cast<double>(n);
  return (std::lgamma(L + 1) - std::lgamma(k + 1) - std::lgamma(L - k + 1)) / std::log(10.0);
}

std::vector<PairTruth> ground_truth_matrix(const DatasetManifest& manifest) {
  std::vector<const DatasetSample*> sorted;
  for (const auto& s : manifest.samples) sorted.push_back(&s);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->record.id < b->record.id; });
  std::vector<PairTruth> pairs;
  pairs.reserve(sorted.size() * (sorted.size() - (sorted.empty() ? 0 : 1)) / 2);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = i + 1; j < sorted.size(); ++j) {
      pairs.push_back({sorted[i]->record.id, sorted[j]->record.id,
                       ground_truth_similarity(sorted[i]->record.labels, sorted[j]->record.labels)});
    }
  }
  return pairs;
}

}  // namespace helix
