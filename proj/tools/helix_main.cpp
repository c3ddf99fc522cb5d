// helix: extract labeled components from C static libraries, generate
// synthetic binary datasets with known similarity, and evaluate similarity
// metrics against them.
//
// Exit codes: 0 success, 2 domain failure, 3 environment failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "helix/corpus.hpp"
#include "helix/error.hpp"
#include "helix/evaluator.hpp"
#include "helix/generator.hpp"
#include "helix/parallel.hpp"
#include "helix/recipe.hpp"
#include "helix/slicer.hpp"
#include "helix/util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kDomainFailure = 2;
constexpr int kEnvironmentFailure = 3;

void write_run_json(const fs::path& dir, const std::string& subcommand, const json& flags) {
  json doc = {{"subcommand", subcommand}, {"flags", flags}, {"working_dir", fs::current_path().string()}};
  helix::write_text(dir / "run.json", doc.dump(2) + "\n");
}

// Refuses to reuse a non-empty output location unless forced.
void claim_output(const fs::path& path, bool force) {
  if (fs::exists(path) && !(fs::is_directory(path) && fs::is_empty(path)) && !force) {
    throw helix::Error(path.string() + " already exists; pass --force to overwrite");
  }
}

std::string format_capacity(double log10_value) {
  if (log10_value < 15.0) {
    return std::to_string(static_cast<unsigned long long>(std::llround(std::pow(10.0, log10_value))));
  }
  double exponent = std::floor(log10_value);
  double mantissa = std::pow(10.0, log10_value - exponent);
  if (std::round(mantissa * 100) >= 1000) {
    mantissa /= 10;
    exponent += 1;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "≈ %.2fe%.0f", mantissa, exponent);
  return buf;
}

struct ExtractArgs {
  std::vector<std::string> recipes;
  std::string out;
  std::string strategy = "gc_sections";
  unsigned jobs = helix::default_jobs();
  int timeout = 60;
  bool force = false;
};

int cmd_extract(const ExtractArgs& args) {
  helix::ToolchainConfig tc = helix::ToolchainConfig::from_environment();
  tc.slicing_strategy = helix::parse_strategy(args.strategy);
  tc.timeout = std::chrono::seconds(args.timeout);
  tc.require_compiler();
  tc.require_objcopy();

  const fs::path out(args.out);
  claim_output(out, args.force);
  fs::create_directories(out);
  write_run_json(out, "extract",
                 {{"recipes", args.recipes},
                  {"out", args.out},
                  {"strategy", args.strategy},
                  {"jobs", args.jobs},
                  {"timeout", args.timeout},
                  {"force", args.force},
                  {"compiler", tc.compiler_cmd},
                  {"objcopy", tc.objcopy_cmd}});

  std::size_t productive = 0;
  for (const auto& recipe_path : args.recipes) {
    std::string name = recipe_path;
    try {
      helix::RecipeFile recipe = helix::load_recipe(recipe_path);
      name = recipe.name;
      helix::LibraryRecipe lib = helix::prepare_recipe(recipe, tc, out / ".build" / recipe.name);
      const fs::path lib_dir = out / recipe.name;
      fs::remove_all(lib_dir);
      fs::create_directories(lib_dir);
      helix::ExtractionResult result = helix::extract_components(lib, {.staging_dir = lib_dir, .jobs = args.jobs});
      helix::write_component_archive(result, lib_dir);
      std::cout << "library " << recipe.name << ": " << result.components.size() << " components, "
                << result.discarded_count() << " discarded\n";
      ++productive;
    } catch (const helix::ToolchainError&) {
      throw;
    } catch (const helix::Error& e) {
      std::cout << "library " << name << ": error: " << e.what() << "\n";
      fs::remove_all(out / name);
    }
  }
  fs::remove_all(out / ".build");
  if (productive == 0) {
    std::cerr << "no library yielded components\n";
    return kDomainFailure;
  }
  return kOk;
}

struct GenerateArgs {
  std::string corpus;
  std::string out;
  std::size_t n = 3;
  double p = 0.5;
  std::size_t count = 16;
  std::uint64_t seed = 0;
  std::size_t max_attempts = 0;
  unsigned jobs = helix::default_jobs();
  int timeout = 60;
  std::string blueprint = "sh-c";
  std::vector<std::string> transforms;
  bool force = false;
};

int cmd_generate(const GenerateArgs& args) {
  helix::ToolchainConfig tc = helix::ToolchainConfig::from_environment();
  tc.timeout = std::chrono::seconds(args.timeout);
  tc.require_compiler();

  helix::GeneratorConfig cfg;
  cfg.n = args.n;
  cfg.p = args.p;
  cfg.count = args.count;
  cfg.seed = args.seed;
  cfg.max_attempts = args.max_attempts;
  cfg.blueprint = args.blueprint;
  cfg.transforms = args.transforms;
  cfg.jobs = args.jobs;
  cfg.validate();

  helix::Corpus corpus = helix::Corpus::load(args.corpus);
  const fs::path out(args.out);
  claim_output(out, args.force);
  for (const char* stale : {"manifest.json", "bin", "logs", ".work"}) fs::remove_all(out / stale);
  fs::create_directories(out);
  write_run_json(out, "generate",
                 {{"corpus", args.corpus},
                  {"out", args.out},
                  {"n", args.n},
                  {"p", args.p},
                  {"count", args.count},
                  {"seed", args.seed},
                  {"max_attempts", cfg.effective_max_attempts()},
                  {"jobs", args.jobs},
                  {"timeout", args.timeout},
                  {"blueprint", args.blueprint},
                  {"transforms", args.transforms},
                  {"force", args.force},
                  {"compiler", tc.compiler_cmd}});

  auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
  try {
    helix::DatasetManifest m = helix::generate(corpus, cfg, tc, out);
    std::printf("samples: %zu, discarded: %zu, elapsed: %.2f s\n", m.samples.size(), m.discarded_count, elapsed());
    return kOk;
  } catch (const helix::GenerationExhausted& e) {
    std::printf("samples: %zu, discarded: %zu, elapsed: %.2f s\n", e.partial().samples.size(),
                e.partial().discarded_count, elapsed());
    std::cerr << e.what() << " (partial manifest kept)\n";
    return kDomainFailure;
  }
}

struct EvaluateArgs {
  std::string dataset;
  std::string metrics = "ctph,tlsh,lzjd,naive";
  std::vector<std::string> externals;
  std::string report;
  double tlsh_dmax = helix::metrics::kTlshDefaultMaxDistance;
  std::size_t lzjd_k = helix::metrics::kLzjdDefaultK;
  std::size_t bins = 10;
  unsigned jobs = helix::default_jobs();
  bool force = false;
};

int cmd_evaluate(const EvaluateArgs& args) {
  std::vector<std::string> names;
  std::stringstream list(args.metrics);
  for (std::string m; std::getline(list, m, ',');) {
    if (m.empty()) continue;
    const auto& valid = helix::metrics::metric_names();
    if (std::find(valid.begin(), valid.end(), m) == valid.end()) {
      std::cerr << "unknown metric '" << m << "'; valid metrics: ctph, tlsh, lzjd, naive\n";
      return kDomainFailure;
    }
    names.push_back(m);
  }
  std::vector<std::pair<std::string, std::string>> externals;
  for (const auto& e : args.externals) {
    auto eq = e.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == e.size()) {
      std::cerr << "--external expects name=file, got '" << e << "'\n";
      return kDomainFailure;
    }
    externals.emplace_back(e.substr(0, eq), e.substr(eq + 1));
  }

  const fs::path dataset(args.dataset);
  const fs::path report_path = args.report.empty() ? dataset / "eval" / "report.json" : fs::path(args.report);
  claim_output(report_path, args.force);

  helix::DatasetManifest manifest = helix::read_manifest(dataset / "manifest.json");
  helix::metrics::MetricOptions opts{.tlsh_max_distance = args.tlsh_dmax, .lzjd_k = args.lzjd_k};
  helix::PairScoreTable table = helix::score_pairs(manifest, dataset, names, opts, args.jobs);
  for (const auto& [name, file] : externals) table = helix::import_external_scores(std::move(table), name, fs::path(file));

  auto report = helix::make_report(table, helix::ground_truth_histogram(manifest, args.bins),
                                   "sha256:" + helix::sha256_hex(helix::read_file(dataset / "manifest.json")),
                                   args.tlsh_dmax);
  helix::write_text(report_path, helix::report_json(report));
  helix::write_text(report_path.parent_path() / "pairs.csv", helix::pair_table_csv(table));
  write_run_json(report_path.parent_path().empty() ? fs::path(".") : report_path.parent_path(), "evaluate",
                 {{"dataset", args.dataset},
                  {"metrics", names},
                  {"external", args.externals},
                  {"report", report_path.string()},
                  {"tlsh_dmax", args.tlsh_dmax},
                  {"lzjd_k", args.lzjd_k},
                  {"bins", args.bins},
                  {"jobs", args.jobs},
                  {"force", args.force}});
  std::cout << helix::report_table(report);
  return kOk;
}

int cmd_inspect(const std::string& path_arg) {
  const fs::path path(path_arg);
  if (helix::is_component_archive(path)) {
    auto lib = helix::read_component_archive(path);
    std::cout << "library " << lib.name << (lib.version.empty() ? "" : " " + lib.version) << " (prefix "
              << lib.prefix << ", " << lib.archive_ref << ")\n";
    std::cout << lib.components.size() << " components\n";
    for (const auto& c : lib.components) {
      std::cout << "  " << c.id << "  " << c.labels.size() << " labels:";
      for (const auto& l : c.labels.rendered()) std::cout << " " << l;
      std::cout << "\n";
    }
    for (const auto& d : lib.discarded) std::cout << "  discarded " << d.name << ": " << d.reason << "\n";
    return kOk;
  }
  if (fs::is_regular_file(path / "manifest.json")) {
    auto m = helix::read_manifest(path / "manifest.json");
    std::cout << "dataset: " << m.samples.size() << " samples, " << m.discarded_count << " discarded (n = " << m.config.n
              << ", p = " << m.config.p << ", seed = " << m.config.seed << ", rng " << m.rng_algorithm << ")\n";
    for (const auto& s : m.samples) {
      std::cout << "  " << s.record.id << "  " << s.record.labels.size() << " labels:";
      for (const auto& c : s.record.component_ids) std::cout << " " << c;
      std::cout << "\n";
    }
    return kOk;
  }
  if (fs::is_directory(path)) {
    try {
      auto corpus = helix::Corpus::load(path);
      std::cout << "corpus: " << corpus.size() << " libraries (" << corpus.fingerprint() << ")\n";
      for (const auto& lib : corpus.libraries()) {
        std::cout << "  " << lib.name << "  " << lib.components.size() << " components\n";
      }
      return kOk;
    } catch (const helix::Error&) {
    }
  }
  std::cerr << path.string() << " is neither a component archive, a corpus, nor a dataset\n";
  return kDomainFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"helix: synthetic program-similarity datasets from sliced C libraries"};
  app.require_subcommand(1);
  std::string workdir = ".";
  app.add_option("--workdir", workdir, "Directory receiving run.json for commands without an output directory");

  ExtractArgs ex;
  auto* extract = app.add_subcommand("extract", "Slice libraries into labeled components");
  extract->add_option("--recipes", ex.recipes, "Recipe TOML files")->required()->expected(1, -1);
  extract->add_option("--out", ex.out, "Corpus output directory")->required();
  extract->add_option("--strategy", ex.strategy, "gc_sections or lto")->check(CLI::IsMember({"gc_sections", "lto"}));
  extract->add_option("--jobs", ex.jobs, "Concurrent probe builds")->check(CLI::PositiveNumber);
  extract->add_option("--timeout", ex.timeout, "Per-export build timeout in seconds")->check(CLI::PositiveNumber);
  extract->add_flag("--force", ex.force, "Overwrite an existing output directory");

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Generate a dataset from a component corpus");
  generate->add_option("--corpus", gen.corpus, "Corpus directory")->required();
  generate->add_option("--out", gen.out, "Dataset output directory")->required();
  generate->add_option("-n", gen.n, "Components per sample")->check(CLI::PositiveNumber);
  generate->add_option("-p", gen.p, "Replacement fraction in [0, 1]")->check(CLI::Range(0.0, 1.0));
  generate->add_option("--count", gen.count, "Samples to produce")->check(CLI::PositiveNumber);
  generate->add_option("--seed", gen.seed, "RNG seed");
  generate->add_option("--max-attempts", gen.max_attempts, "Build attempts before giving up (default 4 x count)");
  generate->add_option("--jobs", gen.jobs, "Concurrent sample builds")->check(CLI::PositiveNumber);
  generate->add_option("--timeout", gen.timeout, "Per-sample build timeout in seconds")->check(CLI::PositiveNumber);
  generate->add_option("--blueprint", gen.blueprint, "Built-in blueprint id (sh-c, cmake-c) or blueprint directory");
  generate->add_option("--transform", gen.transforms, "Transform to apply (strip, identity-artifact, identity-source)");
  generate->add_flag("--force", gen.force, "Overwrite an existing dataset");

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Score all sample pairs and report MAE per metric");
  evaluate->add_option("--dataset", ev.dataset, "Dataset directory")->required();
  evaluate->add_option("--metrics", ev.metrics, "Comma-separated metrics (ctph, tlsh, lzjd, naive)");
  evaluate->add_option("--external", ev.externals, "Externally computed scores as name=file.csv");
  evaluate->add_option("--report", ev.report, "Report path (default <dataset>/eval/report.json)");
  evaluate->add_option("--tlsh-dmax", ev.tlsh_dmax, "TLSH distance mapped to similarity 0")->check(CLI::PositiveNumber);
  evaluate->add_option("--lzjd-k", ev.lzjd_k, "LZJD sketch size")->check(CLI::PositiveNumber);
  evaluate->add_option("--bins", ev.bins, "Ground-truth histogram bins")->check(CLI::PositiveNumber);
  evaluate->add_option("--jobs", ev.jobs, "Scoring threads")->check(CLI::PositiveNumber);
  evaluate->add_flag("--force", ev.force, "Overwrite an existing report");

  std::string inspect_path;
  auto* inspect = app.add_subcommand("inspect", "Describe a component archive, corpus or dataset");
  inspect->add_option("path", inspect_path)->required();

  std::uint64_t cap_libraries = 0, cap_n = 0;
  auto* capacity = app.add_subcommand("capacity", "Lower bound C(libraries, n) on distinct samples");
  capacity->add_option("libraries", cap_libraries)->required();
  capacity->add_option("n", cap_n)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kDomainFailure;
  }

  try {
    if (*extract) return cmd_extract(ex);
    if (*generate) return cmd_generate(gen);
    if (*evaluate) return cmd_evaluate(ev);
    if (*inspect) {
      write_run_json(workdir, "inspect", {{"path", inspect_path}});
      return cmd_inspect(inspect_path);
    }
    if (*capacity) {
      write_run_json(workdir, "capacity", {{"libraries", cap_libraries}, {"n", cap_n}});
      std::cout << format_capacity(helix::capacity_lower_bound(cap_libraries, cap_n)) << "\n";
      return kOk;
    }
  } catch (const helix::ToolchainError& e) {
    std::cerr << "environment error: " << e.what() << "\n";
    return kEnvironmentFailure;
  } catch (const helix::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "filesystem error: " << e.what() << "\n";
    return kEnvironmentFailure;
  }
  return kDomainFailure;
}
