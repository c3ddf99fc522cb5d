#include <doctest.h>

#include <json.hpp>

#include "../support/fixtures.hpp"

namespace fs = std::filesystem;
using namespace helix;

namespace {

CommandResult cli(std::vector<std::string> args, std::map<std::string, std::string> env = {}) {
  args.insert(args.begin(), HELIX_CLI);
  return run_command({.argv = args, .env = std::move(env), .timeout = std::chrono::seconds(600)});
}

std::vector<std::string> positive_recipes() {
  std::vector<std::string> out;
  for (const auto& n : testing::fixture_names()) out.push_back((testing::fixture_dir() / n / "recipe.toml").string());
  return out;
}

std::vector<std::string> with(std::vector<std::string> head, const std::vector<std::string>& tail) {
  head.insert(head.end(), tail.begin(), tail.end());
  return head;
}

struct Workspace {
  TempDir dir{"helix-cli"};
  fs::path corpus = dir.path() / "corpus";
  fs::path dataset = dir.path() / "ds";
  CommandResult extract = cli(with({"extract", "--out", corpus.string(), "--recipes"}, positive_recipes()));
  CommandResult generate = cli({"generate", "--corpus", corpus.string(), "-n", "3", "-p", "0.5", "--count", "16",
                                "--seed", "7", "--out", dataset.string()});
};

Workspace& ws() {
  static Workspace w;
  return w;
}

nlohmann::json components_of(const fs::path& manifest) {
  auto doc = nlohmann::json::parse(read_text(manifest));
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : doc["samples"]) out.push_back(s["components"]);
  return out;
}

}  // namespace

TEST_CASE("capacity") {
  TempDir tmp;
  auto big = cli({"--workdir", tmp.path().string(), "capacity", "268", "50"});
  CHECK(big.exit_code == 0);
  CHECK(big.output == "≈ 6.36e54\n");
  auto small = cli({"--workdir", tmp.path().string(), "capacity", "4", "2"});
  CHECK(small.output == "6\n");
  CHECK(fs::exists(tmp.path() / "run.json"));
  CHECK(cli({"--workdir", tmp.path().string(), "capacity", "2", "4"}).exit_code == 2);
}

TEST_CASE("extract") {
  REQUIRE(testing::have_toolchain());
  auto& w = ws();
  REQUIRE_MESSAGE(w.extract.exit_code == 0, w.extract.output);
  for (const auto& n : testing::fixture_names()) {
    CHECK(is_component_archive(w.corpus / n));
    CHECK(w.extract.output.find("library " + n + ": ") != std::string::npos);
  }
  CHECK(w.extract.output.find("library withundef: 4 components, 1 discarded") != std::string::npos);
  auto run = nlohmann::json::parse(read_text(w.corpus / "run.json"));
  CHECK(run["subcommand"] == "extract");
  CHECK(run["flags"]["strategy"] == "gc_sections");

  SUBCASE("refuses to overwrite without --force") {
    auto again = cli(with({"extract", "--out", w.corpus.string(), "--recipes"}, positive_recipes()));
    CHECK(again.exit_code == 2);
  }
  SUBCASE("a bad library is reported and the rest proceed") {
    TempDir tmp;
    auto r = cli({"extract", "--out", (tmp.path() / "c").string(), "--recipes",
                  (testing::fixture_dir() / "negative/noexports/recipe.toml").string(),
                  (testing::fixture_dir() / "tinymath/recipe.toml").string()});
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("library noexports: error: no exports") != std::string::npos);
    CHECK(r.output.find("library tinymath: 2 components, 0 discarded") != std::string::npos);
  }
  SUBCASE("nothing productive") {
    TempDir tmp;
    auto r = cli({"extract", "--out", (tmp.path() / "c").string(), "--recipes",
                  (testing::fixture_dir() / "negative/allbroken/recipe.toml").string()});
    CHECK(r.exit_code == 2);
  }
  SUBCASE("missing compiler") {
    TempDir tmp;
    auto r = cli({"extract", "--out", (tmp.path() / "c").string(), "--recipes",
                  (testing::fixture_dir() / "tinymath/recipe.toml").string()},
                 {{"HELIX_CC", "helix-nonexistent-cc"}});
    CHECK(r.exit_code == 3);
    CHECK(r.output.find("helix-nonexistent-cc") != std::string::npos);
  }
}

TEST_CASE("inspect") {
  REQUIRE(testing::have_toolchain());
  auto& w = ws();
  TempDir tmp;
  auto lib = cli({"--workdir", tmp.path().string(), "inspect", (w.corpus / "tinymath").string()});
  CHECK(lib.exit_code == 0);
  CHECK(lib.output.find("2 components") != std::string::npos);
  CHECK(lib.output.find("tinymath.tm_add  2 labels") != std::string::npos);
  CHECK(cli({"--workdir", tmp.path().string(), "inspect", w.corpus.string()}).exit_code == 0);
  CHECK(cli({"--workdir", tmp.path().string(), "inspect", w.dataset.string()}).exit_code == 0);
  CHECK(cli({"--workdir", tmp.path().string(), "inspect", tmp.path().string()}).exit_code == 2);
}

TEST_CASE("generate") {
  REQUIRE(testing::have_toolchain());
  auto& w = ws();
  REQUIRE_MESSAGE(w.generate.exit_code == 0, w.generate.output);
  CHECK(w.generate.output.starts_with("samples: 16, discarded: 0, elapsed: "));
  auto doc = nlohmann::json::parse(read_text(w.dataset / "manifest.json"));
  CHECK(doc["samples"].size() == 16);
  CHECK(fs::exists(w.dataset / "run.json"));

  TempDir tmp;
  auto again = cli({"generate", "--corpus", w.corpus.string(), "-n", "3", "-p", "0.5", "--count", "16", "--seed",
                    "7", "--jobs", "2", "--out", (tmp.path() / "ds").string()});
  REQUIRE(again.exit_code == 0);
  CHECK(components_of(tmp.path() / "ds" / "manifest.json") == components_of(w.dataset / "manifest.json"));

  CHECK(cli({"generate", "--corpus", w.corpus.string(), "--out", w.dataset.string()}).exit_code == 2);
  CHECK(cli({"generate", "--corpus", w.corpus.string(), "-n", "30", "--out", (tmp.path() / "x").string()})
            .exit_code == 2);
  // A compiler that answers --version but fails every build.
  write_text(tmp.path() / "badcc", "#!/bin/sh\n[ \"$1\" = --version ] && exit 0\nexit 1\n");
  fs::permissions(tmp.path() / "badcc", fs::perms::owner_all);
  auto exhausted = cli({"generate", "--corpus", w.corpus.string(), "--count", "2", "--max-attempts", "2", "--out",
                        (tmp.path() / "y").string()},
                       {{"HELIX_CC", (tmp.path() / "badcc").string()}});
  CHECK(exhausted.exit_code == 2);
  CHECK(fs::exists(tmp.path() / "y" / "manifest.json"));
}

TEST_CASE("evaluate") {
  REQUIRE(testing::have_toolchain());
  auto& w = ws();
  TempDir tmp;
  const auto report = (tmp.path() / "r" / "report.json").string();
  auto r = cli({"evaluate", "--dataset", w.dataset.string(), "--metrics", "ctph,tlsh,lzjd,naive", "--report", report});
  REQUIRE_MESSAGE(r.exit_code == 0, r.output);
  CHECK(r.output.find("pairs: 120") != std::string::npos);
  auto doc = nlohmann::json::parse(read_text(report));
  CHECK(doc["mae"].size() == 4);
  CHECK(doc["pair_count"] == 120);
  CHECK(fs::exists(tmp.path() / "r" / "run.json"));
  CHECK(fs::exists(tmp.path() / "r" / "pairs.csv"));

  CHECK(cli({"evaluate", "--dataset", w.dataset.string(), "--report", report}).exit_code == 2);

  auto bogus = cli({"evaluate", "--dataset", w.dataset.string(), "--metrics", "bogus", "--report", report});
  CHECK(bogus.exit_code == 2);
  CHECK(bogus.output.find("ctph, tlsh, lzjd, naive") != std::string::npos);

  write_text(tmp.path() / "ext.csv", "id_a,id_b,score\ns00000,s00001,0.9\n");
  auto ext = cli({"evaluate", "--dataset", w.dataset.string(), "--metrics", "naive", "--external",
                  "bindiff=" + (tmp.path() / "ext.csv").string(), "--report", report, "--force"});
  REQUIRE_MESSAGE(ext.exit_code == 0, ext.output);
  auto doc2 = nlohmann::json::parse(read_text(report));
  CHECK(doc2["errors"]["bindiff"] == 119);

  write_text(tmp.path() / "bad.csv", "id_a,id_b,score\ns00000,s00001,1.5\n");
  auto bad = cli({"evaluate", "--dataset", w.dataset.string(), "--metrics", "naive", "--external",
                  "x=" + (tmp.path() / "bad.csv").string(), "--report", report, "--force"});
  CHECK(bad.exit_code == 2);
  CHECK(bad.output.find("row 2") != std::string::npos);
}
