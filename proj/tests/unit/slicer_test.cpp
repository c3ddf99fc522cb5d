#include <doctest.h>

#include "../support/fixtures.hpp"
#include "helix/elf.hpp"

namespace fs = std::filesystem;
using namespace helix;
using helix::testing::prepared_fixture;

namespace {

std::set<std::string> label_functions(const ComponentSpec& c) {
  std::set<std::string> out;
  for (const auto& l : c.labels) out.insert(l.function_name());
  return out;
}

void check_against_callgraph(const std::string& name, SlicingStrategy strategy) {
  CAPTURE(name);
  CAPTURE(to_string(strategy));
  TempDir tmp;
  auto tc = ToolchainConfig::from_environment();
  tc.slicing_strategy = strategy;
  auto lib = prepared_fixture(name, tmp.path() / "build", tc);
  auto result = extract_components(lib, {.staging_dir = tmp.path() / "out"});
  auto graph = testing::callgraph(name);

  std::size_t buildable = 0;
  for (const auto& [fn, reach] : graph) buildable += reach.has_value();
  CHECK(result.components.size() == buildable);
  CHECK(result.discarded_count() == graph.size() - buildable);
  for (const auto& c : result.components) {
    CAPTURE(c.id);
    REQUIRE(graph.contains(c.seed_function));
    REQUIRE(graph.at(c.seed_function).has_value());
    CHECK(label_functions(c) == *graph.at(c.seed_function));
  }
}

}  // namespace

TEST_CASE("export enumeration") {
  REQUIRE(testing::have_toolchain());
  TempDir tmp;
  auto lib = prepared_fixture("tinymath", tmp.path());
  auto exports = enumerate_exports(lib);
  CHECK(exports.exports == std::vector<std::string>{"tm_add", "tm_mul"});
  CHECK(exports.skipped.empty());
  CHECK(library_functions(lib) == std::set<std::string>{"helper_internal", "tm_add", "tm_mul"});
}

TEST_CASE("malformed libraries") {
  REQUIRE(testing::have_toolchain());
  TempDir tmp;
  CHECK_THROWS_WITH_AS(enumerate_exports(prepared_fixture("negative/noexports", tmp.path() / "a")),
                       doctest::Contains("no exports"), Error);
  CHECK_THROWS_WITH_AS(enumerate_exports(prepared_fixture("negative/dupglobal", tmp.path() / "b")),
                       doctest::Contains("bad archive"), Error);
  CHECK_THROWS_WITH_AS(
      extract_components(prepared_fixture("negative/allbroken", tmp.path() / "c"), {.staging_dir = tmp.path() / "o"}),
      doctest::Contains("no components"), Error);

  write_text(tmp.path() / "fake.a", "!<arch>\nnot really\n");
  LibraryRecipe bogus{.name = "bogus", .archive_path = tmp.path() / "fake.a"};
  CHECK_THROWS_WITH_AS(enumerate_exports(bogus), doctest::Contains("bad archive"), Error);
}

TEST_CASE("probe keeps only what the export reaches") {
  REQUIRE(testing::have_toolchain());
  TempDir tmp;
  auto lib = prepared_fixture("tinymath", tmp.path());
  auto mul = probe_build(lib, "tm_mul");
  REQUIRE(mul.status == SliceStatus::built);
  CHECK(mul.surviving_functions == std::set<std::string>{"tm_mul"});
  auto add = probe_build(lib, "tm_add");
  REQUIRE(add.status == SliceStatus::built);
  CHECK(add.surviving_functions == std::set<std::string>{"helper_internal", "tm_add"});
  CHECK(add.binary_size > 0);
}

TEST_CASE("a broken export is discarded and the rest survive") {
  REQUIRE(testing::have_toolchain());
  TempDir tmp;
  auto lib = prepared_fixture("withundef", tmp.path());
  CHECK(enumerate_exports(lib).exports.size() == 5);
  auto broken = probe_build(lib, "broken_fn");
  CHECK(broken.status == SliceStatus::discarded);
  CHECK_FALSE(broken.reason.empty());
  CHECK(broken.log.find("missing_external_symbol") != std::string::npos);

  auto result = extract_components(lib, {.staging_dir = tmp.path() / "out"});
  CHECK(result.components.size() == 4);
  CHECK(result.discarded_count() == 1);
}

TEST_CASE("labels equal the hand-written call graphs (gc_sections)") {
  REQUIRE(testing::have_toolchain());
  for (const auto& name : testing::fixture_names()) check_against_callgraph(name, SlicingStrategy::gc_sections);
}

TEST_CASE("labels equal the hand-written call graphs (lto)") {
  REQUIRE(testing::have_toolchain());
  for (const auto& name : testing::fixture_names()) check_against_callgraph(name, SlicingStrategy::lto);
}

TEST_CASE("a caller's labels contain its callees' labels") {
  REQUIRE(testing::have_toolchain());
  TempDir tmp;
  auto lib = prepared_fixture("withundef", tmp.path());
  auto result = extract_components(lib, {.staging_dir = tmp.path() / "out"});
  std::map<std::string, LabelSet> by_seed;
  for (const auto& c : result.components) by_seed[c.seed_function] = c.labels;
  // wu_fourth calls wu_third and wu_first.
  CHECK(by_seed.at("wu_third").is_subset_of(by_seed.at("wu_fourth")));
  CHECK(by_seed.at("wu_first").is_subset_of(by_seed.at("wu_fourth")));
}

TEST_CASE("renaming") {
  REQUIRE(testing::have_toolchain());
  TempDir tmp;
  auto lib = prepared_fixture("tinymath", tmp.path() / "build");
  const std::string prefix = rename_prefix(lib);
  CHECK(prefix == "h" + sha256_hex(read_file(lib.archive_path)).substr(0, 8));

  auto one = rename_symbols(lib, prefix, tmp.path() / "one.a");
  auto two = rename_symbols(lib, prefix, tmp.path() / "two.a");
  CHECK(read_file(one) == read_file(two));

  auto ar = elf::read_archive(one);
  std::set<std::string> globals, locals;
  for (const auto& m : ar.members)
    for (const auto& s : m.object.symbols) {
      if (!s.defined || s.type != elf::SymbolType::func) continue;
      (s.binding == elf::Binding::local ? locals : globals).insert(s.name);
    }
  CHECK(globals == std::set<std::string>{prefix + "_tm_add", prefix + "_tm_mul"});
  CHECK(locals == std::set<std::string>{"helper_internal"});

  CHECK_THROWS_AS(rename_symbols(lib, "9bad", tmp.path() / "x.a"), Error);
}

TEST_CASE("rename collision") {
  REQUIRE(testing::have_toolchain());
  TempDir tmp;
  write_text(tmp.path() / "c.c", "int f(void){return 1;}\nint p_f(void){return 2;}\n");
  REQUIRE(run_command({.argv = {"cc", "-c", "c.c"}, .cwd = tmp.path()}).ok());
  REQUIRE(run_command({.argv = {"ar", "rcs", "libc1.a", "c.o"}, .cwd = tmp.path()}).ok());
  LibraryRecipe lib{.name = "c1", .archive_path = tmp.path() / "libc1.a"};
  CHECK_THROWS_WITH_AS(rename_symbols(lib, "p", tmp.path() / "out.a"), doctest::Contains("collision"), Error);
}

TEST_CASE("extraction is deterministic") {
  REQUIRE(testing::have_toolchain());
  TempDir a, b;
  auto ra = extract_components(prepared_fixture("strkit", a.path() / "build"), {.staging_dir = a.path() / "out"});
  auto rb = extract_components(prepared_fixture("strkit", b.path() / "build"), {.staging_dir = b.path() / "out", .jobs = 3});
  REQUIRE(ra.components.size() == rb.components.size());
  for (std::size_t i = 0; i < ra.components.size(); ++i) {
    CHECK(ra.components[i].id == rb.components[i].id);
    CHECK(ra.components[i].labels == rb.components[i].labels);
    CHECK(ra.components[i].archive_ref == rb.components[i].archive_ref);
  }
}

TEST_CASE("missing compiler is an environment error") {
  REQUIRE(testing::have_toolchain());
  TempDir tmp;
  auto lib = prepared_fixture("tinymath", tmp.path());
  lib.toolchain.compiler_cmd = "helix-no-such-compiler";
  CHECK_THROWS_AS(probe_build(lib, "tm_add"), ToolchainError);
}

TEST_CASE("component archive round trip") {
  REQUIRE(testing::have_toolchain());
  TempDir tmp;
  auto result = extract_components(prepared_fixture("tinymath", tmp.path() / "build"),
                                   {.staging_dir = tmp.path() / "lib"});
  write_component_archive(result, tmp.path() / "lib");
  REQUIRE(is_component_archive(tmp.path() / "lib"));
  auto entry = read_component_archive(tmp.path() / "lib");
  CHECK(entry.name == "tinymath");
  CHECK(entry.prefix == result.prefix);
  REQUIRE(entry.components.size() == result.components.size());
  for (std::size_t i = 0; i < entry.components.size(); ++i) {
    CHECK(entry.components[i].id == result.components[i].id);
    CHECK(entry.components[i].labels == result.components[i].labels);
    CHECK(entry.components[i].stub_source == result.components[i].stub_source);
  }

  // Tampering with the archive is detected.
  auto bytes = read_file(entry.archive_path);
  bytes.back() ^= 0xff;
  write_file(entry.archive_path, bytes);
  CHECK_THROWS_AS(read_component_archive(tmp.path() / "lib"), Error);
}
