#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "helix/corpus.hpp"
#include "helix/error.hpp"
#include "helix/process.hpp"
#include "helix/recipe.hpp"
#include "helix/slicer.hpp"
#include "helix/util.hpp"

#ifndef HELIX_FIXTURE_DIR
#error "HELIX_FIXTURE_DIR must point at tests/fixtures"
#endif

namespace helix::testing {

inline std::filesystem::path fixture_dir() { return HELIX_FIXTURE_DIR; }

inline bool have_toolchain() {
  auto tc = ToolchainConfig::from_environment();
  try {
    tc.require_compiler();
    tc.require_objcopy();
    return true;
  } catch (const ToolchainError&) {
    return false;
  }
}

// Positive fixture libraries (everything except negative/).
inline std::vector<std::string> fixture_names() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(fixture_dir())) {
    if (e.is_directory() && std::filesystem::exists(e.path() / "recipe.toml")) out.push_back(e.path().filename());
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline LibraryRecipe prepared_fixture(const std::string& rel, const std::filesystem::path& build_dir,
                                      ToolchainConfig tc = ToolchainConfig::from_environment()) {
  return prepare_recipe(load_recipe(fixture_dir() / rel / "recipe.toml"), tc, build_dir);
}

// Extracts every positive fixture into `out`, the way `helix extract` does.
inline Corpus build_fixture_corpus(const std::filesystem::path& out,
                                   ToolchainConfig tc = ToolchainConfig::from_environment()) {
  for (const auto& name : fixture_names()) {
    auto lib = prepared_fixture(name, out / ".build" / name, tc);
    auto result = extract_components(lib, {.staging_dir = out / name, .jobs = 1});
    write_component_archive(result, out / name);
  }
  std::filesystem::remove_all(out / ".build");
  return Corpus::load(out);
}

// callgraph.json: export -> every function reachable from it (itself included),
// null for exports that cannot link. Written by hand from the fixture sources.
inline std::map<std::string, std::optional<std::set<std::string>>> callgraph(const std::string& name) {
  auto doc = nlohmann::json::parse(read_text(fixture_dir() / name / "callgraph.json"));
  std::map<std::string, std::optional<std::set<std::string>>> out;
  for (auto& [k, v] : doc.items()) {
    if (v.is_null()) {
      out[k] = std::nullopt;
    } else {
      out[k] = v.get<std::set<std::string>>();
    }
  }
  return out;
}

}  // namespace helix::testing
