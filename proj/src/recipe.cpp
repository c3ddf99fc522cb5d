#include "helix/recipe.hpp"

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "helix/error.hpp"
#include "helix/process.hpp"

namespace fs = std::filesystem;

namespace helix {

RecipeFile load_recipe(const fs::path& path) {
  toml::table tbl;
  try {
    tbl = toml::parse_file(path.string());
  } catch (const toml::parse_error& e) {
    throw Error("recipe " + path.string() + ": " + std::string(e.description()));
  }
  auto str = [&](const char* key) -> std::optional<std::string> {
    auto node = tbl[key];
    if (!node) return std::nullopt;
    if (!node.is_string()) throw Error("recipe " + path.string() + ": '" + key + "' must be a string");
    return *node.value<std::string>();
  };

  RecipeFile r;
  r.base_dir = fs::absolute(path).parent_path();
  auto name = str("name");
  if (!name) throw Error("recipe " + path.string() + ": missing 'name'");
  if (!is_valid_library_name(*name)) {
    throw Error("recipe " + path.string() + ": library name '" + *name + "' must be non-empty and contain no '-'");
  }
  r.name = *name;
  r.version = str("version").value_or("");
  if (auto a = str("archive")) r.archive = fs::path(*a);
  r.build_cmd = str("build_cmd");
  if (auto a = str("artifact")) r.artifact = fs::path(*a);
  if (auto h = str("headers")) r.headers = fs::path(*h);

  if (r.archive && r.build_cmd) throw Error("recipe " + path.string() + ": give either 'archive' or 'build_cmd', not both");
  if (!r.archive && !r.build_cmd) throw Error("recipe " + path.string() + ": needs 'archive' or 'build_cmd' + 'artifact'");
  if (r.build_cmd && !r.artifact) throw Error("recipe " + path.string() + ": 'build_cmd' requires 'artifact'");
  return r;
}

LibraryRecipe prepare_recipe(const RecipeFile& recipe, const ToolchainConfig& toolchain, const fs::path& build_dir) {
  LibraryRecipe lib;
  lib.name = recipe.name;
  lib.version = recipe.version;
  lib.toolchain = toolchain;
  if (recipe.headers) lib.header_dir = recipe.headers->is_absolute() ? *recipe.headers : recipe.base_dir / *recipe.headers;

  if (recipe.archive) {
    lib.archive_path = recipe.archive->is_absolute() ? *recipe.archive : recipe.base_dir / *recipe.archive;
  } else {
    fs::create_directories(build_dir);
    std::string cflags;
    for (const auto& f : toolchain.library_cflags()) cflags += (cflags.empty() ? "" : " ") + f;
    auto run = run_command({.argv = {"sh", "-c", *recipe.build_cmd},
                            .cwd = build_dir,
                            .env = {{"HELIX_SOURCE_DIR", recipe.base_dir.string()}, {"CC", toolchain.compiler_cmd},
                                    {"HELIX_CFLAGS", cflags}},
                            .timeout = toolchain.timeout});
    if (run.exec_failed) throw ToolchainError("cannot run sh for build_cmd of " + recipe.name);
    if (!run.ok()) throw Error("build_cmd failed for " + recipe.name + ":\n" + run.output);
    lib.archive_path = build_dir / *recipe.artifact;
  }
  if (!fs::is_regular_file(lib.archive_path)) {
    throw Error("archive for " + recipe.name + " not found: " + lib.archive_path.string());
  }
  return lib;
}

}  // namespace helix
