#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "helix/slicer.hpp"

namespace helix {

// Declarative description of one input library, read from TOML:
//
//   name = "tinymath"
//   archive = "libtinymath.a"            # or:
//   build_cmd = "sh build.sh"            #   run in a scratch directory
//   artifact = "libtinymath.a"           #   relative to that directory
//   headers = "include"                  # optional
//   version = "1.0"                      # optional
//
// Relative `archive` and `headers` paths resolve against the recipe's folder.
// `build_cmd` runs under `sh -c` with HELIX_SOURCE_DIR set to that folder and
// CC set to the configured compiler.
struct RecipeFile {
  std::string name;
  std::string version;
  std::optional<std::filesystem::path> archive;
  std::optional<std::string> build_cmd;
  std::optional<std::filesystem::path> artifact;
  std::optional<std::filesystem::path> headers;
  std::filesystem::path base_dir;
};

RecipeFile load_recipe(const std::filesystem::path& path);

// Resolves the archive, running build_cmd inside `build_dir` when needed.
LibraryRecipe prepare_recipe(const RecipeFile& recipe, const ToolchainConfig& toolchain,
                             const std::filesystem::path& build_dir);

}  // namespace helix
