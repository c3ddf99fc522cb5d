#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "helix/model.hpp"
#include "helix/toolchain.hpp"

namespace helix {

// Templated project layout. Markers:
//   entry template:        {{stubs}} stub prototypes, {{calls}} stub calls
//   build-script template: {{stubs}} stub source paths, {{archives}} archive paths
struct Blueprint {
  std::string id;
  std::string entry_template;
  std::string build_script_name;
  std::string build_script_template;
  std::vector<std::string> build_command;  // argv run inside the project directory
  std::string artifact;                    // built binary, relative to the project directory

  // "sh-c" (POSIX shell build script driving $CC) or "cmake-c".
  static Blueprint builtin(std::string_view id);
  static std::vector<std::string> builtin_ids();

  // Directory holding blueprint.json ({id, build_script, build_command[],
  // artifact}) plus entry.c.in and the build-script template named
  // `<build_script>.in`.
  static Blueprint load(const std::filesystem::path& dir);
};

struct ProjectDir {
  std::filesystem::path root;
  std::string blueprint_id;
  std::vector<std::string> component_ids;
  std::vector<std::string> build_command;
  std::filesystem::path artifact;  // relative to root
};

using ArchiveResolver = std::function<std::filesystem::path(const std::string& archive_ref)>;

// Writes main.c, stubs/<id>.stub.c, libs/lib<library>.a and the build script
// into `out_dir` (which must not exist or be empty). Output bytes depend only
// on the inputs. Throws helix::Error on an empty list ("no components"),
// duplicate component ids, or archive refs the resolver cannot supply.
ProjectDir render_blueprint(const Blueprint& bp, std::span<const ComponentSpec> components,
                            const ArchiveResolver& archives, const std::filesystem::path& out_dir);

struct BuildOutcome {
  bool ok = false;
  std::filesystem::path artifact;  // absolute; set when ok
  std::string log;
};

// Runs the project's build command with CC set to the configured compiler.
// A compiler that cannot be started at all throws helix::ToolchainError.
BuildOutcome build_project(const ProjectDir& project, const ToolchainConfig& toolchain);

}  // namespace helix
