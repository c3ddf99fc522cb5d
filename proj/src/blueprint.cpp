#include "helix/blueprint.hpp"

#include <set>

#include <json.hpp>

#include "helix/error.hpp"
#include "helix/process.hpp"
#include "helix/util.hpp"

namespace fs = std::filesystem;

namespace helix {
namespace {

constexpr std::string_view kEntryTemplate = R"(/* generated sample entry point */
{{stubs}}
int main(void) {
{{calls}}  return 0;
}
)";

constexpr std::string_view kShBuild = R"(#!/bin/sh
set -e
${CC:-cc} -O1 -ffunction-sections -fdata-sections -o sample main.c {{stubs}} {{archives}} -Wl,--gc-sections
)";

constexpr std::string_view kCMakeBuild = R"(cmake_minimum_required(VERSION 3.16)
project(helix_sample C)
set(HELIX_STUBS {{stubs}})
set(HELIX_ARCHIVES {{archives}})
list(TRANSFORM HELIX_ARCHIVES PREPEND ${CMAKE_CURRENT_SOURCE_DIR}/)
add_executable(sample main.c ${HELIX_STUBS})
target_compile_options(sample PRIVATE -O1 -ffunction-sections -fdata-sections)
target_link_libraries(sample PRIVATE ${HELIX_ARCHIVES} -Wl,--gc-sections)
)";

std::string replace_all(std::string text, std::string_view marker, std::string_view value) {
  for (auto pos = text.find(marker); pos != std::string::npos; pos = text.find(marker, pos + value.size())) {
    text.replace(pos, marker.size(), value);
  }
  return text;
}

}  // namespace

std::vector<std::string> Blueprint::builtin_ids() { return {"cmake-c", "sh-c"}; }

Blueprint Blueprint::builtin(std::string_view id) {
  Blueprint bp;
  bp.id = std::string(id);
  bp.entry_template = std::string(kEntryTemplate);
  if (id == "sh-c") {
    bp.build_script_name = "build.sh";
    bp.build_script_template = std::string(kShBuild);
    bp.build_command = {"sh", "build.sh"};
    bp.artifact = "sample";
  } else if (id == "cmake-c") {
    bp.build_script_name = "CMakeLists.txt";
    bp.build_script_template = std::string(kCMakeBuild);
    bp.build_command = {"sh", "-c", "cmake -S . -B build -DCMAKE_C_COMPILER=\"$CC\" >/dev/null && cmake --build build"};
    bp.artifact = "build/sample";
  } else {
    throw Error("unknown blueprint '" + std::string(id) + "'");
  }
  return bp;
}

Blueprint Blueprint::load(const fs::path& dir) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_text(dir / "blueprint.json"));
    Blueprint bp;
    bp.id = doc.at("id").get<std::string>();
    bp.build_script_name = doc.at("build_script").get<std::string>();
    bp.build_command = doc.at("build_command").get<std::vector<std::string>>();
    bp.artifact = doc.at("artifact").get<std::string>();
    bp.entry_template = read_text(dir / "entry.c.in");
    bp.build_script_template = read_text(dir / (bp.build_script_name + ".in"));
    if (bp.build_command.empty()) throw Error("blueprint " + bp.id + ": empty build_command");
    return bp;
  } catch (const nlohmann::json::exception& e) {
    throw Error("blueprint in " + dir.string() + ": " + e.what());
  }
}

ProjectDir render_blueprint(const Blueprint& bp, std::span<const ComponentSpec> components,
                            const ArchiveResolver& archives, const fs::path& out_dir) {
  if (components.empty()) throw Error("no components");
  std::set<std::string> ids;
  for (const auto& c : components) {
    if (!ids.insert(c.id).second) throw Error("duplicate component id " + c.id);
  }
  if (fs::exists(out_dir) && !fs::is_empty(out_dir)) throw Error("project directory not empty: " + out_dir.string());

  // Resolve everything before touching the filesystem.
  std::vector<fs::path> archive_sources;
  for (const auto& c : components) {
    fs::path src = archives(c.archive_ref);
    if (src.empty() || !fs::is_regular_file(src)) throw Error("missing archive content for " + c.archive_ref);
    archive_sources.push_back(src);
  }

  fs::create_directories(out_dir / "stubs");
  fs::create_directories(out_dir / "libs");
  std::string protos, calls, stub_paths, archive_paths;
  std::set<std::string> copied;
  for (std::size_t i = 0; i < components.size(); ++i) {
    const auto& c = components[i];
    std::string stub_rel = "stubs/" + c.id + ".stub.c";
    write_text(out_dir / stub_rel, c.stub_source);
    std::string lib_rel = "libs/lib" + c.library_id + ".a";
    if (copied.insert(lib_rel).second) {
      fs::copy_file(archive_sources[i], out_dir / lib_rel, fs::copy_options::overwrite_existing);
    }
    protos += "extern void " + c.stub_symbol() + "(void);\n";
    calls += "  " + c.stub_symbol() + "();\n";
    stub_paths += (i ? " " : "") + stub_rel;
    archive_paths += (i ? " " : "") + lib_rel;
  }
  write_text(out_dir / "main.c", replace_all(replace_all(bp.entry_template, "{{stubs}}", protos), "{{calls}}", calls));
  write_text(out_dir / bp.build_script_name,
             replace_all(replace_all(bp.build_script_template, "{{stubs}}", stub_paths), "{{archives}}", archive_paths));

  ProjectDir project;
  project.root = fs::absolute(out_dir);
  project.blueprint_id = bp.id;
  for (const auto& c : components) project.component_ids.push_back(c.id);
  project.build_command = bp.build_command;
  project.artifact = bp.artifact;
  return project;
}

BuildOutcome build_project(const ProjectDir& project, const ToolchainConfig& toolchain) {
  BuildOutcome outcome;
  auto run = run_command({.argv = project.build_command,
                          .cwd = project.root,
                          .env = {{"CC", toolchain.compiler_cmd}},
                          .timeout = toolchain.timeout});
  outcome.log = run.output;
  if (run.exec_failed) throw ToolchainError("cannot run build command '" + project.build_command.front() + "'");
  // sh reports a missing compiler as exit 127.
  if (run.exit_code == 127 && !find_program(toolchain.compiler_cmd)) {
    throw ToolchainError("C compiler not found: '" + toolchain.compiler_cmd + "'");
  }
  fs::path artifact = project.root / project.artifact;
  if (run.ok() && fs::is_regular_file(artifact) && fs::file_size(artifact) > 0) {
    outcome.ok = true;
    outcome.artifact = artifact;
  }
  return outcome;
}

}  // namespace helix
