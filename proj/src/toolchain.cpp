#include "helix/toolchain.hpp"

#include <cstdlib>

#include "helix/error.hpp"
#include "helix/process.hpp"

namespace helix {

std::string_view to_string(SlicingStrategy s) {
  return s == SlicingStrategy::lto ? "lto" : "gc_sections";
}

SlicingStrategy parse_strategy(std::string_view s) {
  if (s == "gc_sections") return SlicingStrategy::gc_sections;
  if (s == "lto") return SlicingStrategy::lto;
  throw Error("unknown slicing strategy '" + std::string(s) + "' (expected gc_sections or lto)");
}

ToolchainConfig ToolchainConfig::from_environment() {
  ToolchainConfig tc;
  if (const char* cc = std::getenv("HELIX_CC"); cc && *cc) tc.compiler_cmd = cc;
  if (const char* oc = std::getenv("HELIX_OBJCOPY"); oc && *oc) tc.objcopy_cmd = oc;
  return tc;
}

std::vector<std::string> ToolchainConfig::compile_flags() const {
  if (slicing_strategy == SlicingStrategy::lto) return {"-flto", "-O2"};
  return {"-ffunction-sections", "-fdata-sections"};
}

std::vector<std::string> ToolchainConfig::library_cflags() const {
  // Fat objects keep a regular symbol table next to the LTO bytecode.
  if (slicing_strategy == SlicingStrategy::lto) return {"-flto", "-ffat-lto-objects"};
  return {"-ffunction-sections", "-fdata-sections"};
}

std::vector<std::string> ToolchainConfig::link_flags() const {
  std::vector<std::string> flags;
  if (slicing_strategy == SlicingStrategy::lto) {
    flags = {"-flto", "-O2"};
  } else {
    flags = {"-Wl,--gc-sections"};
  }
  flags.insert(flags.end(), linker_flags.begin(), linker_flags.end());
  return flags;
}

namespace {

void require_tool(const std::string& command, const char* role) {
  auto argv = split_command(command);
  if (argv.empty()) throw ToolchainError(std::string(role) + " command is empty");
  argv.push_back("--version");
  auto r = run_command({.argv = argv, .timeout = std::chrono::seconds(30)});
  if (r.exec_failed || r.exit_code != 0) {
    throw ToolchainError(std::string(role) + " not usable: '" + command + "' (" +
                         (r.exec_failed ? "cannot execute" : "exit " + std::to_string(r.exit_code)) + ")");
  }
}

}  // namespace

void ToolchainConfig::require_compiler() const { require_tool(compiler_cmd, "C compiler"); }
void ToolchainConfig::require_objcopy() const { require_tool(objcopy_cmd, "object-copy tool"); }

}  // namespace helix
