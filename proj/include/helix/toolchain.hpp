#pragma once

#include <chrono>
#include <string>
#include <string_view>
#include <vector>

namespace helix {

enum class SlicingStrategy { gc_sections, lto };

std::string_view to_string(SlicingStrategy s);
SlicingStrategy parse_strategy(std::string_view s);

struct ToolchainConfig {
  std::string compiler_cmd = "cc";
  std::string objcopy_cmd = "objcopy";
  std::vector<std::string> linker_flags;
  SlicingStrategy slicing_strategy = SlicingStrategy::gc_sections;
  std::chrono::seconds timeout{60};

  // Defaults with HELIX_CC / HELIX_OBJCOPY applied.
  static ToolchainConfig from_environment();

  std::vector<std::string> compile_flags() const;
  // Flags a recipe's build_cmd should compile the library with (exported as
  // HELIX_CFLAGS) so the chosen slicing strategy can see function boundaries.
  std::vector<std::string> library_cflags() const;
  std::vector<std::string> link_flags() const;

  // Throws helix::ToolchainError naming the probed command when the compiler
  // cannot be executed.
  void require_compiler() const;
  void require_objcopy() const;
};

}  // namespace helix
