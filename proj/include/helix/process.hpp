#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace helix {

struct CommandSpec {
  std::vector<std::string> argv;
  std::filesystem::path cwd;                // empty: inherit
  std::map<std::string, std::string> env;   // added on top of the inherited environment
  std::chrono::seconds timeout{0};          // 0: no limit
};

struct CommandResult {
  int exit_code = -1;       // valid when exited normally
  bool timed_out = false;
  bool exec_failed = false; // the program could not be started at all
  std::string output;       // interleaved stdout + stderr

  bool ok() const noexcept { return !timed_out && !exec_failed && exit_code == 0; }
};

// Runs argv[0] (resolved through PATH) and waits for it. The child gets its own
// process group, which is killed as a whole on timeout.
CommandResult run_command(const CommandSpec& spec);

// Splits a command string on whitespace. Used for user-supplied tool commands
// such as `HELIX_CC="ccache cc"`.
std::vector<std::string> split_command(const std::string& command);

// First token of `command` resolved against PATH, or nullopt.
std::optional<std::filesystem::path> find_program(const std::string& command);

}  // namespace helix
