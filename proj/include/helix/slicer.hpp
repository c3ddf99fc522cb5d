#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "helix/model.hpp"
#include "helix/toolchain.hpp"

namespace helix {

struct LibraryRecipe {
  std::string name;
  std::string version;
  std::filesystem::path archive_path;
  std::optional<std::filesystem::path> header_dir;
  ToolchainConfig toolchain;
};

struct SkippedExport {
  std::string name;
  std::string reason;
};

struct ExportList {
  std::vector<std::string> exports;   // sorted, unique
  std::vector<SkippedExport> skipped; // ifunc / versioned symbols
};

// Global or weak, defined, function-typed symbols across all archive members.
// Throws helix::Error("bad archive: ...") on parse failure or a duplicated
// strong definition, helix::Error("no exports") if nothing qualifies.
ExportList enumerate_exports(const LibraryRecipe& lib);

// Every defined function name in the archive, local helpers included.
std::set<std::string> library_functions(const LibraryRecipe& lib);

enum class SliceStatus { built, discarded };

struct SliceResult {
  std::string export_name;
  SliceStatus status = SliceStatus::discarded;
  std::set<std::string> surviving_functions;  // only when built
  std::uint64_t binary_size = 0;
  std::string reason;                          // only when discarded
  std::string log;                             // compiler/linker output
};

// Links a stub that references only `export_name` against the archive with
// dead-code elimination active and reads back the surviving library functions.
// Link failures and timeouts produce a discarded result; a missing compiler
// throws helix::ToolchainError.
SliceResult probe_build(const LibraryRecipe& lib, const std::string& export_name);

// Same, reusing an already computed library function set.
SliceResult probe_build(const LibraryRecipe& lib, const std::string& export_name,
                        const std::set<std::string>& functions);

// `h` followed by the first 8 hex digits of the archive's SHA-256.
std::string rename_prefix(const LibraryRecipe& lib);

// Writes a copy of the archive to `out` where every global defined symbol s is
// renamed to `<prefix>_s`. Throws helix::Error on a collision with an existing
// name.
std::filesystem::path rename_symbols(const LibraryRecipe& lib, const std::string& prefix,
                                     const std::filesystem::path& out);

struct ExtractionResult {
  std::string library;
  std::string version;
  std::string prefix;
  std::string original_sha256;
  std::filesystem::path renamed_archive;
  std::vector<ComponentSpec> components;
  std::vector<SliceResult> slices;      // one per probed export, export-name order
  std::vector<SkippedExport> skipped;   // never probed

  std::size_t discarded_count() const;
};

struct ExtractOptions {
  std::filesystem::path staging_dir;  // receives the renamed archive
  unsigned jobs = 1;
};

// The full per-library procedure: enumerate, probe every export, label built
// slices, rename, package. Components with identical label sets are all kept.
ExtractionResult extract_components(const LibraryRecipe& lib, const ExtractOptions& options);

}  // namespace helix
