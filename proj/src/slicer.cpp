#include "helix/slicer.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "helix/elf.hpp"
#include "helix/error.hpp"
#include "helix/parallel.hpp"
#include "helix/process.hpp"
#include "helix/util.hpp"

namespace fs = std::filesystem;

namespace helix {
namespace {

bool is_strong_or_weak_global(const elf::Symbol& s) {
  return s.binding == elf::Binding::global || s.binding == elf::Binding::weak;
}

bool is_c_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(s.front())) return false;
  return std::all_of(s.begin(), s.end(), [&](char c) { return alpha(c) || digit(c); });
}

// LTO and IPA clones carry suffixes like `.constprop.0`; C names never contain
// a dot, so the part before it is the source-level name.
std::string base_name(const std::string& symbol) { return symbol.substr(0, symbol.find('.')); }

}  // namespace

ExportList enumerate_exports(const LibraryRecipe& lib) {
  elf::Archive ar = elf::read_archive(lib.archive_path);

  std::map<std::string, std::string> strong_owner;
  std::set<std::string> exports;
  std::map<std::string, std::string> skipped;
  for (const auto& member : ar.members) {
    for (const auto& sym : member.object.symbols) {
      if (!sym.defined || sym.common || !is_strong_or_weak_global(sym)) continue;
      if (sym.binding == elf::Binding::global) {
        auto [it, inserted] = strong_owner.emplace(sym.name, member.name);
        if (!inserted) {
          throw Error("bad archive: " + sym.name + " defined in both " + it->second + " and " + member.name);
        }
      }
      if (sym.type == elf::SymbolType::ifunc) {
        skipped.emplace(sym.name, "ifunc symbol");
      } else if (sym.type == elf::SymbolType::func) {
        if (sym.name.find('@') != std::string::npos) {
          skipped.emplace(sym.name, "versioned symbol");
        } else {
          exports.insert(sym.name);
        }
      }
    }
  }
  if (exports.empty()) throw Error("no exports");

  ExportList out;
  out.exports.assign(exports.begin(), exports.end());
  for (auto& [name, reason] : skipped) out.skipped.push_back({name, reason});
  return out;
}

std::set<std::string> library_functions(const LibraryRecipe& lib) {
  elf::Archive ar = elf::read_archive(lib.archive_path);
  std::set<std::string> out;
  for (const auto& member : ar.members) {
    for (auto& f : elf::defined_functions(member.object.symbols)) out.insert(std::move(f));
  }
  return out;
}

SliceResult probe_build(const LibraryRecipe& lib, const std::string& export_name) {
  return probe_build(lib, export_name, library_functions(lib));
}

SliceResult probe_build(const LibraryRecipe& lib, const std::string& export_name,
                        const std::set<std::string>& functions) {
  const ToolchainConfig& tc = lib.toolchain;
  SliceResult result;
  result.export_name = export_name;

  TempDir work("helix-probe");
  write_text(work.path() / "probe.c", "extern void " + export_name +
                                          "(void);\n\nint main(void) {\n  ((void (*)(void))" +
                                          export_name + ")();\n  return 0;\n}\n");

  std::vector<std::string> argv = split_command(tc.compiler_cmd);
  if (argv.empty()) throw ToolchainError("C compiler command is empty");
  for (auto& f : tc.compile_flags()) argv.push_back(f);
  if (lib.header_dir) argv.push_back("-I" + lib.header_dir->string());
  argv.insert(argv.end(), {"-o", "probe", "probe.c", fs::absolute(lib.archive_path).string()});
  for (auto& f : tc.link_flags()) argv.push_back(f);
  if (tc.slicing_strategy == SlicingStrategy::lto) argv.push_back("-Wl,--export-dynamic-symbol=" + export_name);

  CommandResult run = run_command({.argv = argv, .cwd = work.path(), .timeout = tc.timeout});
  result.log = run.output;
  if (run.exec_failed) throw ToolchainError("C compiler not usable: '" + tc.compiler_cmd + "'");
  if (run.timed_out) {
    result.reason = "timeout after " + std::to_string(tc.timeout.count()) + " s";
    return result;
  }
  if (run.exit_code != 0) {
    result.reason = "link failed (exit " + std::to_string(run.exit_code) + ")";
    return result;
  }

  fs::path binary = work.path() / "probe";
  result.binary_size = fs::file_size(binary);
  elf::ObjectFile probe = elf::read_object(binary);
  for (const auto& f : elf::defined_functions(probe.symbols)) {
    auto name = base_name(f);
    if (functions.contains(name)) result.surviving_functions.insert(name);
  }
  if (!result.surviving_functions.contains(export_name)) {
    result.surviving_functions.clear();
    result.reason = "seed export absent from probe binary";
    return result;
  }
  result.status = SliceStatus::built;
  return result;
}

std::string rename_prefix(const LibraryRecipe& lib) {
  return "h" + sha256_hex(read_file(lib.archive_path)).substr(0, 8);
}

fs::path rename_symbols(const LibraryRecipe& lib, const std::string& prefix, const fs::path& out) {
  if (!is_c_identifier(prefix)) throw Error("rename prefix is not a C identifier fragment: '" + prefix + "'");
  elf::Archive ar = elf::read_archive(lib.archive_path);

  std::set<std::string> all_names;
  std::set<std::string> to_rename;
  for (const auto& member : ar.members) {
    for (const auto& sym : member.object.symbols) {
      if (sym.name.empty()) continue;
      all_names.insert(sym.name);
      if (sym.defined && is_strong_or_weak_global(sym)) to_rename.insert(sym.name);
    }
  }
  std::string map;
  for (const auto& name : to_rename) {
    std::string renamed = prefix + "_" + name;
    if (all_names.contains(renamed)) throw Error("rename collision: " + renamed + " already present in " + lib.name);
    map += name + " " + renamed + "\n";
  }

  TempDir work("helix-rename");
  write_text(work.path() / "syms.map", map);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  std::vector<std::string> argv = split_command(lib.toolchain.objcopy_cmd);
  if (argv.empty()) throw ToolchainError("object-copy command is empty");
  argv.push_back("-D");
  argv.push_back("--redefine-syms=" + (work.path() / "syms.map").string());
  argv.push_back(fs::absolute(lib.archive_path).string());
  argv.push_back(fs::absolute(out).string());
  CommandResult run = run_command({.argv = argv, .timeout = lib.toolchain.timeout});
  if (run.exec_failed) throw ToolchainError("object-copy tool not usable: '" + lib.toolchain.objcopy_cmd + "'");
  if (!run.ok()) throw Error("symbol rename failed for " + lib.name + ":\n" + run.output);
  return out;
}

std::size_t ExtractionResult::discarded_count() const {
  std::size_t n = skipped.size();
  for (const auto& s : slices) n += s.status == SliceStatus::discarded;
  return n;
}

ExtractionResult extract_components(const LibraryRecipe& lib, const ExtractOptions& options) {
  if (!is_valid_library_name(lib.name)) throw Error("invalid library name '" + lib.name + "'");
  ExportList exports = enumerate_exports(lib);
  std::set<std::string> functions = library_functions(lib);

  ExtractionResult result;
  result.library = lib.name;
  result.version = lib.version;
  result.skipped = exports.skipped;
  result.slices.resize(exports.exports.size());
  parallel_for(exports.exports.size(), options.jobs, [&](std::size_t i) {
    result.slices[i] = probe_build(lib, exports.exports[i], functions);
  });

  bool any_built = std::any_of(result.slices.begin(), result.slices.end(),
                               [](const SliceResult& s) { return s.status == SliceStatus::built; });
  if (!any_built) throw Error("library yielded no components");

  Bytes original = read_file(lib.archive_path);
  result.original_sha256 = sha256_hex(original);
  result.prefix = "h" + result.original_sha256.substr(0, 8);
  fs::path staging = options.staging_dir.empty() ? fs::current_path() : options.staging_dir;
  result.renamed_archive = rename_symbols(lib, result.prefix, staging / ("lib" + lib.name + ".a"));
  std::string archive_ref = "sha256:" + sha256_hex(read_file(result.renamed_archive));

  for (const auto& slice : result.slices) {
    if (slice.status != SliceStatus::built) continue;
    ComponentSpec c;
    c.id = lib.name + "." + slice.export_name;
    c.library_id = lib.name;
    c.seed_function = slice.export_name;
    c.export_name = result.prefix + "_" + slice.export_name;
    for (const auto& f : slice.surviving_functions) c.labels.insert(Label(lib.name, f));
    c.stub_source = make_stub_source(c.id, c.export_name);
    c.archive_ref = archive_ref;
    validate_component(c);
    result.components.push_back(std::move(c));
  }
  return result;
}

}  // namespace helix
