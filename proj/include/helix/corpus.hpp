#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "helix/model.hpp"
#include "helix/slicer.hpp"

namespace helix {

// On-disk component archive, one directory per library:
//
//   library.json          name, version, prefix, archive, archive_ref,
//                         components[{id, export, seed_function, stub, labels}],
//                         discarded[{export, reason}]
//   <component-id>.stub.c call stub
//   <component-id>.labels newline-delimited rendered labels
//   lib<name>.a           renamed archive
struct LibraryEntry {
  std::string name;
  std::string version;
  std::string prefix;
  std::filesystem::path dir;
  std::filesystem::path archive_path;
  std::string archive_ref;
  std::vector<ComponentSpec> components;  // component-id order
  std::vector<SkippedExport> discarded;
};

void write_component_archive(const ExtractionResult& result, const std::filesystem::path& dir);
LibraryEntry read_component_archive(const std::filesystem::path& dir);
bool is_component_archive(const std::filesystem::path& dir);

class Corpus {
 public:
  // Loads every component archive directly below `dir`.
  static Corpus load(const std::filesystem::path& dir);
  static Corpus from_entries(std::vector<LibraryEntry> entries);

  const std::vector<LibraryEntry>& libraries() const noexcept { return libraries_; }
  std::size_t size() const noexcept { return libraries_.size(); }
  const std::string& fingerprint() const noexcept { return fingerprint_; }

  const ComponentSpec& component(const std::string& id) const;
  // Throws helix::Error if no library provides this archive_ref.
  const std::filesystem::path& archive_for(const std::string& archive_ref) const;

 private:
  std::vector<LibraryEntry> libraries_;  // sorted by name
  std::string fingerprint_;
  std::map<std::string, std::pair<std::size_t, std::size_t>> component_index_;
  std::map<std::string, std::filesystem::path> archives_;
};

}  // namespace helix
