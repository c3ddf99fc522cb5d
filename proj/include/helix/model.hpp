#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "helix/label.hpp"

namespace helix {

// A labeled, linkable slice of a library: the call stub for one export plus a
// reference to the renamed library archive that provides it.
struct ComponentSpec {
  std::string id;            // `<library>.<export>`, unique within a corpus
  std::string library_id;    // declared library name
  std::string export_name;   // exported symbol after renaming
  std::string seed_function; // exported symbol as named in the original library
  LabelSet labels;           // functions surviving the slice
  std::string stub_source;   // C translation unit defining stub_symbol()
  std::string archive_ref;   // `sha256:<hex>` of the renamed archive

  // C symbol of the zero-argument stub function defined by stub_source.
  std::string stub_symbol() const;
};

// Throws helix::Error if the component breaks its invariants: the seed export's
// label must be present and every label must belong to library_id.
void validate_component(const ComponentSpec& component);

// Stub source calling `export_symbol` through a zero-argument prototype.
std::string make_stub_source(const std::string& component_id, const std::string& export_symbol);

// Turns an arbitrary component id into a C identifier fragment.
std::string c_identifier(std::string_view text);

enum class BuildStatus { ok, failed };

struct SampleRecord {
  std::string id;
  std::vector<std::string> component_ids;
  LabelSet labels;
  std::filesystem::path artifact_path;
  BuildStatus build_status = BuildStatus::failed;
};

// L_s: union of the component label sets. Throws helix::Error("no components")
// on an empty list.
LabelSet label_union(std::span<const ComponentSpec> components);
LabelSet label_union(std::span<const LabelSet> label_sets);

}  // namespace helix
