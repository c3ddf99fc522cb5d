#pragma once

#include <string>
#include <vector>

#include "helix/corpus.hpp"
#include "helix/generator.hpp"

namespace helix::testing {

// In-memory corpus of `libraries` libraries named l000, l001, ... with
// `components` components each. Component j of a library is labelled with
// functions f0..fj, so components of one library overlap.
inline Corpus synthetic_corpus(std::size_t libraries, std::size_t components) {
  std::vector<LibraryEntry> entries;
  for (std::size_t i = 0; i < libraries; ++i) {
    LibraryEntry e;
    char name[32];
    std::snprintf(name, sizeof name, "l%03zu", i);
    e.name = name;
    e.prefix = "h0000";
    e.archive_ref = "sha256:" + e.name;
    for (std::size_t j = 0; j < components; ++j) {
      ComponentSpec c;
      c.library_id = e.name;
      c.seed_function = "f" + std::to_string(j);
      c.id = e.name + "." + c.seed_function;
      c.export_name = e.prefix + "_" + c.seed_function;
      for (std::size_t k = 0; k <= j; ++k) c.labels.insert(Label(e.name, "f" + std::to_string(k)));
      c.archive_ref = e.archive_ref;
      e.components.push_back(std::move(c));
    }
    entries.push_back(std::move(e));
  }
  return Corpus::from_entries(std::move(entries));
}

// Manifest whose sample i carries labels[i]; no binaries.
inline DatasetManifest synthetic_manifest(const std::vector<std::vector<std::string>>& labels) {
  DatasetManifest m;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    DatasetSample s;
    char id[32];
    std::snprintf(id, sizeof id, "s%05zu", i);
    s.record.id = id;
    s.record.labels = LabelSet::from_strings(labels[i]);
    s.record.artifact_path = std::string("bin/") + id;
    m.samples.push_back(std::move(s));
  }
  return m;
}

}  // namespace helix::testing
