#include "helix/corpus.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "helix/error.hpp"
#include "helix/util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace helix {

void write_component_archive(const ExtractionResult& result, const fs::path& dir) {
  fs::create_directories(dir);
  const std::string archive_name = "lib" + result.library + ".a";
  if (fs::absolute(result.renamed_archive) != fs::absolute(dir / archive_name)) {
    fs::copy_file(result.renamed_archive, dir / archive_name, fs::copy_options::overwrite_existing);
  }

  json components = json::array();
  std::string archive_ref;
  for (const auto& c : result.components) {
    archive_ref = c.archive_ref;
    write_text(dir / (c.id + ".stub.c"), c.stub_source);
    std::string labels;
    for (const auto& l : c.labels.rendered()) labels += l + "\n";
    write_text(dir / (c.id + ".labels"), labels);
    components.push_back({{"id", c.id},
                          {"export", c.export_name},
                          {"seed_function", c.seed_function},
                          {"stub", c.id + ".stub.c"},
                          {"labels", c.id + ".labels"}});
  }
  json discarded = json::array();
  for (const auto& s : result.skipped) discarded.push_back({{"export", s.name}, {"reason", s.reason}});
  for (const auto& s : result.slices) {
    if (s.status == SliceStatus::discarded) discarded.push_back({{"export", s.export_name}, {"reason", s.reason}});
  }

  json doc = {{"name", result.library},
              {"version", result.version},
              {"prefix", result.prefix},
              {"original_sha256", result.original_sha256},
              {"archive", archive_name},
              {"archive_ref", archive_ref},
              {"components", components},
              {"discarded", discarded}};
  write_text(dir / "library.json", doc.dump(2) + "\n");
}

bool is_component_archive(const fs::path& dir) { return fs::is_regular_file(dir / "library.json"); }

LibraryEntry read_component_archive(const fs::path& dir) {
  if (!is_component_archive(dir)) throw Error("not a component archive: " + dir.string());
  json doc;
  try {
    doc = json::parse(read_text(dir / "library.json"));
  } catch (const json::exception& e) {
    throw Error("library.json in " + dir.string() + ": " + e.what());
  }
  try {
    LibraryEntry e;
    e.dir = dir;
    e.name = doc.at("name").get<std::string>();
    if (!is_valid_library_name(e.name)) throw Error("invalid library name '" + e.name + "' in " + dir.string());
    e.version = doc.value("version", "");
    e.prefix = doc.at("prefix").get<std::string>();
    e.archive_path = dir / doc.at("archive").get<std::string>();
    e.archive_ref = doc.at("archive_ref").get<std::string>();
    if (!fs::is_regular_file(e.archive_path)) throw Error("missing archive " + e.archive_path.string());
    if ("sha256:" + sha256_hex(read_file(e.archive_path)) != e.archive_ref) {
      throw Error("archive content of " + e.archive_path.string() + " does not match " + e.archive_ref);
    }
    for (const auto& jc : doc.at("components")) {
      ComponentSpec c;
      c.id = jc.at("id").get<std::string>();
      c.library_id = e.name;
      c.export_name = jc.at("export").get<std::string>();
      c.seed_function = jc.at("seed_function").get<std::string>();
      c.stub_source = read_text(dir / jc.at("stub").get<std::string>());
      std::istringstream labels(read_text(dir / jc.at("labels").get<std::string>()));
      for (std::string line; std::getline(labels, line);) {
        if (!line.empty()) c.labels.insert(Label::parse(line));
      }
      c.archive_ref = e.archive_ref;
      validate_component(c);
      e.components.push_back(std::move(c));
    }
    if (e.components.empty()) throw Error("component archive " + dir.string() + " has no components");
    std::sort(e.components.begin(), e.components.end(),
              [](const ComponentSpec& a, const ComponentSpec& b) { return a.id < b.id; });
    for (const auto& jd : doc.value("discarded", json::array())) {
      e.discarded.push_back({jd.at("export").get<std::string>(), jd.value("reason", "")});
    }
    return e;
  } catch (const json::exception& ex) {
    throw Error("library.json in " + dir.string() + ": " + ex.what());
  }
}

Corpus Corpus::load(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error("corpus directory not found: " + dir.string());
  std::vector<LibraryEntry> entries;
  for (const auto& d : fs::directory_iterator(dir)) {
    if (d.is_directory() && is_component_archive(d.path())) entries.push_back(read_component_archive(d.path()));
  }
  if (entries.empty()) throw Error("no component archives in " + dir.string());
  return from_entries(std::move(entries));
}

Corpus Corpus::from_entries(std::vector<LibraryEntry> entries) {
  Corpus c;
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].name == entries[i - 1].name) throw Error("duplicate library " + entries[i].name + " in corpus");
  }
  c.libraries_ = std::move(entries);

  std::string material;
  for (std::size_t li = 0; li < c.libraries_.size(); ++li) {
    const auto& lib = c.libraries_[li];
    if (lib.components.empty()) throw Error("library " + lib.name + " has no components");
    c.archives_[lib.archive_ref] = lib.archive_path;
    material += lib.name + "\n" + lib.archive_ref + "\n";
    for (std::size_t ci = 0; ci < lib.components.size(); ++ci) {
      const auto& comp = lib.components[ci];
      if (!c.component_index_.emplace(comp.id, std::pair{li, ci}).second) {
        throw Error("duplicate component id " + comp.id);
      }
      material += comp.id + "\n" + comp.export_name + "\n";
      for (const auto& l : comp.labels.rendered()) material += l + "\n";
    }
  }
  c.fingerprint_ = "sha256:" + sha256_hex(material);
  return c;
}

const ComponentSpec& Corpus::component(const std::string& id) const {
  auto it = component_index_.find(id);
  if (it == component_index_.end()) throw Error("unknown component " + id);
  return libraries_[it->second.first].components[it->second.second];
}

const fs::path& Corpus::archive_for(const std::string& archive_ref) const {
  auto it = archives_.find(archive_ref);
  if (it == archives_.end()) throw Error("missing archive content for " + archive_ref);
  return it->second;
}

}  // namespace helix
