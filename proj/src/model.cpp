#include "helix/model.hpp"

#include <cctype>

#include "helix/error.hpp"

namespace helix {

std::string c_identifier(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    out.push_back(std::isalnum(c) || ch == '_' ? ch : '_');
  }
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out.front()))) out.insert(out.begin(), '_');
  return out;
}

std::string ComponentSpec::stub_symbol() const { return "helix_stub_" + c_identifier(id); }

std::string make_stub_source(const std::string& component_id, const std::string& export_symbol) {
  std::string stub = "helix_stub_" + c_identifier(component_id);
  std::string src;
  src += "/* component " + component_id + " */\n";
  src += "extern void " + export_symbol + "(void);\n\n";
  src += "void " + stub + "(void) {\n";
  src += "  ((void (*)(void))" + export_symbol + ")();\n";
  src += "}\n";
  return src;
}

void validate_component(const ComponentSpec& component) {
  if (!component.labels.contains(Label(component.library_id, component.seed_function))) {
    throw Error("component " + component.id + " is missing the label of its seed export");
  }
  for (const auto& label : component.labels) {
    if (label.library_name() != component.library_id) {
      throw Error("component " + component.id + " carries foreign label " + label.str());
    }
  }
}

LabelSet label_union(std::span<const LabelSet> label_sets) {
  if (label_sets.empty()) throw Error("no components");
  LabelSet out;
  for (const auto& s : label_sets) out.merge(s);
  return out;
}

LabelSet label_union(std::span<const ComponentSpec> components) {
  if (components.empty()) throw Error("no components");
  LabelSet out;
  for (const auto& c : components) out.merge(c.labels);
  return out;
}

}  // namespace helix
