#include "helix/label.hpp"

#include <algorithm>

#include "helix/error.hpp"

namespace helix {

Label::Label(std::string library_name, std::string function_name)
    : library_(std::move(library_name)), function_(std::move(function_name)) {
  if (library_.empty() || function_.empty()) {
    throw Error("label parts must be non-empty: '" + library_ + "-" + function_ + "'");
  }
}

Label Label::parse(std::string_view rendered) {
  auto dash = rendered.find('-');
  if (dash == std::string_view::npos) {
    throw Error("label has no '-' separator: '" + std::string(rendered) + "'");
  }
  return Label(std::string(rendered.substr(0, dash)), std::string(rendered.substr(dash + 1)));
}

LabelSet LabelSet::from_strings(const std::vector<std::string>& rendered) {
  LabelSet out;
  for (const auto& s : rendered) out.insert(Label::parse(s));
  return out;
}

bool LabelSet::is_subset_of(const LabelSet& other) const {
  return std::includes(other.labels_.begin(), other.labels_.end(), labels_.begin(), labels_.end());
}

std::vector<std::string> LabelSet::rendered() const {
  std::vector<std::string> out;
  out.reserve(labels_.size());
  for (const auto& l : labels_) out.push_back(l.str());
  std::sort(out.begin(), out.end());
  return out;
}

OverlapCounts overlap(const LabelSet& a, const LabelSet& b) {
  OverlapCounts counts;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++counts.intersection;
      ++ia;
      ++ib;
    }
  }
  counts.union_size = a.size() + b.size() - counts.intersection;
  return counts;
}

double ground_truth_similarity(const LabelSet& a, const LabelSet& b) {
  if (a.empty() && b.empty()) throw Error("undefined similarity");
  auto c = overlap(a, b);
  return static_cast<double>(c.intersection) / static_cast<double>(c.union_size);
}

bool is_valid_library_name(std::string_view name) {
  return !name.empty() && name.find('-') == std::string_view::npos;
}

}  // namespace helix
