#pragma once

#include <compare>
#include <initializer_list>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace helix {

// A functionality tag of the form `<library_name>-<function_name>`.
class Label {
 public:
  Label(std::string library_name, std::string function_name);

  // Splits on the first dash. Throws helix::Error if either side is empty.
  static Label parse(std::string_view rendered);

  const std::string& library_name() const noexcept { return library_; }
  const std::string& function_name() const noexcept { return function_; }
  std::string str() const { return library_ + "-" + function_; }

  friend auto operator<=>(const Label&, const Label&) = default;
  friend bool operator==(const Label&, const Label&) = default;

 private:
  std::string library_;
  std::string function_;
};

// Ordered set of labels. Iteration order is the rendered-string order within
// each library, so serialized label lists are stable.
class LabelSet {
 public:
  using const_iterator = std::set<Label>::const_iterator;

  LabelSet() = default;
  LabelSet(std::initializer_list<Label> labels) : labels_(labels) {}

  // Convenience for tests and manifests: each string is parsed with
  // Label::parse.
  static LabelSet from_strings(const std::vector<std::string>& rendered);

  bool insert(const Label& label) { return labels_.insert(label).second; }
  void merge(const LabelSet& other) { labels_.insert(other.labels_.begin(), other.labels_.end()); }

  bool contains(const Label& label) const { return labels_.contains(label); }
  bool is_subset_of(const LabelSet& other) const;
  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }

  const_iterator begin() const noexcept { return labels_.begin(); }
  const_iterator end() const noexcept { return labels_.end(); }

  // Rendered strings, sorted lexicographically.
  std::vector<std::string> rendered() const;

  friend bool operator==(const LabelSet&, const LabelSet&) = default;

 private:
  std::set<Label> labels_;
};

// |a ∩ b| and |a ∪ b| in one merge pass.
struct OverlapCounts {
  std::size_t intersection = 0;
  std::size_t union_size = 0;
};
OverlapCounts overlap(const LabelSet& a, const LabelSet& b);

// Jaccard index of two label sets. Throws helix::Error("undefined similarity")
// when both are empty.
double ground_truth_similarity(const LabelSet& a, const LabelSet& b);

// True when `name` is usable as a library name inside a label: non-empty and
// free of dashes, so that first-dash parsing round-trips.
bool is_valid_library_name(std::string_view name);

}  // namespace helix
