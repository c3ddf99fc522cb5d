#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "helix/label.hpp"
#include "helix/model.hpp"
#include "helix/toolchain.hpp"

namespace helix {

enum class TransformKind { artifact, source };

struct TransformSpec {
  std::string id;
  TransformKind kind = TransformKind::artifact;
  LabelSet labels;
};

// Target of a transform: a built binary (artifact) or a rendered project
// directory (source). Transforms rewrite the target in place.
struct TransformTarget {
  TransformKind kind;
  std::filesystem::path path;
};

class Transform {
 public:
  virtual ~Transform() = default;
  virtual const TransformSpec& spec() const = 0;

 protected:
  friend void apply_transform(const Transform&, const TransformTarget&, SampleRecord&);
  virtual void rewrite(const std::filesystem::path& target) const = 0;
};

// Checks the kind, rewrites the target and merges the transform's labels into
// the owning sample. Throws helix::Error on a kind mismatch or when an artifact
// target is not an existing file.
void apply_transform(const Transform& transform, const TransformTarget& target, SampleRecord& owner);

// Built-ins: "strip" (artifact; removes the symbol table with the configured
// object-copy tool), "identity-artifact", "identity-source".
std::unique_ptr<Transform> make_transform(std::string_view id, const ToolchainConfig& toolchain);
std::vector<std::string> builtin_transform_ids();

}  // namespace helix
