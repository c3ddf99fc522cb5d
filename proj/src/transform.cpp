#include "helix/transform.hpp"

#include "helix/error.hpp"
#include "helix/process.hpp"

namespace fs = std::filesystem;

namespace helix {
namespace {

class IdentityTransform final : public Transform {
 public:
  explicit IdentityTransform(TransformKind kind)
      : spec_{kind == TransformKind::artifact ? "identity-artifact" : "identity-source", kind, {}} {}
  const TransformSpec& spec() const override { return spec_; }

 protected:
  void rewrite(const fs::path&) const override {}

 private:
  TransformSpec spec_;
};

class StripTransform final : public Transform {
 public:
  explicit StripTransform(ToolchainConfig tc)
      : spec_{"strip", TransformKind::artifact, {Label("transform", "strip")}}, toolchain_(std::move(tc)) {}
  const TransformSpec& spec() const override { return spec_; }

 protected:
  void rewrite(const fs::path& target) const override {
    std::vector<std::string> argv = split_command(toolchain_.objcopy_cmd);
    if (argv.empty()) throw ToolchainError("object-copy command is empty");
    argv.push_back("--strip-all");
    argv.push_back(target.string());
    auto run = run_command({.argv = argv, .timeout = toolchain_.timeout});
    if (run.exec_failed) throw ToolchainError("object-copy tool not usable: '" + toolchain_.objcopy_cmd + "'");
    if (!run.ok()) throw Error("strip failed on " + target.string() + ":\n" + run.output);
  }

 private:
  TransformSpec spec_;
  ToolchainConfig toolchain_;
};

}  // namespace

void apply_transform(const Transform& transform, const TransformTarget& target, SampleRecord& owner) {
  const auto& spec = transform.spec();
  if (spec.kind != target.kind) {
    throw Error("transform " + spec.id + " expects a " +
                (spec.kind == TransformKind::artifact ? "built artifact" : "source directory"));
  }
  if (target.kind == TransformKind::artifact && !fs::is_regular_file(target.path)) {
    throw Error("transform " + spec.id + ": no built binary at " + target.path.string());
  }
  if (target.kind == TransformKind::source && !fs::is_directory(target.path)) {
    throw Error("transform " + spec.id + ": no project directory at " + target.path.string());
  }
  transform.rewrite(target.path);
  owner.labels.merge(spec.labels);
}

std::vector<std::string> builtin_transform_ids() { return {"identity-artifact", "identity-source", "strip"}; }

std::unique_ptr<Transform> make_transform(std::string_view id, const ToolchainConfig& toolchain) {
  if (id == "strip") return std::make_unique<StripTransform>(toolchain);
  if (id == "identity-artifact") return std::make_unique<IdentityTransform>(TransformKind::artifact);
  if (id == "identity-source") return std::make_unique<IdentityTransform>(TransformKind::source);
  throw Error("unknown transform '" + std::string(id) + "'");
}

}  // namespace helix
