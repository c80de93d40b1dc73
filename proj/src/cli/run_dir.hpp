#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include <json.hpp>

namespace amlnet::cli {

/// Operator-named output directory plus its manifest.json chain.
class RunDir {
 public:
  explicit RunDir(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path path(std::string_view relative) const;

  /// Writes `content` to root/relative, creating parent directories.
  void write(std::string_view relative, std::string_view content) const;
  std::string read(std::string_view relative) const;

  /// Throws ValidationError unless `stage` is recorded and every listed
  /// output still hashes to its recorded digest.
  void verify_stage(std::string_view stage) const;
  bool has_stage(std::string_view stage) const;
  const nlohmann::ordered_json& stage(std::string_view stage) const;

  /// Replaces the stage record and drops stages that consumed it.
  void record_stage(std::string_view stage, nlohmann::ordered_json entry);
  void save() const;

 private:
  std::filesystem::path root_;
  nlohmann::ordered_json manifest_;
};

}  // namespace amlnet::cli
