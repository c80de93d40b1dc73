#include "cli/run_dir.hpp"

#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

#include "amlnet/digest.hpp"
#include "amlnet/error.hpp"

namespace amlnet::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kManifest = "manifest.json";

// Stage -> stages that read its outputs.
const std::map<std::string, std::vector<std::string>, std::less<>>
    kDownstream{{"ingest", {"analyze", "alerts"}},
                {"analyze", {"fit", "score"}},
                {"fit", {"score"}},
                {"score", {"export"}},
                {"alerts", {"export"}}};

}  // namespace

RunDir::RunDir(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_, ec);
  if (ec || !fs::is_directory(root_)) {
    throw IoError("cannot create run directory '" + root_.string() + "'");
  }
  const auto manifest = root_ / kManifest;
  if (fs::exists(manifest)) {
    try {
      manifest_ = nlohmann::ordered_json::parse(read(kManifest));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("corrupt manifest.json: ") + e.what());
    }
  } else {
    manifest_ = nlohmann::ordered_json::object();
  }
  if (!manifest_.contains("stages")) {
    manifest_["stages"] = nlohmann::ordered_json::object();
  }
}

fs::path RunDir::path(std::string_view relative) const {
  return root_ / fs::path(relative);
}

void RunDir::write(std::string_view relative, std::string_view content) const {
  const auto target = path(relative);
  std::error_code ec;
  fs::create_directories(target.parent_path(), ec);
  std::ofstream out(target, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + target.string() + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError("write failed for '" + target.string() + "'");
}

std::string RunDir::read(std::string_view relative) const {
  const auto source = path(relative);
  std::ifstream in(source, std::ios::binary);
  if (!in) throw IoError("cannot read '" + source.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool RunDir::has_stage(std::string_view name) const {
  return manifest_["stages"].contains(std::string(name));
}

const nlohmann::ordered_json& RunDir::stage(std::string_view name) const {
  return manifest_["stages"].at(std::string(name));
}

void RunDir::verify_stage(std::string_view name) const {
  if (!has_stage(name)) {
    throw ValidationError("run directory has no '" + std::string(name) +
                          "' stage; run it first");
  }
  for (const auto& [file, digest] : stage(name)["outputs"].items()) {
    const auto target = path(file);
    if (!fs::exists(target)) {
      throw ValidationError("manifest chain broken: '" + file +
                            "' is missing");
    }
    if (sha256_file(target) != digest.get<std::string>()) {
      throw ValidationError("manifest chain broken: '" + file +
                            "' changed since stage '" + std::string(name) +
                            "' wrote it");
    }
  }
}

void RunDir::record_stage(std::string_view name,
                          nlohmann::ordered_json entry) {
  std::vector<std::string> stale{std::string(name)};
  while (!stale.empty()) {
    auto s = stale.back();
    stale.pop_back();
    if (auto it = kDownstream.find(s); it != kDownstream.end()) {
      for (const auto& d : it->second) {
        manifest_["stages"].erase(d);
        stale.push_back(d);
      }
    }
  }
  manifest_["stages"][std::string(name)] = std::move(entry);
}

void RunDir::save() const { write(kManifest, manifest_.dump(2) + "\n"); }

}  // namespace amlnet::cli
