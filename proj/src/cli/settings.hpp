#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "amlnet/network.hpp"
#include "amlnet/risk_scoring.hpp"
#include "amlnet/risk_tables.hpp"

namespace amlnet::cli {

/// Effective run configuration: reference tables plus pipeline options.
struct Settings {
  std::string source = "builtin";  // config path, or "builtin"
  RiskTables tables = RiskTables::defaults();
  double threshold_transactions = 2.5;
  double threshold_sector = 2.5;
  double threshold_geo = 2.5;
  Collapse collapse = Collapse::Mean;
  ArcCombine arc_combine = ArcCombine::Mean;
  std::vector<std::string> predictors{"missing_id", "geo_in_degree",
                                      "sector_constraint", "txn_all_degree",
                                      "txn_closeness"};
  bool standardize = false;
  std::string model = "paper:model4";
  std::size_t top_k = 0;  // 0 keeps every client

  void set_threshold(double t) {
    threshold_transactions = threshold_sector = threshold_geo = t;
  }
  /// SHA-256 over a canonical rendering of every effective value.
  std::string hash() const;
};

/// Loads `path` when given, else the built-in defaults. The INI file holds
/// [tables] and [thresholds] (see load_risk_tables) plus optional
/// [analysis], [fit] and [score] sections.
Settings load_settings(const std::optional<std::filesystem::path>& path);

std::vector<std::string> split_list(const std::string& text);

}  // namespace amlnet::cli
