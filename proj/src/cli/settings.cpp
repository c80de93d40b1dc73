#include "cli/settings.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "amlnet/digest.hpp"
#include "amlnet/error.hpp"

namespace amlnet::cli {

namespace pt = boost::property_tree;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  auto flush = [&] {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    item.clear();
  };
  for (char c : text) {
    if (c == ',') {
      flush();
    } else {
      item += c;
    }
  }
  flush();
  return out;
}

std::string Settings::hash() const {
  nlohmann::ordered_json j;
  auto& sectors = j["sectors"] = nlohmann::ordered_json::object();
  for (const auto& [code, cls] : tables.sector_class) {
    sectors[code] = cls == SectorClass::High ? "HIGH" : "LOW";
  }
  if (tables.default_sector_class) {
    j["default_sector"] =
        *tables.default_sector_class == SectorClass::High ? "HIGH" : "LOW";
  }
  auto& regions = j["regions"] = nlohmann::ordered_json::object();
  for (const auto& [name, r] : tables.region_indicators) {
    regions[name] = {r.crime_rate, r.suspicious_ops, r.mafia_presence};
  }
  auto& countries = j["countries"] = nlohmann::ordered_json::object();
  for (const auto& [code, c] : tables.country_indicators) {
    countries[code] = {c.white_list, c.tax_haven, c.ocse_compliant, c.cpi,
                       c.fatf_listed};
  }
  auto bins = nlohmann::ordered_json::array();
  for (auto b : tables.amount_bins) bins.push_back(b.cents);
  j["amount_bins"] = bins;
  j["recording_threshold"] = tables.recording_threshold.cents;
  j["aggregation_window"] = tables.aggregation_window_days;
  j["cpi_cutoff"] = tables.cpi_cutoff;
  j["threshold_transactions"] = threshold_transactions;
  j["threshold_sector"] = threshold_sector;
  j["threshold_geo"] = threshold_geo;
  j["collapse"] = std::string(to_string(collapse));
  j["arc_combine"] = std::string(to_string(arc_combine));
  j["predictors"] = predictors;
  j["standardize"] = standardize;
  j["model"] = model;
  j["top_k"] = top_k;
  return sha256_hex(j.dump());
}

namespace {

// Unlike ptree::get with a default, rejects values that fail to convert.
template <typename T>
T strict_get(const pt::ptree& ini, const char* key, T fallback) {
  if (auto node = ini.get_child_optional(key)) return node->get_value<T>();
  return fallback;
}

}  // namespace

Settings load_settings(const std::optional<std::filesystem::path>& path) {
  Settings s;
  if (!path) return s;
  s.source = path->string();
  s.tables = load_risk_tables(*path);
  pt::ptree ini;
  try {
    pt::read_ini(path->string(), ini);
    if (ini.get_child_optional("analysis.high_risk_threshold")) {
      s.set_threshold(strict_get(ini, "analysis.high_risk_threshold", 0.0));
    }
    s.threshold_transactions = strict_get(ini, "analysis.threshold_transactions",
                                          s.threshold_transactions);
    s.threshold_sector =
        strict_get(ini, "analysis.threshold_sector", s.threshold_sector);
    s.threshold_geo = strict_get(ini, "analysis.threshold_geo", s.threshold_geo);
    if (auto v = ini.get_optional<std::string>("analysis.collapse")) {
      s.collapse = parse_collapse(*v);
    }
    if (auto v = ini.get_optional<std::string>("analysis.arc_combine")) {
      s.arc_combine = parse_arc_combine(*v);
    }
    if (auto v = ini.get_optional<std::string>("fit.predictors")) {
      s.predictors = split_list(*v);
    }
    s.standardize = strict_get(ini, "fit.standardize", s.standardize);
    if (auto v = ini.get_optional<std::string>("score.model")) {
      s.model = *v;
      if (s.model.rfind("paper:", 0) != 0 && s.model != "fitted") {
        s.model = (path->parent_path() / s.model).string();
      }
    }
    s.top_k = strict_get(ini, "score.top_k", s.top_k);
  } catch (const pt::ptree_error& e) {
    throw ValidationError(fmt::format("config '{}': {}", path->string(),
                                      e.what()));
  }
  return s;
}

}  // namespace amlnet::cli
