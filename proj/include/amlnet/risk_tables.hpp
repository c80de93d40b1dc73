#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "amlnet/types.hpp"

namespace amlnet {

enum class SectorClass { Low, High };

struct RegionIndicators {
  double crime_rate = 0.0;      // percent
  double suspicious_ops = 0.0;  // count
  bool mafia_presence = false;
};

struct CountryIndicators {
  bool white_list = false;
  bool tax_haven = false;
  bool ocse_compliant = false;
  double cpi = 0.0;
  bool fatf_listed = false;
};

/// Region name used for parties operating outside Italy.
inline constexpr std::string_view kForeignRegion = "FOREIGN";
/// Sector code that, when present in the sectors table, classifies every
/// code not listed explicitly.
inline constexpr std::string_view kSectorWildcard = "*";

/// Operator-maintained reference data.
struct RiskTables {
  std::map<std::string, SectorClass, std::less<>> sector_class;
  std::optional<SectorClass> default_sector_class;
  std::map<std::string, RegionIndicators, std::less<>> region_indicators;
  std::map<std::string, CountryIndicators, std::less<>> country_indicators;
  std::vector<Amount> amount_bins{Amount::from_euros(50'000),
                                  Amount::from_euros(250'000)};
  Amount recording_threshold = Amount::from_euros(15'000);
  int aggregation_window_days = 30;
  double cpi_cutoff = 50.0;

  std::optional<SectorClass> resolve_sector(std::string_view code) const;

  /// Throws ValidationError when bins are not strictly increasing, the
  /// window is non-positive, or the threshold is not positive.
  void validate() const;

  /// Built-in tables: the high-risk sector list plus illustrative region
  /// and country indicators. Mirrors data/tables/.
  static RiskTables defaults();
};

std::map<std::string, SectorClass, std::less<>> parse_sectors_csv(
    std::istream& in);
std::map<std::string, RegionIndicators, std::less<>> parse_regions_csv(
    std::istream& in);
std::map<std::string, CountryIndicators, std::less<>> parse_countries_csv(
    std::istream& in);

/// Loads an INI config with a [tables] section naming the three CSVs
/// (relative to the config file) and an optional [thresholds] section.
RiskTables load_risk_tables(const std::filesystem::path& config_path);

/// Writes the tables as an INI config plus three CSVs into `dir`.
void write_risk_tables(const RiskTables& tables,
                       const std::filesystem::path& dir);

}  // namespace amlnet
