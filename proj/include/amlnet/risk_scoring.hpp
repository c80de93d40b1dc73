#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <string_view>

#include "amlnet/ingestion.hpp"
#include "amlnet/risk_tables.hpp"

namespace amlnet {

/// A risk level on the closed 1..3 scale.
class RiskScore {
 public:
  /// Throws std::invalid_argument outside [1, 3].
  explicit RiskScore(double value);
  double value() const { return value_; }
  friend auto operator<=>(RiskScore, RiskScore) = default;

 private:
  double value_;
};

enum class ArcCombine { Mean, Max };

RiskScore bin_amount(Amount amount, const RiskTables& tables);

struct RegionRiskEntry {
  std::string region;
  std::array<int, 3> partial_scores{};  // crime rate, suspicious ops, mafia
  double combined = 0.0;
};

/// Ordinal 1/2/3 bucket of `value` within `population`: inclusive rank
/// percentile with ties sharing the lowest rank; <= 30% -> 1, <= 70% -> 2.
int percentile_bucket(double value, std::span<const double> population);

/// Throws ValidationError with fewer than 4 regions.
std::map<std::string, RegionRiskEntry, std::less<>> region_scores(
    const RiskTables& tables);

/// Penalty count over the five indicators, bucketed 0 -> 1, 1-2 -> 2, 3+ -> 3.
/// Throws ValidationError for an unknown country.
RiskScore country_score(std::string_view country, const RiskTables& tables);

RiskScore arc_score(RiskScore seller, RiskScore debtor,
                    ArcCombine combine = ArcCombine::Mean);

/// Node-level scorer; caches the region table.
class RiskScorer {
 public:
  explicit RiskScorer(const RiskTables& tables);

  /// Region combined score for Italian parties, country score for FOREIGN.
  RiskScore geo(const Party& party) const;
  /// LOW -> 1, HIGH -> 3.
  RiskScore sector(const Party& party) const;

  const RiskTables& tables() const { return tables_; }

 private:
  RiskTables tables_;
  std::map<std::string, RegionRiskEntry, std::less<>> regions_;
};

}  // namespace amlnet
