#pragma once

#include <array>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "amlnet/ingestion.hpp"
#include "amlnet/metrics.hpp"
#include "amlnet/network.hpp"

namespace amlnet {

inline constexpr std::size_t kFeatureCount = 20;

/// Column order of the feature matrix: label, Missing Id, then six metrics
/// for each of the geo, transactions, and sector networks.
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureColumns{
    "high_risk",          "missing_id",         "geo_in_degree",
    "geo_out_degree",     "geo_all_degree",     "geo_closeness",
    "geo_betweenness",    "geo_constraint",     "txn_in_degree",
    "txn_out_degree",     "txn_all_degree",     "txn_closeness",
    "txn_betweenness",    "txn_constraint",     "sector_in_degree",
    "sector_out_degree",  "sector_all_degree",  "sector_closeness",
    "sector_betweenness", "sector_constraint"};

std::optional<std::size_t> feature_index(std::string_view name);

struct ClientFeatureRow {
  PartyId party_id;
  RiskLabel high_risk_label = RiskLabel::Unknown;
  double missing_id = 0.0;
  NodeMetrics geo;
  NodeMetrics transactions;
  NodeMetrics sector;

  bool fit_eligible() const { return high_risk_label != RiskLabel::Unknown; }

  /// Value of column `index` in kFeatureColumns order. The label column
  /// is NaN when unknown.
  double value(std::size_t index) const;
  /// Throws ValidationError for an unknown column name.
  double value(std::string_view name) const;
};

/// Filtered, finalized analytic networks.
struct AnalyticNetworks {
  RiskNetwork transactions;
  RiskNetwork sector;
  RiskNetwork geo;
};

/// One row per ledger party, sorted by party_id. Metrics come from the
/// filtered networks; parties absent from them get zeros.
std::vector<ClientFeatureRow> assemble_features(const AnalyticNetworks& nets,
                                                const Ledger& ledger);

void write_features_csv(std::ostream& out,
                        std::span<const ClientFeatureRow> rows);
std::vector<ClientFeatureRow> read_features_csv(std::istream& in);

}  // namespace amlnet
