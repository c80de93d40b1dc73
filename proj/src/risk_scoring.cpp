#include "amlnet/risk_scoring.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

#include "amlnet/error.hpp"

namespace amlnet {

RiskScore::RiskScore(double value) : value_(value) {
  if (!(value >= 1.0 && value <= 3.0)) {
    throw std::invalid_argument(
        fmt::format("risk score {} outside [1, 3]", value));
  }
}

RiskScore bin_amount(Amount amount, const RiskTables& tables) {
  if (amount < tables.amount_bins.at(0)) return RiskScore{1.0};
  if (amount < tables.amount_bins.at(1)) return RiskScore{2.0};
  return RiskScore{3.0};
}

int percentile_bucket(double value, std::span<const double> population) {
  const auto n = population.size();
  // Ties share the lowest rank.
  const auto below = static_cast<std::size_t>(
      std::count_if(population.begin(), population.end(),
                    [&](double v) { return v < value; }));
  const std::size_t rank = below + 1;
  // rank / n <= 0.30, compared in integers.
  if (rank * 10 <= 3 * n) return 1;
  if (rank * 10 <= 7 * n) return 2;
  return 3;
}

std::map<std::string, RegionRiskEntry, std::less<>> region_scores(
    const RiskTables& tables) {
  const auto& regions = tables.region_indicators;
  if (regions.size() < 4) {
    throw ValidationError(fmt::format(
        "region scoring needs at least 4 regions, got {}", regions.size()));
  }
  std::vector<double> crime;
  std::vector<double> ops;
  for (const auto& [name, ind] : regions) {
    crime.push_back(ind.crime_rate);
    ops.push_back(ind.suspicious_ops);
  }
  std::map<std::string, RegionRiskEntry, std::less<>> out;
  for (const auto& [name, ind] : regions) {
    RegionRiskEntry e;
    e.region = name;
    e.partial_scores = {percentile_bucket(ind.crime_rate, crime),
                        percentile_bucket(ind.suspicious_ops, ops),
                        ind.mafia_presence ? 3 : 1};
    e.combined = (e.partial_scores[0] + e.partial_scores[1] +
                  e.partial_scores[2]) /
                 3.0;
    out.emplace(name, e);
  }
  return out;
}

RiskScore country_score(std::string_view country, const RiskTables& tables) {
  auto it = tables.country_indicators.find(country);
  if (it == tables.country_indicators.end()) {
    throw ValidationError("unknown country '" + std::string(country) + "'");
  }
  const auto& c = it->second;
  const int penalties = int(!c.white_list) + int(c.tax_haven) +
                        int(!c.ocse_compliant) +
                        int(c.cpi < tables.cpi_cutoff) + int(c.fatf_listed);
  if (penalties == 0) return RiskScore{1.0};
  if (penalties <= 2) return RiskScore{2.0};
  return RiskScore{3.0};
}

RiskScore arc_score(RiskScore seller, RiskScore debtor, ArcCombine combine) {
  if (combine == ArcCombine::Max) return std::max(seller, debtor);
  return RiskScore{(seller.value() + debtor.value()) / 2.0};
}

RiskScorer::RiskScorer(const RiskTables& tables)
    : tables_(tables), regions_(region_scores(tables)) {}

RiskScore RiskScorer::geo(const Party& party) const {
  if (party.region == kForeignRegion) {
    if (party.country.empty()) {
      throw ValidationError("foreign party '" + party.party_id +
                            "' has no country");
    }
    return country_score(party.country, tables_);
  }
  auto it = regions_.find(party.region);
  if (it == regions_.end()) {
    throw ValidationError("party '" + party.party_id + "' has unknown region '" +
                          party.region + "'");
  }
  return RiskScore{it->second.combined};
}

RiskScore RiskScorer::sector(const Party& party) const {
  auto cls = tables_.resolve_sector(party.sector_code);
  if (!cls) {
    throw ValidationError("party '" + party.party_id +
                          "' has unresolved sector '" + party.sector_code +
                          "'");
  }
  return RiskScore{*cls == SectorClass::High ? 3.0 : 1.0};
}

}  // namespace amlnet
