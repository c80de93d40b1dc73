#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "amlnet/ingestion.hpp"
#include "amlnet/risk_tables.hpp"

namespace amlnet {

struct SmurfingConfig {
  int pairs = 25;
  int parts_min = 2;
  int parts_max = 3;
};

struct ClusterConfig {
  int count = 18;
  int size = 5;
  double criminal_share = 0.6;  // chance each extra member is criminal
};

struct CorridorConfig {
  double fraction = 0.5;          // of criminal-seller transactions
  double high_sector_prob = 0.6;  // criminal party drawn into a HIGH sector
  double high_region_prob = 0.6;  // criminal party drawn into a risky region
};

struct ScenarioConfig {
  std::uint64_t seed = 42;
  int n_parties = 559;
  int n_transactions = 33'670;
  double fraction_criminal = 0.14;
  double label_coverage = 288.0 / 559.0;
  double foreign_fraction = 0.01;
  double seller_fraction = 0.7;
  double base_high_sector_prob = 0.25;
  /// Amounts are recording_threshold + LogNormal(mu, sigma) euros.
  double amount_mu = 10.0;
  double amount_sigma = 1.1;
  double criminal_amount_multiplier = 2.5;
  double criminal_activity_multiplier = 1.8;
  double missing_rate = 0.01;
  double criminal_missing_multiplier = 1.5;
  std::string start_date = "2013-11-01";
  int span_days = 607;
  SmurfingConfig smurfing;
  ClusterConfig clusters;
  CorridorConfig corridor;

  /// Throws ValidationError for infeasible settings.
  void validate() const;
};

/// Named presets: "full" (559 parties, 33,670 transactions) and "small".
ScenarioConfig scenario_preset(std::string_view name);
/// INI scenario file; keys override the preset named by `preset` (default
/// "full").
ScenarioConfig load_scenario(const std::filesystem::path& path);

struct SmurfingInstance {
  PartyId seller_id;
  PartyId debtor_id;
  std::vector<std::string> txn_ids;
  Amount total;
};

struct SharedCluster {
  std::string shared_person;
  std::string role;  // "owner" or "representative"
  std::vector<PartyId> members;
};

struct TruthReport {
  std::uint64_t seed = 0;
  std::vector<PartyId> criminal_parties;
  std::vector<SmurfingInstance> smurfing;
  std::vector<SharedCluster> clusters;
  std::vector<std::string> corridor_txn_ids;

  std::string to_json() const;
};

struct LabelRow {
  PartyId party_id;
  int high_risk = 0;
};

struct Scenario {
  std::vector<TransactionRecord> records;
  std::vector<LabelRow> labels;
  TruthReport truth;
};

Scenario generate(const ScenarioConfig& config, const RiskTables& tables);

void write_labels_csv(std::ostream& out, std::span<const LabelRow> labels);

}  // namespace amlnet
