#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "amlnet/risk_tables.hpp"
#include "amlnet/types.hpp"

namespace amlnet {

/// One ledger row. Optional fields are MISSING when the CSV cell is empty.
/// Money flows debtor -> seller's credit.
struct TransactionRecord {
  std::string txn_id;
  Date timestamp;
  PartyId seller_id;
  std::optional<PartyId> debtor_id;
  Amount amount;
  std::optional<PersonId> owner_id;
  std::optional<PersonId> representative_id;
  std::optional<std::string> country;
  std::string seller_sector;
  std::optional<std::string> debtor_sector;
  std::string seller_region;
  std::optional<std::string> debtor_region;

  friend bool operator==(const TransactionRecord&,
                         const TransactionRecord&) = default;
};

struct Party {
  PartyId party_id;
  std::string sector_code;
  std::string region;
  std::string country;  // empty when it cannot be inferred
  RiskLabel high_risk_label = RiskLabel::Unknown;
  bool is_seller = false;
  bool is_debtor = false;

  friend bool operator==(const Party&, const Party&) = default;
};

/// Records in file order; parties sorted by party_id.
struct Ledger {
  std::vector<TransactionRecord> records;
  std::vector<Party> parties;

  const Party* find_party(std::string_view id) const;
};

inline constexpr std::string_view kLedgerHeader =
    "txn_id,timestamp,seller_id,debtor_id,amount,owner_id,representative_id,"
    "country,seller_sector,debtor_sector,seller_region,debtor_region";

Ledger parse_ledger(std::istream& in, const RiskTables& tables);
Ledger load_ledger(const std::filesystem::path& path, const RiskTables& tables);

void write_ledger_csv(std::ostream& out,
                      std::span<const TransactionRecord> records);

struct ThresholdResult {
  std::vector<TransactionRecord> records;
  std::size_t dropped = 0;
};

/// Keeps records at or above the recording threshold, plus sub-threshold
/// records of an ordered (seller, debtor) pair whose sub-threshold amounts
/// within a rolling window of `aggregation_window_days` reach the threshold.
/// Relative record order is preserved.
ThresholdResult apply_recording_threshold(
    std::span<const TransactionRecord> ledger, const RiskTables& tables);

struct LabelResult {
  std::vector<Party> parties;
  std::size_t labeled = 0;
  std::vector<std::string> warnings;
};

inline constexpr std::string_view kLabelsHeader = "party_id,high_risk";

LabelResult apply_labels(std::istream& in, std::vector<Party> parties);
LabelResult load_labels(const std::filesystem::path& path,
                        std::vector<Party> parties);

/// Normalized party table: party_id,sector_code,region,country,
/// is_seller,is_debtor,high_risk (high_risk empty when unknown).
void write_parties_csv(std::ostream& out, std::span<const Party> parties);
std::vector<Party> read_parties_csv(std::istream& in);

}  // namespace amlnet
