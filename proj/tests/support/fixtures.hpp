#pragma once

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "amlnet/ingestion.hpp"
#include "amlnet/risk_tables.hpp"

namespace fixture {

/// One ledger line in the canonical column order; blank cells are MISSING.
struct Row {
  std::string txn_id;
  std::string date = "2014-01-10";
  std::string seller = "S";
  std::string debtor = "D";
  std::string amount = "20000";
  std::string owner = "O1";
  std::string rep = "R1";
  std::string country = "IT";
  std::string seller_sector = "construction";
  std::string debtor_sector = "textiles";
  std::string seller_region = "Lombardia";
  std::string debtor_region = "Lombardia";
};

inline std::string ledger_csv(const std::vector<Row>& rows) {
  std::string out(amlnet::kLedgerHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", r.txn_id,
                       r.date, r.seller, r.debtor, r.amount, r.owner, r.rep,
                       r.country, r.seller_sector, r.debtor_sector,
                       r.seller_region, r.debtor_region);
  }
  return out;
}

inline amlnet::Ledger ledger(const std::vector<Row>& rows,
                             const amlnet::RiskTables& tables =
                                 amlnet::RiskTables::defaults()) {
  std::istringstream in(ledger_csv(rows));
  return amlnet::parse_ledger(in, tables);
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() /
             fmt::format("amlnet-test-{}", name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fixture
