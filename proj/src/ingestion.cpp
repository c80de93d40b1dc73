#include "amlnet/ingestion.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <numeric>
#include <tuple>

#include <fmt/format.h>

#include "amlnet/error.hpp"
#include "csv.hpp"

namespace amlnet {

namespace {

constexpr std::array<std::string_view, 12> kLedgerColumns{
    "txn_id",        "timestamp",         "seller_id",     "debtor_id",
    "amount",        "owner_id",          "representative_id", "country",
    "seller_sector", "debtor_sector",     "seller_region", "debtor_region"};

enum Col {
  kTxn, kTime, kSeller, kDebtor, kAmount, kOwner, kRep, kCountry,
  kSellerSector, kDebtorSector, kSellerRegion, kDebtorRegion
};

struct PartyDraft {
  std::string sector;
  std::string region;
  std::string country;
  bool is_seller = false;
  bool is_debtor = false;
};

void merge_attribute(std::string& slot, const std::string& value,
                     const PartyId& id, std::string_view what,
                     std::size_t row) {
  if (value.empty()) return;
  if (slot.empty()) {
    slot = value;
  } else if (slot != value) {
    throw ValidationError(fmt::format("party '{}' has conflicting {} ('{}' vs "
                                      "'{}')",
                                      id, what, slot, value),
                          row);
  }
}

void check_sector(const RiskTables& tables, const std::string& code,
                  std::size_t row) {
  if (!tables.resolve_sector(code)) {
    throw ValidationError("unresolved sector code '" + code + "'", row);
  }
}

void check_region(const RiskTables& tables, const std::string& region,
                  std::size_t row) {
  if (region != kForeignRegion && !tables.region_indicators.contains(region)) {
    throw ValidationError("unknown region '" + region + "'", row);
  }
}

std::ifstream open_input(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw ValidationError("input file not found: '" + path.string() + "'");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  return in;
}

std::string required(const csv::Row& row, std::size_t pos,
                     std::string_view column) {
  std::string v = csv::trim(row.fields[pos]);
  if (v.empty()) {
    throw ValidationError("missing " + std::string(column), row.number);
  }
  return v;
}

}  // namespace

const Party* Ledger::find_party(std::string_view id) const {
  auto it = std::lower_bound(
      parties.begin(), parties.end(), id,
      [](const Party& p, std::string_view key) { return p.party_id < key; });
  if (it == parties.end() || it->party_id != id) return nullptr;
  return &*it;
}

Ledger parse_ledger(std::istream& in, const RiskTables& tables) {
  csv::Table table;
  try {
    table = csv::read(in);
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("ledger: ") + e.what());
  }
  Ledger ledger;
  if (table.header.empty()) return ledger;
  const auto pos = csv::require_columns(table, kLedgerColumns);

  std::map<PartyId, PartyDraft, std::less<>> drafts;
  std::map<std::string, std::size_t, std::less<>> seen_ids;
  ledger.records.reserve(table.rows.size());

  for (const auto& row : table.rows) {
    if (row.fields.size() != table.header.size()) {
      throw ValidationError(
          fmt::format("malformed row: expected {} fields, found {}",
                      table.header.size(), row.fields.size()),
          row.number);
    }
    auto field = [&](Col c) { return csv::optional_field(row.fields[pos[c]]); };

    TransactionRecord rec;
    rec.txn_id = required(row, pos[kTxn], "txn_id");
    if (auto [it, fresh] = seen_ids.emplace(rec.txn_id, row.number); !fresh) {
      throw ValidationError(fmt::format("duplicate txn_id '{}' (first at row "
                                        "{})",
                                        rec.txn_id, it->second),
                            row.number);
    }
    try {
      rec.timestamp = parse_date(required(row, pos[kTime], "timestamp"));
      rec.amount = parse_amount(required(row, pos[kAmount], "amount"));
    } catch (const ValidationError& e) {
      if (e.row()) throw;
      throw ValidationError(e.what(), row.number);
    }
    rec.seller_id = required(row, pos[kSeller], "seller_id");
    rec.debtor_id = field(kDebtor);
    rec.owner_id = field(kOwner);
    rec.representative_id = field(kRep);
    rec.country = field(kCountry);
    rec.seller_sector = required(row, pos[kSellerSector], "seller_sector");
    rec.seller_region = required(row, pos[kSellerRegion], "seller_region");
    rec.debtor_sector = field(kDebtorSector);
    rec.debtor_region = field(kDebtorRegion);

    check_sector(tables, rec.seller_sector, row.number);
    check_region(tables, rec.seller_region, row.number);
    if (rec.country && (rec.country->size() != 2 ||
                        !std::all_of(rec.country->begin(), rec.country->end(),
                                     [](char c) { return c >= 'A' && c <= 'Z'; }))) {
      throw ValidationError("country must be ISO-3166 alpha-2, got '" +
                                *rec.country + "'",
                            row.number);
    }

    auto& seller = drafts[rec.seller_id];
    seller.is_seller = true;
    merge_attribute(seller.sector, rec.seller_sector, rec.seller_id, "sector",
                    row.number);
    merge_attribute(seller.region, rec.seller_region, rec.seller_id, "region",
                    row.number);

    if (rec.debtor_id) {
      if (!rec.debtor_sector || !rec.debtor_region) {
        throw ValidationError("debtor present but debtor_sector or "
                              "debtor_region missing",
                              row.number);
      }
      if (!rec.country) {
        throw ValidationError("debtor present but country missing",
                              row.number);
      }
      check_sector(tables, *rec.debtor_sector, row.number);
      check_region(tables, *rec.debtor_region, row.number);
      if (*rec.debtor_region == kForeignRegion &&
          !tables.country_indicators.contains(*rec.country)) {
        throw ValidationError("unknown country '" + *rec.country + "'",
                              row.number);
      }
      auto& debtor = drafts[*rec.debtor_id];
      debtor.is_debtor = true;
      merge_attribute(debtor.sector, *rec.debtor_sector, *rec.debtor_id,
                      "sector", row.number);
      merge_attribute(debtor.region, *rec.debtor_region, *rec.debtor_id,
                      "region", row.number);
      merge_attribute(debtor.country, *rec.country, *rec.debtor_id, "country",
                      row.number);
    }
    ledger.records.push_back(std::move(rec));
  }

  ledger.parties.reserve(drafts.size());
  for (auto& [id, d] : drafts) {
    Party p;
    p.party_id = id;
    p.sector_code = d.sector;
    p.region = d.region;
    p.country = d.country;
    if (p.country.empty() && p.region != kForeignRegion) p.country = "IT";
    p.is_seller = d.is_seller;
    p.is_debtor = d.is_debtor;
    ledger.parties.push_back(std::move(p));
  }
  return ledger;
}

Ledger load_ledger(const std::filesystem::path& path,
                   const RiskTables& tables) {
  auto in = open_input(path);
  return parse_ledger(in, tables);
}

void write_ledger_csv(std::ostream& out,
                      std::span<const TransactionRecord> records) {
  out << kLedgerHeader << '\n';
  auto opt = [](const std::optional<std::string>& v) {
    return v ? *v : std::string{};
  };
  for (const auto& r : records) {
    const std::array<std::string, 12> fields{
        r.txn_id,           format_date(r.timestamp), r.seller_id,
        opt(r.debtor_id),   format_amount(r.amount),  opt(r.owner_id),
        opt(r.representative_id), opt(r.country),     r.seller_sector,
        opt(r.debtor_sector), r.seller_region,        opt(r.debtor_region)};
    csv::write_row(out, fields);
  }
}

ThresholdResult apply_recording_threshold(
    std::span<const TransactionRecord> ledger, const RiskTables& tables) {
  const Amount threshold = tables.recording_threshold;
  const auto window = std::chrono::days{tables.aggregation_window_days};

  std::vector<bool> keep(ledger.size(), false);
  std::map<std::pair<std::string_view, std::string_view>,
           std::vector<std::size_t>>
      groups;
  for (std::size_t i = 0; i < ledger.size(); ++i) {
    const auto& r = ledger[i];
    if (r.amount >= threshold) {
      keep[i] = true;
      continue;
    }
    std::string_view debtor = r.debtor_id ? std::string_view(*r.debtor_id)
                                          : std::string_view{};
    groups[{r.seller_id, debtor}].push_back(i);
  }

  for (auto& [key, idx] : groups) {
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return ledger[a].timestamp < ledger[b].timestamp;
    });
    // Any window holding a qualifying set can slide to start at its
    // earliest member, so scanning windows anchored at each record is
    // exhaustive.
    std::size_t end = 0;
    std::size_t marked = 0;
    Amount sum{0};
    for (std::size_t start = 0; start < idx.size(); ++start) {
      if (end < start) {
        end = start;
        sum = Amount{0};
      }
      while (end < idx.size() &&
             ledger[idx[end]].timestamp - ledger[idx[start]].timestamp <
                 window) {
        sum += ledger[idx[end]].amount;
        ++end;
      }
      if (sum >= threshold) {
        for (std::size_t k = std::max(start, marked); k < end; ++k) {
          keep[idx[k]] = true;
        }
        marked = std::max(marked, end);
      }
      sum = Amount{sum.cents - ledger[idx[start]].amount.cents};
    }
  }

  ThresholdResult result;
  for (std::size_t i = 0; i < ledger.size(); ++i) {
    if (keep[i]) {
      result.records.push_back(ledger[i]);
    } else {
      ++result.dropped;
    }
  }
  return result;
}

LabelResult apply_labels(std::istream& in, std::vector<Party> parties) {
  LabelResult result;
  auto table = csv::read(in);
  if (!table.header.empty()) {
    static constexpr std::array<std::string_view, 2> kCols{"party_id",
                                                            "high_risk"};
    const auto pos = csv::require_columns(table, kCols);
    std::map<std::string, std::size_t, std::less<>> seen;
    for (const auto& row : table.rows) {
      if (row.fields.size() != table.header.size()) {
        throw ValidationError("malformed label row", row.number);
      }
      std::string id = csv::trim(row.fields[pos[0]]);
      std::string value = csv::trim(row.fields[pos[1]]);
      if (id.empty()) throw ValidationError("empty party_id", row.number);
      if (value != "0" && value != "1") {
        throw ValidationError("high_risk must be 0 or 1, got '" + value + "'",
                              row.number);
      }
      if (auto [it, fresh] = seen.emplace(id, row.number); !fresh) {
        throw ValidationError(fmt::format("duplicate label for '{}' (first at "
                                          "row {})",
                                          id, it->second),
                              row.number);
      }
      auto it = std::lower_bound(
          parties.begin(), parties.end(), id,
          [](const Party& p, const std::string& key) {
            return p.party_id < key;
          });
      if (it == parties.end() || it->party_id != id) {
        result.warnings.push_back(fmt::format(
            "row {}: label for unknown party '{}' skipped", row.number, id));
        continue;
      }
      it->high_risk_label =
          value == "1" ? RiskLabel::Positive : RiskLabel::Negative;
    }
  }
  result.labeled = static_cast<std::size_t>(
      std::count_if(parties.begin(), parties.end(), [](const Party& p) {
        return p.high_risk_label != RiskLabel::Unknown;
      }));
  result.parties = std::move(parties);
  return result;
}

LabelResult load_labels(const std::filesystem::path& path,
                        std::vector<Party> parties) {
  auto in = open_input(path);
  return apply_labels(in, std::move(parties));
}

void write_parties_csv(std::ostream& out, std::span<const Party> parties) {
  out << "party_id,sector_code,region,country,is_seller,is_debtor,high_risk\n";
  for (const auto& p : parties) {
    std::string label;
    if (p.high_risk_label == RiskLabel::Positive) label = "1";
    if (p.high_risk_label == RiskLabel::Negative) label = "0";
    const std::array<std::string, 7> fields{
        p.party_id, p.sector_code,          p.region,
        p.country,  p.is_seller ? "1" : "0", p.is_debtor ? "1" : "0",
        label};
    csv::write_row(out, fields);
  }
}

std::vector<Party> read_parties_csv(std::istream& in) {
  auto table = csv::read(in);
  std::vector<Party> parties;
  if (table.header.empty()) return parties;
  static constexpr std::array<std::string_view, 7> kCols{
      "party_id", "sector_code", "region", "country",
      "is_seller", "is_debtor",  "high_risk"};
  const auto pos = csv::require_columns(table, kCols);
  for (const auto& row : table.rows) {
    if (row.fields.size() != table.header.size()) {
      throw ValidationError("malformed party row", row.number);
    }
    Party p;
    p.party_id = csv::trim(row.fields[pos[0]]);
    p.sector_code = csv::trim(row.fields[pos[1]]);
    p.region = csv::trim(row.fields[pos[2]]);
    p.country = csv::trim(row.fields[pos[3]]);
    p.is_seller = csv::trim(row.fields[pos[4]]) == "1";
    p.is_debtor = csv::trim(row.fields[pos[5]]) == "1";
    const std::string label = csv::trim(row.fields[pos[6]]);
    if (label == "1") {
      p.high_risk_label = RiskLabel::Positive;
    } else if (label == "0") {
      p.high_risk_label = RiskLabel::Negative;
    } else if (!label.empty()) {
      throw ValidationError("bad high_risk '" + label + "'", row.number);
    }
    parties.push_back(std::move(p));
  }
  std::sort(parties.begin(), parties.end(),
            [](const Party& a, const Party& b) { return a.party_id < b.party_id; });
  return parties;
}

}  // namespace amlnet
