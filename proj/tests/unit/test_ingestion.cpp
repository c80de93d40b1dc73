#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "amlnet/error.hpp"
#include "amlnet/ingestion.hpp"
#include "amlnet/rng.hpp"
#include "support/fixtures.hpp"

using namespace amlnet;
using fixture::Row;

namespace {

TransactionRecord record(std::string id, std::string date, std::string seller,
                         std::optional<std::string> debtor, Amount amount) {
  TransactionRecord r;
  r.txn_id = std::move(id);
  r.timestamp = parse_date(date);
  r.seller_id = std::move(seller);
  r.debtor_id = std::move(debtor);
  r.amount = amount;
  r.seller_sector = "textiles";
  r.seller_region = "Lombardia";
  return r;
}

std::set<std::string> ids(const std::vector<TransactionRecord>& records) {
  std::set<std::string> out;
  for (const auto& r : records) out.insert(r.txn_id);
  return out;
}

// Keeps a sub-threshold record when some window starting at a group member
// covers it and sums to the threshold.
std::set<std::string> threshold_oracle(
    const std::vector<TransactionRecord>& records, Amount threshold,
    int window) {
  std::set<std::string> kept;
  for (const auto& x : records) {
    if (x.amount >= threshold) {
      kept.insert(x.txn_id);
      continue;
    }
    auto same_pair = [&](const TransactionRecord& r) {
      return r.amount < threshold && r.seller_id == x.seller_id &&
             r.debtor_id == x.debtor_id;
    };
    for (const auto& anchor : records) {
      if (!same_pair(anchor)) continue;
      const auto lo = anchor.timestamp;
      const auto hi = anchor.timestamp + std::chrono::days{window};
      if (x.timestamp < lo || x.timestamp >= hi) continue;
      std::int64_t sum = 0;
      for (const auto& r : records) {
        if (same_pair(r) && r.timestamp >= lo && r.timestamp < hi) {
          sum += r.amount.cents;
        }
      }
      if (sum >= threshold.cents) {
        kept.insert(x.txn_id);
        break;
      }
    }
  }
  return kept;
}

}  // namespace

TEST_CASE("amounts parse in euros and cents") {
  CHECK(parse_amount("16000").cents == 1'600'000);
  CHECK(parse_amount("16000.5").cents == 1'600'050);
  CHECK(parse_amount("16000.50 EUR").cents == 1'600'050);
  CHECK(parse_amount("0.01").cents == 1);
  CHECK_THROWS_AS(parse_amount("-5"), ValidationError);
  CHECK_THROWS_AS(parse_amount("0"), ValidationError);
  CHECK_THROWS_AS(parse_amount("100 USD"), ValidationError);
  CHECK_THROWS_AS(parse_amount("1.234"), ValidationError);
  CHECK_THROWS_AS(parse_amount("abc"), ValidationError);
  CHECK(format_amount(parse_amount("249999.9")) == "249999.90");
}

TEST_CASE("dates are ISO calendar dates") {
  CHECK(format_date(parse_date("2014-02-28")) == "2014-02-28");
  CHECK_THROWS_AS(parse_date("2014-02-30"), ValidationError);
  CHECK_THROWS_AS(parse_date("28/02/2014"), ValidationError);
}

TEST_CASE("a party in both roles is one party") {
  const auto l = fixture::ledger({{.txn_id = "T1", .seller = "A", .debtor = "B"},
                                  {.txn_id = "T2", .seller = "C", .debtor = "A",
                                   .debtor_sector = "construction"},
                                  {.txn_id = "T3", .seller = "C", .debtor = "B"}});
  REQUIRE(l.parties.size() == 3);
  const auto* a = l.find_party("A");
  REQUIRE(a != nullptr);
  CHECK(a->is_seller);
  CHECK(a->is_debtor);
  CHECK(l.find_party("B")->is_seller == false);
}

TEST_CASE("empty input yields an empty ledger") {
  std::istringstream empty("");
  const auto l = parse_ledger(empty, RiskTables::defaults());
  CHECK(l.records.empty());
  CHECK(l.parties.empty());
  std::istringstream header_only(std::string(kLedgerHeader) + "\n");
  CHECK(parse_ledger(header_only, RiskTables::defaults()).records.empty());
}

TEST_CASE("blank cells are MISSING") {
  const auto l = fixture::ledger({{.txn_id = "T1",
                                   .debtor = "",
                                   .owner = "",
                                   .rep = "",
                                   .country = "",
                                   .debtor_sector = "",
                                   .debtor_region = ""}});
  REQUIRE(l.records.size() == 1);
  const auto& r = l.records[0];
  CHECK_FALSE(r.debtor_id.has_value());
  CHECK_FALSE(r.owner_id.has_value());
  CHECK_FALSE(r.representative_id.has_value());
  CHECK(l.parties.size() == 1);
}

// Rows are numbered from the first data line.
TEST_CASE("validation errors carry the row number") {
  auto row_of = [](const std::vector<Row>& rows) -> std::optional<std::size_t> {
    try {
      fixture::ledger(rows);
    } catch (const ValidationError& e) {
      return e.row();
    }
    return std::nullopt;
  };
  CHECK(row_of({{.txn_id = "T1"}, {.txn_id = "T2", .amount = "-10"}}) == 2u);
  CHECK(row_of({{.txn_id = "T1"}, {.txn_id = "T1"}}) == 2u);
  CHECK(row_of({{.txn_id = "T1", .amount = "20000 USD"}}) == 1u);
  CHECK(row_of({{.txn_id = "T1", .seller = ""}}) == 1u);
  CHECK(row_of({{.txn_id = "T1", .date = "yesterday"}}) == 1u);
  CHECK(row_of({{.txn_id = "T1", .seller_region = "Atlantis"}}) == 1u);

  std::istringstream ragged(std::string(kLedgerHeader) + "\nT1,2014-01-01,S\n");
  try {
    parse_ledger(ragged, RiskTables::defaults());
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(e.row() == 1u);
    CHECK(std::string(e.what()).find("row 1") != std::string::npos);
  }
}

TEST_CASE("unresolved sector codes fail without a wildcard row") {
  auto tables = RiskTables::defaults();
  CHECK_NOTHROW(fixture::ledger({{.txn_id = "T1", .seller_sector = "bakery"}},
                                tables));
  tables.default_sector_class.reset();
  CHECK_THROWS_AS(
      fixture::ledger({{.txn_id = "T1", .seller_sector = "bakery"}}, tables),
      ValidationError);
}

TEST_CASE("foreign debtors need a known country") {
  CHECK_NOTHROW(fixture::ledger({{.txn_id = "T1",
                                  .country = "CH",
                                  .debtor_region = "FOREIGN"}}));
  CHECK_THROWS_AS(fixture::ledger({{.txn_id = "T1",
                                    .country = "XX",
                                    .debtor_region = "FOREIGN"}}),
                  ValidationError);
}

TEST_CASE("conflicting party attributes are rejected") {
  CHECK_THROWS_AS(
      fixture::ledger({{.txn_id = "T1", .seller = "A", .seller_region = "Lazio"},
                       {.txn_id = "T2", .seller = "A"}}),
      ValidationError);
}

TEST_CASE("ledger CSV round-trips") {
  const auto l = fixture::ledger({{.txn_id = "T1"},
                                  {.txn_id = "T2", .debtor = "", .country = "",
                                   .debtor_sector = "", .debtor_region = ""},
                                  {.txn_id = "T3", .amount = "15000.25"}});
  std::ostringstream out;
  write_ledger_csv(out, l.records);
  std::istringstream in(out.str());
  CHECK(parse_ledger(in, RiskTables::defaults()).records == l.records);
}

TEST_CASE("recording threshold keeps large records and smurfed pairs") {
  const auto tables = RiskTables::defaults();
  const std::vector<TransactionRecord> records{
      record("big", "2014-01-01", "S", "D", Amount::from_euros(16'000)),
      record("a", "2014-01-01", "S2", "D", Amount::from_euros(8'000)),
      record("b", "2014-01-04", "S2", "D", Amount::from_euros(9'000)),
      record("lone", "2014-01-01", "S3", "D", Amount::from_euros(5'000))};
  const auto result = apply_recording_threshold(records, tables);
  CHECK(ids(result.records) == std::set<std::string>{"big", "a", "b"});
  CHECK(result.dropped == 1);
}

TEST_CASE("aggregation is per ordered pair and bounded by the window") {
  const auto tables = RiskTables::defaults();
  SUBCASE("reverse direction is a different pair") {
    const std::vector<TransactionRecord> records{
        record("a", "2014-01-01", "S", "D", Amount::from_euros(8'000)),
        record("b", "2014-01-02", "D", "S", Amount::from_euros(9'000))};
    CHECK(apply_recording_threshold(records, tables).records.empty());
  }
  SUBCASE("window edge") {
    const std::vector<TransactionRecord> inside{
        record("a", "2014-01-01", "S", "D", Amount::from_euros(8'000)),
        record("b", "2014-01-30", "S", "D", Amount::from_euros(9'000))};
    CHECK(apply_recording_threshold(inside, tables).records.size() == 2);
    const std::vector<TransactionRecord> outside{
        record("a", "2014-01-01", "S", "D", Amount::from_euros(8'000)),
        record("b", "2014-01-31", "S", "D", Amount::from_euros(9'000))};
    CHECK(apply_recording_threshold(outside, tables).records.empty());
  }
  SUBCASE("exact threshold aggregate") {
    const std::vector<TransactionRecord> records{
        record("a", "2014-01-01", "S", "D", Amount::from_euros(7'500)),
        record("b", "2014-01-02", "S", "D", Amount::from_euros(7'500))};
    CHECK(apply_recording_threshold(records, tables).records.size() == 2);
  }
  SUBCASE("missing debtors aggregate per seller") {
    const std::vector<TransactionRecord> records{
        record("a", "2014-01-01", "S", std::nullopt, Amount::from_euros(8'000)),
        record("b", "2014-01-02", "S", std::nullopt, Amount::from_euros(9'000)),
        record("c", "2014-01-02", "S", "D", Amount::from_euros(9'000))};
    CHECK(ids(apply_recording_threshold(records, tables).records) ==
          std::set<std::string>{"a", "b"});
  }
}

TEST_CASE("recording threshold matches a brute-force window oracle") {
  Rng rng(2024);
  auto tables = RiskTables::defaults();
  for (int trial = 0; trial < 200; ++trial) {
    tables.aggregation_window_days = 1 + static_cast<int>(rng.below(40));
    std::vector<TransactionRecord> records;
    const auto n = 1 + rng.below(25);
    for (std::size_t i = 0; i < n; ++i) {
      const std::string seller = rng.bernoulli(0.5) ? "S1" : "S2";
      std::optional<std::string> debtor;
      if (!rng.bernoulli(0.2)) debtor = rng.bernoulli(0.5) ? "D1" : "D2";
      const auto date =
          parse_date("2014-01-01") + std::chrono::days{rng.below(90)};
      records.push_back(record(fmt::format("T{}", i), format_date(date), seller,
                               debtor,
                               Amount{static_cast<std::int64_t>(
                                   100 + rng.below(1'800'000))}));
    }
    const auto result = apply_recording_threshold(records, tables);
    const auto expected = threshold_oracle(records, tables.recording_threshold,
                                           tables.aggregation_window_days);
    REQUIRE(ids(result.records) == expected);
    CHECK(result.dropped == records.size() - expected.size());

    // Idempotent, order-preserving, and records pass through unchanged.
    const auto again = apply_recording_threshold(result.records, tables);
    CHECK(again.records == result.records);
    CHECK(again.dropped == 0);
    std::size_t pos = 0;
    for (const auto& r : records) {
      if (pos < result.records.size() && result.records[pos] == r) ++pos;
    }
    CHECK(pos == result.records.size());
  }
}

TEST_CASE("labels update parties and report unknown ids") {
  std::vector<Party> parties;
  for (int i = 0; i < 559; ++i) {
    Party p;
    p.party_id = fmt::format("P{:04d}", i);
    parties.push_back(p);
  }
  std::ostringstream labels;
  labels << kLabelsHeader << '\n';
  for (int i = 0; i < 288; ++i) {
    labels << fmt::format("P{:04d},{}\n", i * 559 / 288, i % 5 == 0 ? 1 : 0);
  }
  labels << "NOBODY,1\n";
  std::istringstream in(labels.str());
  const auto result = apply_labels(in, parties);
  CHECK(result.labeled == 288);
  CHECK(std::count_if(result.parties.begin(), result.parties.end(),
                      [](const Party& p) {
                        return p.high_risk_label == RiskLabel::Unknown;
                      }) == 271);
  REQUIRE(result.warnings.size() == 1);
  CHECK(result.warnings[0].find("NOBODY") != std::string::npos);

  std::istringstream empty("");
  const auto none = apply_labels(empty, parties);
  CHECK(none.labeled == 0);
  CHECK(none.parties == parties);

  std::istringstream bad(std::string(kLabelsHeader) + "\nP0001,0\nP0002,2\n");
  try {
    apply_labels(bad, parties);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(e.row() == 2u);
  }
}

TEST_CASE("party count never exceeds distinct identifiers") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Row> rows;
    std::set<std::string> seen;
    const auto n = 1 + rng.below(20);
    for (std::size_t i = 0; i < n; ++i) {
      Row r{.txn_id = fmt::format("T{}", i)};
      r.seller = fmt::format("P{}", rng.below(8));
      r.debtor = fmt::format("P{}", rng.below(8));
      r.seller_sector = r.debtor_sector = "textiles";
      seen.insert(r.seller);
      seen.insert(r.debtor);
      rows.push_back(r);
    }
    CHECK(fixture::ledger(rows).parties.size() == seen.size());
  }
}

TEST_CASE("party table round-trips") {
  auto l = fixture::ledger({{.txn_id = "T1", .seller = "A", .debtor = "B"}});
  l.parties[0].high_risk_label = RiskLabel::Positive;
  std::ostringstream out;
  write_parties_csv(out, l.parties);
  std::istringstream in(out.str());
  CHECK(read_parties_csv(in) == l.parties);
}
