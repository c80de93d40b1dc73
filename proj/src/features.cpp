#include "amlnet/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "amlnet/error.hpp"
#include "csv.hpp"

namespace amlnet {

namespace {

double metric(const NodeMetrics& m, std::size_t which) {
  switch (which) {
    case 0: return m.in_degree;
    case 1: return m.out_degree;
    case 2: return m.all_degree;
    case 3: return m.closeness;
    case 4: return m.betweenness;
    default: return m.constraint;
  }
}

void set_metric(NodeMetrics& m, std::size_t which, double v) {
  switch (which) {
    case 0: m.in_degree = v; break;
    case 1: m.out_degree = v; break;
    case 2: m.all_degree = v; break;
    case 3: m.closeness = v; break;
    case 4: m.betweenness = v; break;
    default: m.constraint = v; break;
  }
}

std::vector<NodeMetrics> metrics_for(const RiskNetwork& net,
                                     const Ledger& ledger) {
  const auto computed = compute_metrics(net);
  std::vector<NodeMetrics> out(ledger.parties.size());
  for (std::size_t i = 0; i < ledger.parties.size(); ++i) {
    if (auto idx = net.index_of(ledger.parties[i].party_id)) {
      out[i] = computed[*idx];
    }
  }
  return out;
}

}  // namespace

std::optional<std::size_t> feature_index(std::string_view name) {
  auto it = std::find(kFeatureColumns.begin(), kFeatureColumns.end(), name);
  if (it == kFeatureColumns.end()) return std::nullopt;
  return static_cast<std::size_t>(it - kFeatureColumns.begin());
}

double ClientFeatureRow::value(std::size_t index) const {
  if (index == 0) {
    if (high_risk_label == RiskLabel::Unknown) {
      return std::numeric_limits<double>::quiet_NaN();
    }
    return high_risk_label == RiskLabel::Positive ? 1.0 : 0.0;
  }
  if (index == 1) return missing_id;
  if (index < 8) return metric(geo, index - 2);
  if (index < 14) return metric(transactions, index - 8);
  if (index < kFeatureCount) return metric(sector, index - 14);
  throw std::out_of_range("feature index");
}

double ClientFeatureRow::value(std::string_view name) const {
  auto idx = feature_index(name);
  if (!idx) {
    throw ValidationError("unknown feature column '" + std::string(name) + "'");
  }
  return value(*idx);
}

std::vector<ClientFeatureRow> assemble_features(const AnalyticNetworks& nets,
                                                const Ledger& ledger) {
  const auto geo = metrics_for(nets.geo, ledger);
  const auto txn = metrics_for(nets.transactions, ledger);
  const auto sec = metrics_for(nets.sector, ledger);
  const auto missing = missing_id(ledger.records);

  std::vector<ClientFeatureRow> rows(ledger.parties.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& p = ledger.parties[i];
    auto& row = rows[i];
    row.party_id = p.party_id;
    row.high_risk_label = p.high_risk_label;
    if (auto it = missing.find(p.party_id); it != missing.end()) {
      row.missing_id = static_cast<double>(it->second);
    }
    row.geo = geo[i];
    row.transactions = txn[i];
    row.sector = sec[i];
  }
  return rows;
}

void write_features_csv(std::ostream& out,
                        std::span<const ClientFeatureRow> rows) {
  out << "party_id";
  for (auto c : kFeatureColumns) out << ',' << c;
  out << '\n';
  for (const auto& row : rows) {
    csv::write_field(out, row.party_id);
    out << ',';
    if (row.high_risk_label != RiskLabel::Unknown) {
      out << (row.high_risk_label == RiskLabel::Positive ? '1' : '0');
    }
    for (std::size_t c = 1; c < kFeatureCount; ++c) {
      out << fmt::format(",{}", row.value(c));
    }
    out << '\n';
  }
}

std::vector<ClientFeatureRow> read_features_csv(std::istream& in) {
  auto table = csv::read(in);
  std::vector<ClientFeatureRow> rows;
  if (table.header.empty()) return rows;
  std::vector<std::string_view> names{"party_id"};
  names.insert(names.end(), kFeatureColumns.begin(), kFeatureColumns.end());
  const auto pos = csv::require_columns(table, names);
  for (const auto& r : table.rows) {
    if (r.fields.size() != table.header.size()) {
      throw ValidationError("malformed feature row", r.number);
    }
    ClientFeatureRow row;
    row.party_id = csv::trim(r.fields[pos[0]]);
    const std::string label = csv::trim(r.fields[pos[1]]);
    if (label == "1") {
      row.high_risk_label = RiskLabel::Positive;
    } else if (label == "0") {
      row.high_risk_label = RiskLabel::Negative;
    } else if (!label.empty()) {
      throw ValidationError("bad high_risk '" + label + "'", r.number);
    }
    for (std::size_t c = 1; c < kFeatureCount; ++c) {
      const std::string text = csv::trim(r.fields[pos[c + 1]]);
      double v = 0.0;
      auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (text.empty() || ec != std::errc{} || p != text.data() + text.size()) {
        throw ValidationError(fmt::format("column '{}': not a number '{}'",
                                          kFeatureColumns[c], text),
                              r.number);
      }
      if (c == 1) {
        row.missing_id = v;
      } else if (c < 8) {
        set_metric(row.geo, c - 2, v);
      } else if (c < 14) {
        set_metric(row.transactions, c - 8, v);
      } else {
        set_metric(row.sector, c - 14, v);
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace amlnet
