#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "amlnet/ingestion.hpp"
#include "amlnet/risk_scoring.hpp"

namespace amlnet {

enum class NetworkKind { Transactions, Sector, Geo, Tacit };

std::string_view to_string(NetworkKind kind);

enum class Collapse { None, Mean, Sum, Max };

Collapse parse_collapse(std::string_view text);
ArcCombine parse_arc_combine(std::string_view text);
std::string_view to_string(Collapse mode);
std::string_view to_string(ArcCombine mode);

struct Arc {
  std::size_t tail = 0;
  std::size_t head = 0;
  double weight = 0.0;

  friend bool operator==(const Arc&, const Arc&) = default;
};

/// Weighted (multi)graph over parties. Nodes are sorted party ids; arcs
/// refer to node indices. In directed networks tail = debtor and
/// head = seller. Undirected networks store each edge once with tail < head.
struct RiskNetwork {
  NetworkKind kind = NetworkKind::Transactions;
  bool directed = true;
  bool finalized = false;
  std::vector<PartyId> nodes;
  std::vector<Arc> arcs;

  std::optional<std::size_t> index_of(std::string_view party_id) const;
  std::size_t loop_count() const;
  double total_weight() const;
};

/// One arc per record weighted by its amount bin. MISSING-debtor records
/// become self-loops on the seller.
RiskNetwork build_transactions_network(const Ledger& ledger,
                                       const RiskTables& tables);

/// Same topology as the transactions network; arcs are weighted by the
/// combined node score of their endpoints (sector or geo). Not finalized.
RiskNetwork build_attribute_network(const Ledger& ledger,
                                    const RiskScorer& scorer, NetworkKind kind,
                                    ArcCombine combine = ArcCombine::Mean);

/// Removes loops and, unless `collapse` is None, merges parallel arcs per
/// ordered pair. Collapsed arcs come out sorted by (tail, head).
RiskNetwork finalize_network(const RiskNetwork& net, Collapse collapse);

/// Keeps arcs with weight >= threshold. Every node is retained. Throws
/// ValidationError for a non-finite threshold.
RiskNetwork filter_high_risk(const RiskNetwork& net, double threshold);

/// Undirected simple graph linking sellers that share an owner_id or a
/// representative_id on any of their records.
RiskNetwork build_tacit_network(const Ledger& ledger);

struct ExportOptions {
  std::span<const Party> parties;  // node attributes, optional
  const std::set<PartyId>* flagged = nullptr;
};

/// Deterministic GraphML: nodes in id order, arcs sorted by
/// (tail, head, weight).
void write_graphml(std::ostream& out, const RiskNetwork& net,
                   const ExportOptions& options = {});
void write_dot(std::ostream& out, const RiskNetwork& net);

}  // namespace amlnet
