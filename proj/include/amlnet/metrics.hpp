#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "amlnet/ingestion.hpp"
#include "amlnet/network.hpp"

namespace amlnet {

struct WeightedDegree {
  double in = 0.0;
  double out = 0.0;
  double all = 0.0;
};

/// Per-node vectors below are indexed like RiskNetwork::nodes.
std::vector<WeightedDegree> weighted_degrees(const RiskNetwork& net);

/// Symmetrized simple adjacency (loops dropped, neighbours sorted).
std::vector<std::vector<std::size_t>> undirected_adjacency(
    const RiskNetwork& net);

/// Component-standardized closeness on hop distances:
/// (n_c - 1) / sum of distances within the component. Isolates get 0.
std::vector<double> closeness(const RiskNetwork& net);

/// Brandes betweenness on the symmetrized graph over unordered pairs,
/// divided by (n_c - 1)(n_c - 2) / 2. Components with fewer than three
/// nodes get 0.
std::vector<double> betweenness(const RiskNetwork& net);

/// Burt's network constraint on symmetrized weights. Isolates get 0.
std::vector<double> network_constraint(const RiskNetwork& net);

/// Per seller: number of records with a MISSING owner, representative, or
/// debtor (one count per record).
std::map<PartyId, std::size_t, std::less<>> missing_id(
    std::span<const TransactionRecord> records);

struct NodeMetrics {
  double in_degree = 0.0;
  double out_degree = 0.0;
  double all_degree = 0.0;
  double closeness = 0.0;
  double betweenness = 0.0;
  double constraint = 0.0;
};

std::vector<NodeMetrics> compute_metrics(const RiskNetwork& net);

}  // namespace amlnet
