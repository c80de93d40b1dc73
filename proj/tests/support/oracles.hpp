#pragma once

// Brute-force reference computations for graphs of a dozen nodes or so.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "amlnet/network.hpp"
#include "amlnet/rng.hpp"

namespace oracle {

using amlnet::RiskNetwork;

inline constexpr int kInf = std::numeric_limits<int>::max() / 4;

/// Random network with optional parallel arcs; node ids N00, N01, ...
inline RiskNetwork random_network(amlnet::Rng& rng, std::size_t n, double p,
                                  bool directed = true,
                                  bool parallel = false) {
  RiskNetwork net;
  net.directed = directed;
  net.finalized = true;
  net.kind = directed ? amlnet::NetworkKind::Transactions
                      : amlnet::NetworkKind::Tacit;
  for (std::size_t i = 0; i < n; ++i) {
    net.nodes.push_back(fmt::format("N{:02d}", i));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = directed ? 0 : i + 1; j < n; ++j) {
      if (i == j || !rng.bernoulli(p)) continue;
      const int copies = parallel ? 1 + static_cast<int>(rng.below(3)) : 1;
      for (int c = 0; c < copies; ++c) {
        net.arcs.push_back({i, j, 1.0 + static_cast<double>(rng.below(3))});
      }
    }
  }
  return net;
}

/// Symmetric 0/1 adjacency matrix ignoring direction and multiplicity.
inline std::vector<std::vector<bool>> adjacency(const RiskNetwork& net) {
  const auto n = net.nodes.size();
  std::vector<std::vector<bool>> a(n, std::vector<bool>(n, false));
  for (const auto& arc : net.arcs) {
    if (arc.tail == arc.head) continue;
    a[arc.tail][arc.head] = a[arc.head][arc.tail] = true;
  }
  return a;
}

/// Floyd-Warshall hop distances.
inline std::vector<std::vector<int>> distances(const RiskNetwork& net) {
  const auto a = adjacency(net);
  const auto n = a.size();
  std::vector<std::vector<int>> d(n, std::vector<int>(n, kInf));
  for (std::size_t i = 0; i < n; ++i) {
    d[i][i] = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (a[i][j]) d[i][j] = 1;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
      }
    }
  }
  return d;
}

inline std::vector<double> closeness(const RiskNetwork& net) {
  const auto d = distances(net);
  const auto n = d.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    int reach = 0;
    long total = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && d[i][j] < kInf) {
        ++reach;
        total += d[i][j];
      }
    }
    if (reach > 0) out[i] = static_cast<double>(reach) / total;
  }
  return out;
}

/// Lists every shortest path between s and t as a node sequence.
inline std::vector<std::vector<std::size_t>> shortest_paths(
    const std::vector<std::vector<bool>>& a,
    const std::vector<std::vector<int>>& d, std::size_t s, std::size_t t) {
  std::vector<std::vector<std::size_t>> paths;
  if (d[s][t] >= kInf) return paths;
  std::vector<std::size_t> path{s};
  std::function<void(std::size_t)> walk = [&](std::size_t v) {
    if (v == t) {
      paths.push_back(path);
      return;
    }
    for (std::size_t w = 0; w < a.size(); ++w) {
      if (a[v][w] && d[s][w] == d[s][v] + 1 && d[w][t] == d[v][t] - 1) {
        path.push_back(w);
        walk(w);
        path.pop_back();
      }
    }
  };
  walk(s);
  return paths;
}

inline std::vector<double> betweenness(const RiskNetwork& net) {
  const auto a = adjacency(net);
  const auto d = distances(net);
  const auto n = a.size();
  std::vector<double> raw(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = s + 1; t < n; ++t) {
      const auto paths = shortest_paths(a, d, s, t);
      if (paths.empty()) continue;
      std::vector<int> through(n, 0);
      for (const auto& p : paths) {
        for (std::size_t k = 1; k + 1 < p.size(); ++k) ++through[p[k]];
      }
      for (std::size_t i = 0; i < n; ++i) {
        raw[i] += static_cast<double>(through[i]) /
                  static_cast<double>(paths.size());
      }
    }
  }
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t comp = 0;
    for (std::size_t j = 0; j < n; ++j) comp += d[i][j] < kInf ? 1 : 0;
    if (comp < 3) continue;
    const double pairs = static_cast<double>((comp - 1) * (comp - 2)) / 2.0;
    out[i] = raw[i] / pairs;
  }
  return out;
}

/// Burt constraint from the dense symmetrized weight matrix.
inline std::vector<double> constraint(const RiskNetwork& net) {
  const auto n = net.nodes.size();
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  for (const auto& arc : net.arcs) {
    if (arc.tail == arc.head) continue;
    w[arc.tail][arc.head] += arc.weight;
    w[arc.head][arc.tail] += arc.weight;
  }
  std::vector<std::vector<double>> p(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) total += w[i][j];
    if (total <= 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) p[i][j] = w[i][j] / total;
  }
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || w[i][j] <= 0.0) continue;
      double indirect = 0.0;
      for (std::size_t q = 0; q < n; ++q) {
        if (q == i || q == j) continue;
        indirect += p[i][q] * p[q][j];
      }
      const double term = p[i][j] + indirect;
      out[i] += term * term;
    }
  }
  return out;
}

/// Unflagged nodes that reach at least one flagged node.
inline std::set<std::string> alert_set(const RiskNetwork& net,
                                       const std::set<std::string>& flags) {
  const auto d = distances(net);
  std::set<std::string> out;
  for (std::size_t v = 0; v < d.size(); ++v) {
    if (flags.count(net.nodes[v])) continue;
    for (std::size_t f = 0; f < d.size(); ++f) {
      if (f != v && d[v][f] < kInf && flags.count(net.nodes[f])) {
        out.insert(net.nodes[v]);
        break;
      }
    }
  }
  return out;
}

/// Percentile bucket by sorting: position of the first equal value.
inline int percentile_bucket(double value, std::vector<double> population) {
  std::sort(population.begin(), population.end());
  const auto first =
      std::lower_bound(population.begin(), population.end(), value);
  const double rank = static_cast<double>(first - population.begin()) + 1.0;
  const double pct = rank / static_cast<double>(population.size());
  if (pct <= 0.3) return 1;
  if (pct <= 0.7) return 2;
  return 3;
}

}  // namespace oracle
