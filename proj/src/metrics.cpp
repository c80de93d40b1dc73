#include "amlnet/metrics.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <queue>

namespace amlnet {

namespace {

// Sources are split into a fixed number of contiguous blocks independent of
// the hardware, and partial results are reduced in block order, so output
// is bit-identical however the blocks are scheduled.
constexpr std::size_t kBlocks = 8;

template <typename Fn>
std::vector<std::vector<double>> run_blocks(std::size_t n, Fn&& per_block) {
  std::vector<std::future<std::vector<double>>> futures;
  const std::size_t blocks = std::min(kBlocks, std::max<std::size_t>(n, 1));
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t lo = n * b / blocks;
    const std::size_t hi = n * (b + 1) / blocks;
    futures.push_back(std::async(n > 64 ? std::launch::async
                                        : std::launch::deferred,
                                 [&, lo, hi] { return per_block(lo, hi); }));
  }
  std::vector<std::vector<double>> parts;
  parts.reserve(futures.size());
  for (auto& f : futures) parts.push_back(f.get());
  return parts;
}

std::vector<std::size_t> component_sizes(
    const std::vector<std::vector<std::size_t>>& adj) {
  const std::size_t n = adj.size();
  std::vector<std::size_t> comp(n, n);
  std::vector<std::size_t> size_of;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] != n) continue;
    const std::size_t id = size_of.size();
    std::size_t count = 0;
    std::vector<std::size_t> stack{s};
    comp[s] = id;
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      ++count;
      for (auto w : adj[v]) {
        if (comp[w] == n) {
          comp[w] = id;
          stack.push_back(w);
        }
      }
    }
    size_of.push_back(count);
  }
  std::vector<std::size_t> out(n);
  for (std::size_t v = 0; v < n; ++v) out[v] = size_of[comp[v]];
  return out;
}

}  // namespace

std::vector<WeightedDegree> weighted_degrees(const RiskNetwork& net) {
  std::vector<WeightedDegree> deg(net.nodes.size());
  for (const auto& a : net.arcs) {
    if (a.tail == a.head) continue;
    if (net.directed) {
      deg[a.tail].out += a.weight;
      deg[a.head].in += a.weight;
    } else {
      deg[a.tail].in += a.weight;
      deg[a.tail].out += a.weight;
      deg[a.head].in += a.weight;
      deg[a.head].out += a.weight;
    }
  }
  for (auto& d : deg) d.all = net.directed ? d.in + d.out : d.in;
  return deg;
}

std::vector<std::vector<std::size_t>> undirected_adjacency(
    const RiskNetwork& net) {
  std::vector<std::vector<std::size_t>> adj(net.nodes.size());
  for (const auto& a : net.arcs) {
    if (a.tail == a.head) continue;
    adj[a.tail].push_back(a.head);
    adj[a.head].push_back(a.tail);
  }
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return adj;
}

std::vector<double> closeness(const RiskNetwork& net) {
  const auto adj = undirected_adjacency(net);
  const std::size_t n = adj.size();
  auto parts = run_blocks(n, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> out(hi - lo, 0.0);
    std::vector<std::size_t> dist(n);
    std::queue<std::size_t> queue;
    for (std::size_t s = lo; s < hi; ++s) {
      std::fill(dist.begin(), dist.end(), n);
      dist[s] = 0;
      queue.push(s);
      std::size_t reached = 0;
      std::size_t total = 0;
      while (!queue.empty()) {
        auto v = queue.front();
        queue.pop();
        ++reached;
        total += dist[v];
        for (auto w : adj[v]) {
          if (dist[w] == n) {
            dist[w] = dist[v] + 1;
            queue.push(w);
          }
        }
      }
      if (reached >= 2) {
        out[s - lo] = static_cast<double>(reached - 1) /
                      static_cast<double>(total);
      }
    }
    return out;
  });
  std::vector<double> result;
  result.reserve(n);
  for (auto& p : parts) result.insert(result.end(), p.begin(), p.end());
  return result;
}

std::vector<double> betweenness(const RiskNetwork& net) {
  const auto adj = undirected_adjacency(net);
  const std::size_t n = adj.size();
  auto parts = run_blocks(n, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> cb(n, 0.0);
    std::vector<std::size_t> dist(n);
    std::vector<double> sigma(n);
    std::vector<double> delta(n);
    std::vector<std::size_t> order;
    order.reserve(n);
    std::queue<std::size_t> queue;
    for (std::size_t s = lo; s < hi; ++s) {
      std::fill(dist.begin(), dist.end(), n);
      std::fill(sigma.begin(), sigma.end(), 0.0);
      std::fill(delta.begin(), delta.end(), 0.0);
      order.clear();
      dist[s] = 0;
      sigma[s] = 1.0;
      queue.push(s);
      while (!queue.empty()) {
        auto v = queue.front();
        queue.pop();
        order.push_back(v);
        for (auto w : adj[v]) {
          if (dist[w] == n) {
            dist[w] = dist[v] + 1;
            queue.push(w);
          }
          if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
        }
      }
      // Dependency accumulation in reverse BFS order; predecessors of w
      // are its neighbours one hop closer to s.
      for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const auto w = *it;
        for (auto v : adj[w]) {
          if (dist[v] + 1 == dist[w]) {
            delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
          }
        }
        if (w != s) cb[w] += delta[w];
      }
    }
    return cb;
  });
  std::vector<double> cb(n, 0.0);
  for (const auto& p : parts) {
    for (std::size_t v = 0; v < n; ++v) cb[v] += p[v];
  }
  const auto sizes = component_sizes(adj);
  for (std::size_t v = 0; v < n; ++v) {
    const double nc = static_cast<double>(sizes[v]);
    if (sizes[v] < 3) {
      cb[v] = 0.0;
      continue;
    }
    // Each unordered pair was counted from both endpoints.
    cb[v] = (cb[v] / 2.0) / ((nc - 1.0) * (nc - 2.0) / 2.0);
  }
  return cb;
}

std::vector<double> network_constraint(const RiskNetwork& net) {
  const std::size_t n = net.nodes.size();
  std::vector<std::map<std::size_t, double>> tie(n);
  for (const auto& a : net.arcs) {
    if (a.tail == a.head) continue;
    tie[a.tail][a.head] += a.weight;
    tie[a.head][a.tail] += a.weight;
  }
  // Proportional tie strengths p_ij.
  std::vector<std::map<std::size_t, double>> p(n);
  for (std::size_t i = 0; i < n; ++i) {
    double total = 0.0;
    for (const auto& [j, w] : tie[i]) total += w;
    if (total <= 0.0) continue;
    for (const auto& [j, w] : tie[i]) p[i][j] = w / total;
  }
  std::vector<double> constraint(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double c = 0.0;
    for (const auto& [j, pij] : p[i]) {
      double indirect = 0.0;
      for (const auto& [q, piq] : p[i]) {
        if (q == j) continue;
        auto it = p[q].find(j);
        if (it != p[q].end()) indirect += piq * it->second;
      }
      const double term = pij + indirect;
      c += term * term;
    }
    constraint[i] = c;
  }
  return constraint;
}

std::map<PartyId, std::size_t, std::less<>> missing_id(
    std::span<const TransactionRecord> records) {
  std::map<PartyId, std::size_t, std::less<>> counts;
  for (const auto& r : records) {
    auto& slot = counts[r.seller_id];
    if (!r.owner_id || !r.representative_id || !r.debtor_id) ++slot;
  }
  return counts;
}

std::vector<NodeMetrics> compute_metrics(const RiskNetwork& net) {
  const auto deg = weighted_degrees(net);
  const auto close = closeness(net);
  const auto between = betweenness(net);
  const auto constr = network_constraint(net);
  std::vector<NodeMetrics> out(net.nodes.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = {deg[i].in,  deg[i].out,  deg[i].all,
              close[i],   between[i],  constr[i]};
  }
  return out;
}

}  // namespace amlnet
