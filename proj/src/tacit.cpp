#include "amlnet/tacit.hpp"

#include <algorithm>
#include <numeric>

#include "amlnet/metrics.hpp"
#include "csv.hpp"

namespace amlnet {

std::vector<TacitComponent> components(const RiskNetwork& tacit,
                                       const std::set<PartyId>& flags) {
  const auto adj = undirected_adjacency(tacit);
  const std::size_t n = adj.size();
  std::vector<bool> seen(n, false);
  std::vector<TacitComponent> out;
  // Node ids are sorted, so scanning in index order meets each component
  // at its smallest member first.
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s] || adj[s].empty()) continue;
    TacitComponent comp;
    std::vector<std::size_t> stack{s};
    std::vector<std::size_t> members;
    seen[s] = true;
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      members.push_back(v);
      for (auto w : adj[v]) {
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    std::sort(members.begin(), members.end());
    for (auto v : members) {
      comp.members.push_back(tacit.nodes[v]);
      if (flags.contains(tacit.nodes[v])) {
        comp.flagged_members.push_back(tacit.nodes[v]);
      }
    }
    comp.component_id = static_cast<int>(out.size()) + 1;
    comp.alert_level = !comp.flagged_members.empty() &&
                               comp.members.size() > comp.flagged_members.size()
                           ? AlertLevel::Watch
                           : AlertLevel::None;
    out.push_back(std::move(comp));
  }
  return out;
}

std::vector<Alert> propagate_alerts(std::span<const TacitComponent> comps,
                                    const std::set<PartyId>& flags) {
  std::vector<Alert> alerts;
  for (const auto& c : comps) {
    std::vector<PartyId> flagged;
    for (const auto& m : c.members) {
      if (flags.contains(m)) flagged.push_back(m);
    }
    if (flagged.empty()) continue;
    for (const auto& m : c.members) {
      if (flags.contains(m)) continue;
      alerts.push_back({m, c.component_id, flagged});
    }
  }
  return alerts;
}

void write_alerts_csv(std::ostream& out, std::span<const Alert> alerts) {
  out << "party_id,component_id,reason_members\n";
  for (const auto& a : alerts) {
    std::string reason;
    for (const auto& m : a.reason_members) {
      reason += (reason.empty() ? "" : ";") + m;
    }
    csv::write_field(out, a.party_id);
    out << ',' << a.component_id << ',';
    csv::write_field(out, reason);
    out << '\n';
  }
}

void write_components_csv(std::ostream& out,
                          std::span<const TacitComponent> comps) {
  out << "component_id,size,flagged,alert_level,members\n";
  for (const auto& c : comps) {
    std::string members;
    for (const auto& m : c.members) members += (members.empty() ? "" : ";") + m;
    out << c.component_id << ',' << c.members.size() << ','
        << c.flagged_members.size() << ','
        << (c.alert_level == AlertLevel::Watch ? "WATCH" : "NONE") << ',';
    csv::write_field(out, members);
    out << '\n';
  }
}

}  // namespace amlnet
