#pragma once

#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "amlnet/network.hpp"

namespace amlnet {

enum class AlertLevel { None, Watch };

struct TacitComponent {
  int component_id = 0;
  std::vector<PartyId> members;          // sorted
  std::vector<PartyId> flagged_members;  // sorted subset
  AlertLevel alert_level = AlertLevel::None;
};

/// Connected components of the tacit network without isolates. Ids are
/// assigned 1..k in order of each component's smallest member.
std::vector<TacitComponent> components(const RiskNetwork& tacit,
                                       const std::set<PartyId>& flags = {});

struct Alert {
  PartyId party_id;
  int component_id = 0;
  std::vector<PartyId> reason_members;  // flagged co-members
};

/// Every unflagged member of a component holding a flagged member, ordered
/// by (component_id, party_id).
std::vector<Alert> propagate_alerts(std::span<const TacitComponent> comps,
                                    const std::set<PartyId>& flags);

/// CSV: party_id,component_id,reason_members (members joined by ';').
void write_alerts_csv(std::ostream& out, std::span<const Alert> alerts);
void write_components_csv(std::ostream& out,
                          std::span<const TacitComponent> comps);

}  // namespace amlnet
