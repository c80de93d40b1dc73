#include "amlnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <utility>

#include <fmt/format.h>

#include "amlnet/error.hpp"

namespace amlnet {

namespace {

std::vector<PartyId> party_ids(const Ledger& ledger) {
  std::vector<PartyId> ids;
  ids.reserve(ledger.parties.size());
  for (const auto& p : ledger.parties) ids.push_back(p.party_id);
  return ids;  // parties are already sorted
}

std::size_t require_index(const RiskNetwork& net, std::string_view id) {
  auto idx = net.index_of(id);
  if (!idx) {
    throw ValidationError("party '" + std::string(id) +
                          "' is missing from the party table");
  }
  return *idx;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::vector<Arc> sorted_arcs(const RiskNetwork& net) {
  std::vector<Arc> arcs = net.arcs;
  std::stable_sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) {
    return std::tie(a.tail, a.head, a.weight) <
           std::tie(b.tail, b.head, b.weight);
  });
  return arcs;
}

}  // namespace

std::string_view to_string(NetworkKind kind) {
  switch (kind) {
    case NetworkKind::Transactions: return "transactions";
    case NetworkKind::Sector: return "sector";
    case NetworkKind::Geo: return "geo";
    case NetworkKind::Tacit: return "tacit";
  }
  return "unknown";
}

Collapse parse_collapse(std::string_view text) {
  if (text == "none") return Collapse::None;
  if (text == "mean") return Collapse::Mean;
  if (text == "sum") return Collapse::Sum;
  if (text == "max") return Collapse::Max;
  throw ValidationError("collapse must be none|mean|sum|max, got '" +
                        std::string(text) + "'");
}

ArcCombine parse_arc_combine(std::string_view text) {
  if (text == "mean") return ArcCombine::Mean;
  if (text == "max") return ArcCombine::Max;
  throw ValidationError("arc_combine must be mean|max, got '" +
                        std::string(text) + "'");
}

std::string_view to_string(Collapse mode) {
  switch (mode) {
    case Collapse::None: return "none";
    case Collapse::Mean: return "mean";
    case Collapse::Sum: return "sum";
    case Collapse::Max: return "max";
  }
  return "unknown";
}

std::string_view to_string(ArcCombine mode) {
  return mode == ArcCombine::Max ? "max" : "mean";
}

std::optional<std::size_t> RiskNetwork::index_of(
    std::string_view party_id) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), party_id);
  if (it == nodes.end() || *it != party_id) return std::nullopt;
  return static_cast<std::size_t>(it - nodes.begin());
}

std::size_t RiskNetwork::loop_count() const {
  return static_cast<std::size_t>(std::count_if(
      arcs.begin(), arcs.end(), [](const Arc& a) { return a.tail == a.head; }));
}

double RiskNetwork::total_weight() const {
  double total = 0.0;
  for (const auto& a : arcs) total += a.weight;
  return total;
}

RiskNetwork build_transactions_network(const Ledger& ledger,
                                       const RiskTables& tables) {
  RiskNetwork net;
  net.kind = NetworkKind::Transactions;
  net.directed = true;
  net.nodes = party_ids(ledger);
  net.arcs.reserve(ledger.records.size());
  for (const auto& r : ledger.records) {
    const auto head = require_index(net, r.seller_id);
    const auto tail = r.debtor_id ? require_index(net, *r.debtor_id) : head;
    net.arcs.push_back({tail, head, bin_amount(r.amount, tables).value()});
  }
  return net;
}

RiskNetwork build_attribute_network(const Ledger& ledger,
                                    const RiskScorer& scorer, NetworkKind kind,
                                    ArcCombine combine) {
  if (kind != NetworkKind::Sector && kind != NetworkKind::Geo) {
    throw std::invalid_argument("attribute network must be SECTOR or GEO");
  }
  RiskNetwork net;
  net.kind = kind;
  net.directed = true;
  net.nodes = party_ids(ledger);

  std::vector<RiskScore> node_score;
  node_score.reserve(ledger.parties.size());
  for (const auto& p : ledger.parties) {
    node_score.push_back(kind == NetworkKind::Sector ? scorer.sector(p)
                                                     : scorer.geo(p));
  }
  net.arcs.reserve(ledger.records.size());
  for (const auto& r : ledger.records) {
    const auto head = require_index(net, r.seller_id);
    const auto tail = r.debtor_id ? require_index(net, *r.debtor_id) : head;
    const double w =
        arc_score(node_score[head], node_score[tail], combine).value();
    net.arcs.push_back({tail, head, w});
  }
  return net;
}

RiskNetwork finalize_network(const RiskNetwork& net, Collapse collapse) {
  RiskNetwork out;
  out.kind = net.kind;
  out.directed = net.directed;
  out.nodes = net.nodes;
  out.finalized = true;

  std::vector<Arc> arcs;
  arcs.reserve(net.arcs.size());
  for (const auto& a : net.arcs) {
    if (a.tail != a.head) arcs.push_back(a);
  }
  if (collapse == Collapse::None) {
    out.arcs = std::move(arcs);
    return out;
  }

  struct Acc {
    double sum = 0.0;
    double max = 0.0;
    std::size_t count = 0;
  };
  std::map<std::pair<std::size_t, std::size_t>, Acc> groups;
  for (const auto& a : arcs) {
    auto& acc = groups[{a.tail, a.head}];
    acc.sum += a.weight;
    acc.max = acc.count ? std::max(acc.max, a.weight) : a.weight;
    ++acc.count;
  }
  out.arcs.reserve(groups.size());
  for (const auto& [key, acc] : groups) {
    double w = acc.sum;
    if (collapse == Collapse::Mean) w = acc.sum / static_cast<double>(acc.count);
    if (collapse == Collapse::Max) w = acc.max;
    out.arcs.push_back({key.first, key.second, w});
  }
  return out;
}

RiskNetwork filter_high_risk(const RiskNetwork& net, double threshold) {
  // Averaged weights like (7/3 + 8/3) / 2 carry rounding noise.
  constexpr double kSlack = 1e-9;
  if (!std::isfinite(threshold)) {
    throw ValidationError(fmt::format("high-risk threshold must be finite, got {}",
                                      threshold));
  }
  RiskNetwork out;
  out.kind = net.kind;
  out.directed = net.directed;
  out.finalized = net.finalized;
  out.nodes = net.nodes;
  for (const auto& a : net.arcs) {
    if (a.weight >= threshold - kSlack) out.arcs.push_back(a);
  }
  return out;
}

RiskNetwork build_tacit_network(const Ledger& ledger) {
  RiskNetwork net;
  net.kind = NetworkKind::Tacit;
  net.directed = false;
  net.finalized = true;
  net.nodes = party_ids(ledger);

  // Person -> sellers that recorded them. Owners and representatives are
  // matched within their own role.
  std::map<std::string, std::set<std::size_t>, std::less<>> by_owner;
  std::map<std::string, std::set<std::size_t>, std::less<>> by_rep;
  for (const auto& r : ledger.records) {
    const auto seller = require_index(net, r.seller_id);
    if (r.owner_id) by_owner[*r.owner_id].insert(seller);
    if (r.representative_id) by_rep[*r.representative_id].insert(seller);
  }
  std::set<std::pair<std::size_t, std::size_t>> edges;
  auto link = [&](const auto& groups) {
    for (const auto& [person, members] : groups) {
      for (auto a = members.begin(); a != members.end(); ++a) {
        for (auto b = std::next(a); b != members.end(); ++b) {
          edges.emplace(*a, *b);
        }
      }
    }
  };
  link(by_owner);
  link(by_rep);
  net.arcs.reserve(edges.size());
  for (const auto& [a, b] : edges) net.arcs.push_back({a, b, 1.0});
  return net;
}

void write_graphml(std::ostream& out, const RiskNetwork& net,
                   const ExportOptions& options) {
  const auto kind = to_string(net.kind);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
         "  <key id=\"sector\" for=\"node\" attr.name=\"sector\" "
         "attr.type=\"string\"/>\n"
         "  <key id=\"region\" for=\"node\" attr.name=\"region\" "
         "attr.type=\"string\"/>\n"
         "  <key id=\"label\" for=\"node\" attr.name=\"label\" "
         "attr.type=\"string\"/>\n";
  if (options.flagged) {
    out << "  <key id=\"flagged\" for=\"node\" attr.name=\"flagged\" "
           "attr.type=\"boolean\"/>\n";
  }
  out << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" "
         "attr.type=\"double\"/>\n"
         "  <key id=\"kind\" for=\"edge\" attr.name=\"kind\" "
         "attr.type=\"string\"/>\n";
  out << fmt::format("  <graph id=\"{}\" edgedefault=\"{}\">\n", kind,
                     net.directed ? "directed" : "undirected");

  std::map<std::string_view, const Party*> attrs;
  for (const auto& p : options.parties) attrs.emplace(p.party_id, &p);

  for (const auto& id : net.nodes) {
    out << "    <node id=\"" << xml_escape(id) << "\">";
    if (auto it = attrs.find(id); it != attrs.end()) {
      const Party& p = *it->second;
      out << "<data key=\"sector\">" << xml_escape(p.sector_code) << "</data>"
          << "<data key=\"region\">" << xml_escape(p.region) << "</data>";
      const char* label = p.high_risk_label == RiskLabel::Positive   ? "1"
                          : p.high_risk_label == RiskLabel::Negative ? "0"
                                                                     : "";
      out << "<data key=\"label\">" << label << "</data>";
    }
    if (options.flagged) {
      out << "<data key=\"flagged\">"
          << (options.flagged->contains(id) ? "true" : "false") << "</data>";
    }
    out << "</node>\n";
  }
  for (const auto& a : sorted_arcs(net)) {
    out << "    <edge source=\"" << xml_escape(net.nodes[a.tail])
        << "\" target=\"" << xml_escape(net.nodes[a.head]) << "\">"
        << fmt::format("<data key=\"weight\">{}</data>", a.weight)
        << "<data key=\"kind\">" << kind << "</data></edge>\n";
  }
  out << "  </graph>\n</graphml>\n";
}

void write_dot(std::ostream& out, const RiskNetwork& net) {
  const char* connector = net.directed ? " -> " : " -- ";
  out << (net.directed ? "digraph " : "graph ") << to_string(net.kind)
      << " {\n";
  for (const auto& id : net.nodes) out << "  " << dot_quote(id) << ";\n";
  for (const auto& a : sorted_arcs(net)) {
    out << "  " << dot_quote(net.nodes[a.tail]) << connector
        << dot_quote(net.nodes[a.head])
        << fmt::format(" [label=\"{}\"];\n", a.weight);
  }
  out << "}\n";
}

}  // namespace amlnet
