#include "amlnet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "amlnet/error.hpp"
#include "amlnet/rng.hpp"
#include "amlnet/risk_scoring.hpp"
#include "csv.hpp"

namespace amlnet {

namespace {

struct SynthParty {
  PartyId id;
  bool foreign = false;
  bool criminal = false;
  bool seller = false;
  std::string sector;
  std::string region;
  std::string country;
  double activity = 1.0;
  PersonId owner;
  PersonId rep;
  bool risky = false;  // HIGH sector or risky region
};

/// Cumulative-weight sampler over a fixed index set.
class WeightedPicker {
 public:
  WeightedPicker() = default;
  WeightedPicker(std::vector<std::size_t> items,
                 const std::vector<SynthParty>& parties)
      : items_(std::move(items)) {
    double total = 0.0;
    for (auto i : items_) {
      total += parties[i].activity;
      cumulative_.push_back(total);
    }
  }
  bool empty() const { return items_.empty(); }
  std::size_t pick(Rng& rng) const {
    const double u = rng.uniform() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    auto pos = static_cast<std::size_t>(it - cumulative_.begin());
    return items_[std::min(pos, items_.size() - 1)];
  }
  /// Redraws until the pick differs from `avoid`; needs two or more items.
  std::size_t pick_other(Rng& rng, std::size_t avoid) const {
    for (;;) {
      auto v = pick(rng);
      if (v != avoid) return v;
    }
  }

 private:
  std::vector<std::size_t> items_;
  std::vector<double> cumulative_;
};

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rng.below(i)]);
  }
}

struct Draft {
  Date date;
  std::size_t seller;
  std::optional<std::size_t> debtor;
  Amount amount;
  bool owner_missing = false;
  bool rep_missing = false;
  enum class Tag { Regular, Smurf, Corridor } tag = Tag::Regular;
  int smurf_instance = -1;
};

}  // namespace

void ScenarioConfig::validate() const {
  auto fraction = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ValidationError(fmt::format("{} must lie in [0, 1]", name));
    }
  };
  fraction(fraction_criminal, "fraction_criminal");
  fraction(label_coverage, "label_coverage");
  fraction(foreign_fraction, "foreign_fraction");
  fraction(seller_fraction, "seller_fraction");
  fraction(base_high_sector_prob, "base_high_sector_prob");
  fraction(missing_rate, "missing_rate");
  fraction(clusters.criminal_share, "clusters.criminal_share");
  fraction(corridor.fraction, "corridor.fraction");
  fraction(corridor.high_sector_prob, "corridor.high_sector_prob");
  fraction(corridor.high_region_prob, "corridor.high_region_prob");
  if (n_parties < 3) throw ValidationError("n_parties must be at least 3");
  if (clusters.count < 0 || clusters.size < 0 || smurfing.pairs < 0) {
    throw ValidationError("pattern counts must be non-negative");
  }
  if (clusters.count > 0 && clusters.size < 2) {
    throw ValidationError("clusters.size must be at least 2");
  }
  if (static_cast<long>(clusters.count) * clusters.size > n_parties) {
    throw ValidationError(fmt::format(
        "infeasible scenario: {} clusters of size {} exceed {} parties",
        clusters.count, clusters.size, n_parties));
  }
  if (smurfing.parts_min < 2 || smurfing.parts_max < smurfing.parts_min) {
    throw ValidationError("smurfing parts need 2 <= parts_min <= parts_max");
  }
  const long needed = static_cast<long>(n_parties) +
                      static_cast<long>(smurfing.pairs) * smurfing.parts_max;
  if (n_transactions < needed) {
    throw ValidationError(fmt::format(
        "infeasible scenario: n_transactions must be at least {}", needed));
  }
  if (span_days < 31) throw ValidationError("span_days must be at least 31");
  if (amount_sigma < 0.0 || criminal_amount_multiplier <= 0.0 ||
      criminal_activity_multiplier <= 0.0 ||
      criminal_missing_multiplier < 0.0) {
    throw ValidationError("amount/activity parameters must be positive");
  }
  parse_date(start_date);
}

ScenarioConfig scenario_preset(std::string_view name) {
  ScenarioConfig c;
  if (name == "full") return c;
  if (name == "small") {
    c.n_parties = 60;
    c.n_transactions = 900;
    c.fraction_criminal = 0.2;
    c.label_coverage = 0.8;
    c.foreign_fraction = 0.05;
    c.smurfing.pairs = 4;
    c.clusters.count = 3;
    c.clusters.size = 3;
    return c;
  }
  throw ValidationError("unknown scenario preset '" + std::string(name) +
                        "' (use full or small)");
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  namespace pt = boost::property_tree;
  if (!std::filesystem::exists(path)) {
    throw ValidationError("scenario file not found: '" + path.string() + "'");
  }
  pt::ptree ini;
  try {
    pt::read_ini(path.string(), ini);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError(std::string("scenario: ") + e.what());
  }
  ScenarioConfig c =
      scenario_preset(ini.get<std::string>("scenario.preset", "full"));
  try {
    auto get = [&](const char* key, auto& slot) {
      using T = std::decay_t<decltype(slot)>;
      // get_value throws on unparsable text where get_optional would not.
      if (auto node = ini.get_child_optional(key)) {
        slot = node->get_value<T>();
      }
    };
    get("scenario.seed", c.seed);
    get("scenario.n_parties", c.n_parties);
    get("scenario.n_transactions", c.n_transactions);
    get("scenario.fraction_criminal", c.fraction_criminal);
    get("scenario.label_coverage", c.label_coverage);
    get("scenario.foreign_fraction", c.foreign_fraction);
    get("scenario.seller_fraction", c.seller_fraction);
    get("scenario.base_high_sector_prob", c.base_high_sector_prob);
    get("scenario.start_date", c.start_date);
    get("scenario.span_days", c.span_days);
    get("amounts.mu", c.amount_mu);
    get("amounts.sigma", c.amount_sigma);
    get("amounts.criminal_multiplier", c.criminal_amount_multiplier);
    get("activity.criminal_multiplier", c.criminal_activity_multiplier);
    get("missing.rate", c.missing_rate);
    get("missing.criminal_multiplier", c.criminal_missing_multiplier);
    get("smurfing.pairs", c.smurfing.pairs);
    get("smurfing.parts_min", c.smurfing.parts_min);
    get("smurfing.parts_max", c.smurfing.parts_max);
    get("clusters.count", c.clusters.count);
    get("clusters.size", c.clusters.size);
    get("clusters.criminal_share", c.clusters.criminal_share);
    get("corridor.fraction", c.corridor.fraction);
    get("corridor.high_sector_prob", c.corridor.high_sector_prob);
    get("corridor.high_region_prob", c.corridor.high_region_prob);
  } catch (const pt::ptree_error& e) {
    throw ValidationError(std::string("scenario: ") + e.what());
  }
  c.validate();
  return c;
}

std::string TruthReport::to_json() const {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["criminal_parties"] = criminal_parties;
  auto smurfs = nlohmann::ordered_json::array();
  for (const auto& s : smurfing) {
    smurfs.push_back({{"seller_id", s.seller_id},
                      {"debtor_id", s.debtor_id},
                      {"txn_ids", s.txn_ids},
                      {"total", format_amount(s.total)}});
  }
  j["smurfing"] = smurfs;
  auto cl = nlohmann::ordered_json::array();
  for (const auto& c : clusters) {
    cl.push_back({{"shared_person", c.shared_person},
                  {"role", c.role},
                  {"members", c.members}});
  }
  j["shared_owner_clusters"] = cl;
  j["high_risk_corridor_txn_ids"] = corridor_txn_ids;
  return j.dump(2) + "\n";
}

void write_labels_csv(std::ostream& out, std::span<const LabelRow> labels) {
  out << kLabelsHeader << '\n';
  for (const auto& l : labels) {
    csv::write_field(out, l.party_id);
    out << ',' << l.high_risk << '\n';
  }
}

Scenario generate(const ScenarioConfig& config, const RiskTables& tables) {
  config.validate();
  Rng rng(config.seed);

  std::vector<std::string> high_sectors;
  std::vector<std::string> low_sectors;
  for (const auto& [code, cls] : tables.sector_class) {
    (cls == SectorClass::High ? high_sectors : low_sectors).push_back(code);
  }
  if (high_sectors.empty() || low_sectors.empty()) {
    throw ValidationError("sector table needs both HIGH and LOW codes");
  }
  const auto region_table = region_scores(tables);
  std::vector<std::string> regions;
  std::vector<std::string> risky_regions;
  for (const auto& [name, e] : region_table) {
    regions.push_back(name);
    if (e.combined >= 2.0) risky_regions.push_back(name);
  }
  if (risky_regions.empty()) risky_regions = regions;
  std::vector<std::string> foreign_countries;
  for (const auto& [code, c] : tables.country_indicators) {
    if (code != "IT") foreign_countries.push_back(code);
  }

  const auto n = static_cast<std::size_t>(config.n_parties);
  const int width = std::max(4, static_cast<int>(std::to_string(n).size()));
  std::vector<SynthParty> parties(n);
  for (std::size_t i = 0; i < n; ++i) {
    parties[i].id = fmt::format("P{:0{}}", i + 1, width);
    parties[i].owner = fmt::format("O{:0{}}", i + 1, width);
    parties[i].rep = fmt::format("R{:0{}}", i + 1, width);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  shuffle(order, rng);
  std::size_t n_foreign = foreign_countries.empty()
                              ? 0
                              : static_cast<std::size_t>(std::lround(
                                    config.foreign_fraction * double(n)));
  n_foreign = std::min(n_foreign, n - 2);
  for (std::size_t k = 0; k < n_foreign; ++k) parties[order[k]].foreign = true;
  const std::size_t n_domestic = n - n_foreign;
  const auto n_criminal = static_cast<std::size_t>(
      std::lround(config.fraction_criminal * double(n_domestic)));
  for (std::size_t k = 0; k < n_criminal; ++k) {
    parties[order[n_foreign + k]].criminal = true;
  }

  for (auto& p : parties) {
    const bool high = rng.bernoulli(p.criminal ? config.corridor.high_sector_prob
                                               : config.base_high_sector_prob);
    const auto& pool = high ? high_sectors : low_sectors;
    p.sector = pool[rng.below(pool.size())];
    if (p.foreign) {
      p.region = std::string(kForeignRegion);
      p.country = foreign_countries[rng.below(foreign_countries.size())];
    } else {
      const bool risky =
          p.criminal && rng.bernoulli(config.corridor.high_region_prob);
      const auto& rp = risky ? risky_regions : regions;
      p.region = rp[rng.below(rp.size())];
      p.country = "IT";
    }
    p.seller = !p.foreign && (p.criminal || rng.bernoulli(config.seller_fraction));
    p.activity = rng.lognormal(0.0, 0.8) *
                 (p.criminal ? config.criminal_activity_multiplier : 1.0);
    const bool risky_region =
        !p.foreign && region_table.at(p.region).combined >= 2.0;
    p.risky = high || risky_region;
  }

  std::vector<std::size_t> sellers;
  std::vector<std::size_t> criminal_sellers;
  std::vector<std::size_t> honest_sellers;
  std::vector<std::size_t> everyone(n);
  std::vector<std::size_t> risky;
  std::iota(everyone.begin(), everyone.end(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (parties[i].seller) {
      sellers.push_back(i);
      (parties[i].criminal ? criminal_sellers : honest_sellers).push_back(i);
    }
    if (parties[i].risky) risky.push_back(i);
  }
  if (sellers.empty()) {
    parties[order[n_foreign]].seller = true;
    sellers.push_back(order[n_foreign]);
    honest_sellers.push_back(order[n_foreign]);
  }
  if (risky.size() < 2) risky = everyone;

  TruthReport truth;
  truth.seed = config.seed;

  // Shared owner / representative clusters, each seeded by a criminal.
  if (!criminal_sellers.empty() && config.clusters.count > 0) {
    std::vector<std::size_t> crim = criminal_sellers;
    std::vector<std::size_t> honest = honest_sellers;
    shuffle(crim, rng);
    shuffle(honest, rng);
    auto take = [](std::vector<std::size_t>& pool) {
      auto v = pool.back();
      pool.pop_back();
      return v;
    };
    for (int c = 0; c < config.clusters.count; ++c) {
      SharedCluster cluster;
      const bool by_owner = c % 2 == 0;
      cluster.role = by_owner ? "owner" : "representative";
      cluster.shared_person =
          fmt::format("{}S{:03d}", by_owner ? 'O' : 'R', c + 1);
      std::vector<std::size_t> members;
      for (int m = 0; m < config.clusters.size; ++m) {
        const bool want_criminal =
            m == 0 || rng.bernoulli(config.clusters.criminal_share);
        if (want_criminal && !crim.empty()) {
          members.push_back(take(crim));
        } else if (!honest.empty()) {
          members.push_back(take(honest));
        } else if (!crim.empty()) {
          members.push_back(take(crim));
        } else {
          throw ValidationError(
              "infeasible scenario: not enough sellers for the requested "
              "shared-owner clusters");
        }
      }
      std::sort(members.begin(), members.end());
      for (auto i : members) {
        (by_owner ? parties[i].owner : parties[i].rep) = cluster.shared_person;
        cluster.members.push_back(parties[i].id);
      }
      truth.clusters.push_back(std::move(cluster));
    }
  }

  const WeightedPicker seller_pick(sellers, parties);
  const WeightedPicker anyone_pick(everyone, parties);
  const WeightedPicker risky_pick(risky, parties);
  const Date start = parse_date(config.start_date);
  const double threshold = tables.recording_threshold.euros();

  auto regular_amount = [&](double multiplier) {
    const double euros =
        threshold + rng.lognormal(config.amount_mu, config.amount_sigma) *
                        multiplier;
    return Amount{static_cast<std::int64_t>(std::llround(euros * 100.0))};
  };
  auto random_date = [&](int span) {
    return start + std::chrono::days{static_cast<int>(
                       rng.below(static_cast<std::uint64_t>(span)))};
  };
  auto missing_flags = [&](Draft& d) {
    const double rate =
        config.missing_rate *
        (parties[d.seller].criminal ? config.criminal_missing_multiplier : 1.0);
    d.owner_missing = rng.bernoulli(std::min(1.0, rate));
    d.rep_missing = rng.bernoulli(std::min(1.0, rate));
    if (rng.bernoulli(std::min(1.0, rate / 2.0))) d.debtor.reset();
  };
  auto criminal_involved = [&](const Draft& d) {
    return parties[d.seller].criminal ||
           (d.debtor && parties[*d.debtor].criminal);
  };

  std::vector<Draft> drafts;
  drafts.reserve(static_cast<std::size_t>(config.n_transactions));

  // Every party appears at least once.
  for (std::size_t i = 0; i < n; ++i) {
    Draft d;
    d.date = random_date(config.span_days);
    if (parties[i].seller) {
      d.seller = i;
      d.debtor = anyone_pick.pick_other(rng, i);
    } else {
      d.seller = sellers.size() > 1 ? seller_pick.pick(rng) : sellers.front();
      d.debtor = i;
    }
    d.amount = regular_amount(criminal_involved(d)
                                  ? config.criminal_amount_multiplier
                                  : 1.0);
    drafts.push_back(d);
  }

  // Smurfing: sub-threshold splits whose total reaches the threshold
  // inside half an aggregation window.
  const Amount threshold_amount = tables.recording_threshold;
  if (!criminal_sellers.empty()) {
    const int spread = std::max(1, tables.aggregation_window_days / 2);
    for (int s = 0; s < config.smurfing.pairs; ++s) {
      const auto seller = criminal_sellers[rng.below(criminal_sellers.size())];
      const auto debtor = anyone_pick.pick_other(rng, seller);
      const int parts = config.smurfing.parts_min +
                        static_cast<int>(rng.below(static_cast<std::uint64_t>(
                            config.smurfing.parts_max -
                            config.smurfing.parts_min + 1)));
      const auto total_cents = static_cast<std::int64_t>(std::llround(
          threshold_amount.cents * rng.uniform(1.0, 1.6)));
      const Date first = random_date(config.span_days - spread);
      std::int64_t used = 0;
      truth.smurfing.push_back(
          {parties[seller].id, parties[debtor].id, {}, Amount{total_cents}});
      for (int k = 0; k < parts; ++k) {
        std::int64_t cents = total_cents - used;
        if (k + 1 < parts) {
          cents = static_cast<std::int64_t>(
              double(total_cents) / parts * rng.uniform(0.8, 1.2));
        }
        used += cents;
        Draft d;
        d.seller = seller;
        d.debtor = debtor;
        d.amount = Amount{cents};
        d.date = first + std::chrono::days{static_cast<int>(
                             rng.below(static_cast<std::uint64_t>(spread)))};
        d.tag = Draft::Tag::Smurf;
        d.smurf_instance = s;
        drafts.push_back(d);
      }
    }
  }

  while (drafts.size() < static_cast<std::size_t>(config.n_transactions)) {
    Draft d;
    d.date = random_date(config.span_days);
    d.seller = seller_pick.pick(rng);
    const bool corridor = parties[d.seller].criminal &&
                          rng.bernoulli(config.corridor.fraction);
    d.debtor = corridor ? risky_pick.pick_other(rng, d.seller)
                        : anyone_pick.pick_other(rng, d.seller);
    if (corridor) d.tag = Draft::Tag::Corridor;
    d.amount = regular_amount(criminal_involved(d)
                                  ? config.criminal_amount_multiplier
                                  : 1.0);
    missing_flags(d);
    drafts.push_back(d);
  }

  std::stable_sort(drafts.begin(), drafts.end(),
                   [](const Draft& a, const Draft& b) { return a.date < b.date; });

  Scenario out;
  out.records.reserve(drafts.size());
  const int txn_width =
      std::max(6, static_cast<int>(std::to_string(drafts.size()).size()));
  for (std::size_t k = 0; k < drafts.size(); ++k) {
    const auto& d = drafts[k];
    const auto& s = parties[d.seller];
    TransactionRecord r;
    r.txn_id = fmt::format("T{:0{}}", k + 1, txn_width);
    r.timestamp = d.date;
    r.seller_id = s.id;
    r.amount = d.amount;
    if (!d.owner_missing) r.owner_id = s.owner;
    if (!d.rep_missing) r.representative_id = s.rep;
    r.seller_sector = s.sector;
    r.seller_region = s.region;
    if (d.debtor) {
      const auto& b = parties[*d.debtor];
      r.debtor_id = b.id;
      r.country = b.country;
      r.debtor_sector = b.sector;
      r.debtor_region = b.region;
    }
    if (d.tag == Draft::Tag::Smurf) {
      truth.smurfing[static_cast<std::size_t>(d.smurf_instance)]
          .txn_ids.push_back(r.txn_id);
    } else if (d.tag == Draft::Tag::Corridor) {
      truth.corridor_txn_ids.push_back(r.txn_id);
    }
    out.records.push_back(std::move(r));
  }

  for (const auto& p : parties) {
    if (p.criminal) truth.criminal_parties.push_back(p.id);
    if (rng.bernoulli(config.label_coverage)) {
      out.labels.push_back({p.id, p.criminal ? 1 : 0});
    }
  }
  out.truth = std::move(truth);
  return out;
}

}  // namespace amlnet
