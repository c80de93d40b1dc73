#include "cli/cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "amlnet/digest.hpp"
#include "amlnet/error.hpp"
#include "amlnet/features.hpp"
#include "amlnet/ingestion.hpp"
#include "amlnet/logit.hpp"
#include "amlnet/network.hpp"
#include "amlnet/risk_scoring.hpp"
#include "amlnet/stats.hpp"
#include "amlnet/synth.hpp"
#include "amlnet/tacit.hpp"
#include "cli/run_dir.hpp"
#include "cli/settings.hpp"
#include "csv.hpp"

#ifndef AMLNET_VERSION
#define AMLNET_VERSION "0.0.0"
#endif

namespace amlnet::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

namespace {

struct CommonOptions {
  std::string run_dir;
  std::string config;
  std::optional<double> threshold;
  std::string collapse;
  std::string arc_combine;
  std::optional<int> window;
};

struct StageOptions {
  std::string ledger;
  std::string labels;
  std::string flags;
  std::string model;
  std::optional<std::size_t> top_k;
  std::string predictors;
  bool standardize = false;
  std::string preset = "full";
  std::string scenario;
  std::optional<std::uint64_t> seed;
};

Settings effective_settings(const CommonOptions& o) {
  std::optional<fs::path> path;
  if (!o.config.empty()) {
    path = o.config;
  } else if (const char* env = std::getenv("AMLNET_CONFIG"); env && *env) {
    path = env;
  }
  Settings s = load_settings(path);
  if (o.threshold) s.set_threshold(*o.threshold);
  if (!o.collapse.empty()) s.collapse = parse_collapse(o.collapse);
  if (!o.arc_combine.empty()) s.arc_combine = parse_arc_combine(o.arc_combine);
  if (o.window) {
    if (*o.window < 1) throw ValidationError("--window must be at least 1");
    s.tables.aggregation_window_days = *o.window;
  }
  return s;
}

template <typename F>
std::string render(F&& write) {
  std::ostringstream out;
  write(out);
  return out.str();
}

json input_entry(const std::string& path) {
  if (!fs::exists(path)) {
    throw ValidationError("input file not found: '" + path + "'");
  }
  return json{{"path", path}, {"sha256", sha256_file(path)}};
}

/// Collects the files a stage writes so their digests enter the manifest.
class StageWriter {
 public:
  explicit StageWriter(const RunDir& dir) : dir_(dir) {}
  void write(const std::string& relative, const std::string& content) {
    dir_.write(relative, content);
    outputs_[relative] = sha256_hex(content);
  }
  json outputs() const {
    json j = json::object();
    for (const auto& [k, v] : outputs_) j[k] = v;
    return j;
  }

 private:
  const RunDir& dir_;
  std::map<std::string, std::string> outputs_;
};

json stage_entry(const Settings& s, json inputs, const StageWriter& writer,
                 json counts, Clock::time_point start) {
  const auto ms = std::chrono::duration<double, std::milli>(Clock::now() -
                                                            start)
                      .count();
  json e;
  e["tool_version"] = AMLNET_VERSION;
  e["config"] = s.source;
  e["config_hash"] = s.hash();
  e["inputs"] = std::move(inputs);
  e["outputs"] = writer.outputs();
  e["counts"] = std::move(counts);
  e["timings_ms"] = {{"total", std::round(ms * 1000.0) / 1000.0}};
  return e;
}

/// Kept records from ingest/ledger.csv with the full ingested party table.
Ledger load_ingested(const RunDir& dir, const Settings& s) {
  dir.verify_stage("ingest");
  std::istringstream records(dir.read("ingest/ledger.csv"));
  Ledger ledger = parse_ledger(records, s.tables);
  std::istringstream parties(dir.read("ingest/parties.csv"));
  ledger.parties = read_parties_csv(parties);
  return ledger;
}

std::vector<ClientFeatureRow> load_features(const RunDir& dir) {
  dir.verify_stage("analyze");
  std::istringstream in(dir.read("analyze/features.csv"));
  return read_features_csv(in);
}

int cmd_ingest(const CommonOptions& common, const StageOptions& opt,
               std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  const Settings s = effective_settings(common);
  RunDir dir(common.run_dir);
  json inputs;
  inputs["ledger"] = input_entry(opt.ledger);
  Ledger ledger = load_ledger(opt.ledger, s.tables);
  const std::size_t rows_read = ledger.records.size();
  auto kept = apply_recording_threshold(ledger.records, s.tables);
  ledger.records = std::move(kept.records);

  std::vector<std::string> warnings;
  std::size_t labeled = 0;
  if (!opt.labels.empty()) {
    inputs["labels"] = input_entry(opt.labels);
    auto result = load_labels(opt.labels, std::move(ledger.parties));
    ledger.parties = std::move(result.parties);
    labeled = result.labeled;
    warnings = std::move(result.warnings);
  }
  for (const auto& w : warnings) err << "amlnet: warning: " << w << '\n';

  StageWriter w(dir);
  w.write("ingest/ledger.csv",
          render([&](auto& o) { write_ledger_csv(o, ledger.records); }));
  w.write("ingest/parties.csv",
          render([&](auto& o) { write_parties_csv(o, ledger.parties); }));
  w.write("ingest/warnings.txt", render([&](auto& o) {
            for (const auto& x : warnings) o << x << '\n';
          }));
  json counts{{"rows_read", rows_read},
              {"rows_kept", ledger.records.size()},
              {"rows_dropped", kept.dropped},
              {"parties", ledger.parties.size()},
              {"labeled", labeled},
              {"label_warnings", warnings.size()}};
  dir.record_stage("ingest", stage_entry(s, inputs, w, counts, start));
  dir.save();
  out << fmt::format(
      "ingest: {} rows read, {} kept, {} dropped below threshold; "
      "{} parties, {} labeled\n",
      rows_read, ledger.records.size(), kept.dropped, ledger.parties.size(),
      labeled);
  return kExitOk;
}

json network_counts(const RiskNetwork& raw, const RiskNetwork& finalized,
                    const RiskNetwork& filtered, double threshold) {
  return json{{"nodes", raw.nodes.size()},
              {"arcs_built", raw.arcs.size()},
              {"loops_removed", raw.loop_count()},
              {"arcs_finalized", finalized.arcs.size()},
              {"threshold", threshold},
              {"arcs_kept", filtered.arcs.size()}};
}

int cmd_analyze(const CommonOptions& common, std::ostream& out) {
  const auto start = Clock::now();
  const Settings s = effective_settings(common);
  RunDir dir(common.run_dir);
  const Ledger ledger = load_ingested(dir, s);
  const RiskScorer scorer(s.tables);

  json counts;
  AnalyticNetworks nets;
  {
    auto raw = build_transactions_network(ledger, s.tables);
    auto fin = finalize_network(raw, Collapse::None);
    nets.transactions = filter_high_risk(fin, s.threshold_transactions);
    counts["transactions"] = network_counts(raw, fin, nets.transactions,
                                            s.threshold_transactions);
  }
  {
    auto raw = build_attribute_network(ledger, scorer, NetworkKind::Sector,
                                       s.arc_combine);
    auto fin = finalize_network(raw, s.collapse);
    nets.sector = filter_high_risk(fin, s.threshold_sector);
    counts["sector"] =
        network_counts(raw, fin, nets.sector, s.threshold_sector);
  }
  {
    auto raw = build_attribute_network(ledger, scorer, NetworkKind::Geo,
                                       s.arc_combine);
    auto fin = finalize_network(raw, s.collapse);
    nets.geo = filter_high_risk(fin, s.threshold_geo);
    counts["geo"] = network_counts(raw, fin, nets.geo, s.threshold_geo);
  }
  const RiskNetwork tacit = build_tacit_network(ledger);
  const auto rows = assemble_features(nets, ledger);
  const auto eligible = static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(),
                    [](const auto& r) { return r.fit_eligible(); }));

  StageWriter w(dir);
  w.write("analyze/features.csv",
          render([&](auto& o) { write_features_csv(o, rows); }));
  if (eligible >= 3) {
    const auto report = pearson_matrix(rows);
    w.write("analyze/correlations.txt",
            render([&](auto& o) { write_correlation_table(o, report); }));
    w.write("analyze/correlations.csv",
            render([&](auto& o) { write_correlation_csv(o, report); }));
  }
  const ExportOptions attrs{ledger.parties, nullptr};
  const std::pair<const char*, const RiskNetwork*> exports[] = {
      {"transactions", &nets.transactions},
      {"sector", &nets.sector},
      {"geo", &nets.geo},
      {"tacit", &tacit}};
  for (const auto& [name, net] : exports) {
    w.write(fmt::format("analyze/networks/{}.graphml", name),
            render([&](auto& o) { write_graphml(o, *net, attrs); }));
    w.write(fmt::format("analyze/networks/{}.dot", name),
            render([&](auto& o) { write_dot(o, *net); }));
  }
  counts["tacit"] = {{"nodes", tacit.nodes.size()},
                     {"edges", tacit.arcs.size()}};
  counts["feature_rows"] = rows.size();
  counts["fit_eligible"] = eligible;
  counts["correlations"] = eligible >= 3 ? "written" : "skipped";

  json inputs{{"ingest/ledger.csv",
               dir.stage("ingest")["outputs"]["ingest/ledger.csv"]},
              {"ingest/parties.csv",
               dir.stage("ingest")["outputs"]["ingest/parties.csv"]}};
  dir.record_stage("analyze", stage_entry(s, inputs, w, counts, start));
  dir.save();
  out << fmt::format(
      "analyze: {} feature rows ({} fit-eligible); arcs kept: "
      "transactions {}, sector {}, geo {}; tacit edges {}\n",
      rows.size(), eligible, nets.transactions.arcs.size(),
      nets.sector.arcs.size(), nets.geo.arcs.size(), tacit.arcs.size());
  if (eligible < 3) {
    out << "analyze: correlations skipped (fewer than 3 labeled rows)\n";
  }
  return kExitOk;
}

int cmd_fit(const CommonOptions& common, const StageOptions& opt,
            std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  Settings s = effective_settings(common);
  if (!opt.predictors.empty()) s.predictors = split_list(opt.predictors);
  if (opt.standardize) s.standardize = true;
  RunDir dir(common.run_dir);
  const auto rows = load_features(dir);

  LogitOptions lo;
  lo.standardize = s.standardize;
  LogitModel model = fit_logit(rows, s.predictors, lo);
  model.name = "fitted";
  const std::vector<LogitModel> models{model};

  StageWriter w(dir);
  w.write("fit/model.json", model_to_json(model));
  w.write("fit/report.txt",
          render([&](auto& o) { write_model_report(o, models); }));
  w.write("fit/report.csv",
          render([&](auto& o) { write_model_report_csv(o, models); }));
  json counts{{"n", model.n},
              {"parameters", model.parameter_count()},
              {"converged", model.converged},
              {"iterations", model.iterations},
              {"log_likelihood", model.log_likelihood},
              {"mcfadden_r2", model.mcfadden_r2},
              {"aic", model.aic},
              {"bic", model.bic}};
  json inputs{{"analyze/features.csv",
               dir.stage("analyze")["outputs"]["analyze/features.csv"]}};
  dir.record_stage("fit", stage_entry(s, inputs, w, counts, start));
  dir.save();
  if (!model.converged) {
    err << "amlnet: numerical failure: " << model.diagnostic << '\n';
    return kExitNumerical;
  }
  out << fmt::format(
      "fit: n={} k={} logL={:.3f} McFadden R2={:.3f} AIC={:.3f} BIC={:.3f}\n",
      model.n, model.parameter_count(), model.log_likelihood,
      model.mcfadden_r2, model.aic, model.bic);
  return kExitOk;
}

int cmd_score(const CommonOptions& common, const StageOptions& opt,
              std::ostream& out) {
  const auto start = Clock::now();
  Settings s = effective_settings(common);
  if (!opt.model.empty()) s.model = opt.model;
  if (opt.top_k) s.top_k = *opt.top_k;
  RunDir dir(common.run_dir);
  const auto rows = load_features(dir);

  json inputs{{"analyze/features.csv",
               dir.stage("analyze")["outputs"]["analyze/features.csv"]}};
  LogitModel model;
  if (s.model == "fitted") {
    dir.verify_stage("fit");
    model = model_from_json(dir.read("fit/model.json"));
    inputs["fit/model.json"] = dir.stage("fit")["outputs"]["fit/model.json"];
  } else {
    if (s.model.rfind("paper:", 0) != 0) inputs["model"] = input_entry(s.model);
    model = load_model(s.model);
  }
  const auto ranked =
      rank_clients(model, rows, s.top_k == 0 ? rows.size() : s.top_k);

  StageWriter w(dir);
  w.write("score/model.json", model_to_json(model));
  w.write("score/scores.csv", render([&](auto& o) {
            o << "rank,party_id,probability,high_risk\n";
            for (std::size_t i = 0; i < ranked.size(); ++i) {
              const auto& c = ranked[i];
              o << i + 1 << ',';
              csv::write_field(o, c.party_id);
              o << fmt::format(",{:.6f},", c.probability);
              if (c.label != RiskLabel::Unknown) {
                o << (c.label == RiskLabel::Positive ? '1' : '0');
              }
              o << '\n';
            }
          }));
  json counts{{"model", model.name}, {"scored", ranked.size()}};
  dir.record_stage("score", stage_entry(s, inputs, w, counts, start));
  dir.save();
  out << fmt::format("score: {} clients ranked with model '{}'\n",
                     ranked.size(), model.name);
  return kExitOk;
}

std::set<PartyId> read_flag_file(const std::string& path,
                                 const std::vector<Party>& parties,
                                 std::ostream& err) {
  std::ifstream in(path);
  if (!in) throw ValidationError("flag file not found: '" + path + "'");
  const auto table = csv::read(in);
  const auto idx = csv::require_columns(table, std::array<std::string_view, 1>{"party_id"});
  std::set<PartyId> flags;
  for (const auto& row : table.rows) {
    const auto& id = row.fields.at(idx[0]);
    const bool known = std::binary_search(
        parties.begin(), parties.end(), id,
        [](const auto& a, const auto& b) {
          if constexpr (std::is_same_v<std::decay_t<decltype(a)>, Party>) {
            return a.party_id < b;
          } else {
            return a < b.party_id;
          }
        });
    if (!known) {
      err << fmt::format("amlnet: warning: flag file row {}: unknown party "
                         "'{}' skipped\n",
                         row.number, id);
      continue;
    }
    flags.insert(id);
  }
  return flags;
}

int cmd_alerts(const CommonOptions& common, const StageOptions& opt,
               std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  const Settings s = effective_settings(common);
  RunDir dir(common.run_dir);
  const Ledger ledger = load_ingested(dir, s);
  json inputs{{"ingest/ledger.csv",
               dir.stage("ingest")["outputs"]["ingest/ledger.csv"]},
              {"ingest/parties.csv",
               dir.stage("ingest")["outputs"]["ingest/parties.csv"]}};

  std::set<PartyId> flags;
  for (const auto& p : ledger.parties) {
    if (p.high_risk_label == RiskLabel::Positive) flags.insert(p.party_id);
  }
  const std::size_t label_flags = flags.size();
  if (!opt.flags.empty()) {
    inputs["flags"] = input_entry(opt.flags);
    flags.merge(read_flag_file(opt.flags, ledger.parties, err));
  }
  const RiskNetwork tacit = build_tacit_network(ledger);
  const auto comps = components(tacit, flags);
  const auto alerts = propagate_alerts(comps, flags);
  const auto watched = std::count_if(comps.begin(), comps.end(), [](auto& c) {
    return c.alert_level == AlertLevel::Watch;
  });

  StageWriter w(dir);
  w.write("alerts/alerts.csv",
          render([&](auto& o) { write_alerts_csv(o, alerts); }));
  w.write("alerts/components.csv",
          render([&](auto& o) { write_components_csv(o, comps); }));
  const ExportOptions attrs{ledger.parties, &flags};
  w.write("alerts/tacit.graphml",
          render([&](auto& o) { write_graphml(o, tacit, attrs); }));
  json counts{{"flags", flags.size()},
              {"flags_from_labels", label_flags},
              {"components", comps.size()},
              {"watch_components", watched},
              {"alerts", alerts.size()}};
  dir.record_stage("alerts", stage_entry(s, inputs, w, counts, start));
  dir.save();
  out << fmt::format("alerts: {} flags, {} components ({} on watch), "
                     "{} alerts\n",
                     flags.size(), comps.size(), watched, alerts.size());
  return kExitOk;
}

int cmd_generate(const CommonOptions& common, const StageOptions& opt,
                 std::ostream& out) {
  const auto start = Clock::now();
  const Settings s = effective_settings(common);
  RunDir dir(common.run_dir);
  json inputs = json::object();
  ScenarioConfig config;
  if (!opt.scenario.empty()) {
    inputs["scenario"] = input_entry(opt.scenario);
    config = load_scenario(opt.scenario);
  } else {
    config = scenario_preset(opt.preset);
    inputs["preset"] = opt.preset;
  }
  if (opt.seed) config.seed = *opt.seed;
  const Scenario scenario = generate(config, s.tables);

  StageWriter w(dir);
  w.write("generate/ledger.csv",
          render([&](auto& o) { write_ledger_csv(o, scenario.records); }));
  w.write("generate/labels.csv",
          render([&](auto& o) { write_labels_csv(o, scenario.labels); }));
  w.write("generate/truth.json", scenario.truth.to_json());
  json counts{{"seed", config.seed},
              {"parties", config.n_parties},
              {"transactions", scenario.records.size()},
              {"labels", scenario.labels.size()},
              {"criminal_parties", scenario.truth.criminal_parties.size()},
              {"smurfing_instances", scenario.truth.smurfing.size()},
              {"clusters", scenario.truth.clusters.size()}};
  dir.record_stage("generate", stage_entry(s, inputs, w, counts, start));
  dir.save();
  out << fmt::format("generate: seed {}, {} transactions, {} labels -> {}\n",
                     config.seed, scenario.records.size(),
                     scenario.labels.size(),
                     dir.path("generate").string());
  return kExitOk;
}

int cmd_export(const CommonOptions& common, std::ostream& out) {
  const auto start = Clock::now();
  const Settings s = effective_settings(common);
  RunDir dir(common.run_dir);
  dir.verify_stage("score");
  json inputs{{"score/scores.csv",
               dir.stage("score")["outputs"]["score/scores.csv"]}};
  const auto scores = [&] {
    std::istringstream in(dir.read("score/scores.csv"));
    return csv::read(in);
  }();
  std::map<PartyId, std::pair<int, std::string>> alert_of;
  if (dir.has_stage("alerts")) {
    dir.verify_stage("alerts");
    inputs["alerts/alerts.csv"] =
        dir.stage("alerts")["outputs"]["alerts/alerts.csv"];
    std::istringstream in(dir.read("alerts/alerts.csv"));
    const auto table = csv::read(in);
    const auto idx = csv::require_columns(
        table, std::array<std::string_view, 3>{"party_id", "component_id",
                                               "reason_members"});
    for (const auto& r : table.rows) {
      alert_of[r.fields[idx[0]]] = {std::stoi(r.fields[idx[1]]),
                                    r.fields[idx[2]]};
    }
  }
  const auto idx = csv::require_columns(
      scores, std::array<std::string_view, 4>{"rank", "party_id",
                                              "probability", "high_risk"});

  StageWriter w(dir);
  w.write("export/risk_profiles.csv", render([&](auto& o) {
            o << "rank,party_id,probability,high_risk,alert_component,"
                 "alert_reason\n";
            for (const auto& r : scores.rows) {
              const auto& id = r.fields[idx[1]];
              o << r.fields[idx[0]] << ',';
              csv::write_field(o, id);
              o << ',' << r.fields[idx[2]] << ',' << r.fields[idx[3]];
              if (auto it = alert_of.find(id); it != alert_of.end()) {
                o << ',' << it->second.first << ',';
                csv::write_field(o, it->second.second);
              } else {
                o << ",,";
              }
              o << '\n';
            }
          }));
  json counts{{"profiles", scores.rows.size()},
              {"alerted", alert_of.size()}};
  dir.record_stage("export", stage_entry(s, inputs, w, counts, start));
  dir.save();
  out << fmt::format("export: {} risk profiles written\n", scores.rows.size());
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"amlnet: social-network risk analysis for factoring ledgers",
               "amlnet"};
  app.set_version_flag("--version", AMLNET_VERSION);
  app.require_subcommand(1);

  CommonOptions common;
  StageOptions opt;
  auto add_common = [&](CLI::App* sub, bool analysis_flags) {
    sub->add_option("--run-dir", common.run_dir, "Output run directory")
        ->required();
    sub->add_option("--config", common.config,
                    "INI config (default: $AMLNET_CONFIG, else built-in)");
    sub->add_option("--window", common.window,
                    "Smurfing aggregation window in days");
    if (analysis_flags) {
      sub->add_option("--threshold", common.threshold,
                      "High-risk arc threshold for all three networks");
      sub->add_option("--collapse", common.collapse,
                      "Parallel-arc collapse: mean|sum|max");
      sub->add_option("--arc-combine", common.arc_combine,
                      "Attribute arc score: mean|max");
    }
  };

  auto* ingest = app.add_subcommand("ingest", "Validate and filter a ledger");
  add_common(ingest, false);
  ingest->add_option("--ledger", opt.ledger, "Ledger CSV")->required();
  ingest->add_option("--labels", opt.labels, "Labels CSV (party_id,high_risk)");

  auto* analyze =
      app.add_subcommand("analyze", "Build networks and the feature matrix");
  add_common(analyze, true);

  auto* fit = app.add_subcommand("fit", "Fit a logit model on labeled rows");
  add_common(fit, false);
  fit->add_option("--predictors", opt.predictors,
                  "Comma-separated feature columns");
  fit->add_flag("--standardize", opt.standardize, "Z-score predictors");

  auto* score = app.add_subcommand("score", "Rank clients by risk");
  add_common(score, false);
  score->add_option("--model", opt.model,
                    "paper:model1..4, fitted, or a model JSON file");
  score->add_option("--top-k", opt.top_k, "Keep the k riskiest (0 = all)");

  auto* alerts = app.add_subcommand("alerts", "Tacit-link cluster alerts");
  add_common(alerts, false);
  alerts->add_option("--flags", opt.flags, "Extra flags CSV (party_id)");

  auto* gen = app.add_subcommand("generate", "Generate a synthetic scenario");
  add_common(gen, false);
  gen->add_option("--preset", opt.preset, "full|small");
  gen->add_option("--scenario", opt.scenario, "Scenario INI file");
  gen->add_option("--seed", opt.seed, "Override the scenario seed");

  auto* exp = app.add_subcommand("export", "Join scores and alerts");
  add_common(exp, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << AMLNET_VERSION << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "amlnet: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    if (*ingest) return cmd_ingest(common, opt, out, err);
    if (*analyze) return cmd_analyze(common, out);
    if (*fit) return cmd_fit(common, opt, out, err);
    if (*score) return cmd_score(common, opt, out);
    if (*alerts) return cmd_alerts(common, opt, out, err);
    if (*gen) return cmd_generate(common, opt, out);
    if (*exp) return cmd_export(common, out);
  } catch (const ValidationError& e) {
    err << "amlnet: validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "amlnet: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const IoError& e) {
    err << "amlnet: I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    err << "amlnet: validation error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace amlnet::cli
