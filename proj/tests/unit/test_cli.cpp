#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli/cli.hpp"
#include "support/fixtures.hpp"

namespace fs = std::filesystem;
using fixture::Row;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = amlnet::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

nlohmann::json manifest(const fs::path& dir) {
  return nlohmann::json::parse(slurp(dir / "manifest.json"));
}

std::string config() {
  return (fs::path(AMLNET_DATA_DIR) / "amlnet.ini").string();
}

// Three sellers with a shared owner, a triangle of risky trade and labels.
fs::path small_inputs(const fs::path& dir) {
  std::vector<Row> rows;
  const char* parties[] = {"A", "B", "C", "D", "E"};
  int n = 0;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      if (i == j) continue;
      Row r;
      r.txn_id = fmt::format("T{:03}", ++n);
      r.seller = parties[i];
      r.debtor = parties[j];
      r.amount = std::to_string(16'000 + 1'000 * (i + j));
      r.owner = i < 3 ? "O1" : fmt::format("O{}", i + 10);
      r.rep = fmt::format("R{}", i);
      r.seller_sector = i % 2 ? "construction" : "textiles";
      r.debtor_sector = j % 2 ? "construction" : "textiles";
      r.seller_region = i % 2 ? "Calabria" : "Lombardia";
      r.debtor_region = j % 2 ? "Calabria" : "Lombardia";
      rows.push_back(r);
    }
  }
  write(dir / "ledger.csv", fixture::ledger_csv(rows));
  write(dir / "labels.csv",
        "party_id,high_risk\nA,1\nB,0\nC,1\nD,0\nE,0\n");
  return dir;
}

}  // namespace

TEST_CASE("ingest writes the filtered ledger and records the stage") {
  const auto dir = fixture::scratch_dir("cli_ingest");
  small_inputs(dir);
  const auto run_dir = (dir / "run").string();
  auto r = run({"ingest", "--run-dir", run_dir, "--config", config(),
                "--ledger", (dir / "ledger.csv").string(), "--labels",
                (dir / "labels.csv").string()});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  CHECK(fs::exists(dir / "run" / "ingest" / "ledger.csv"));
  CHECK(fs::exists(dir / "run" / "ingest" / "parties.csv"));
  const auto m = manifest(dir / "run");
  const auto& stage = m.at("stages").at("ingest");
  CHECK(stage.at("config") == config());
  CHECK(stage.at("config_hash").get<std::string>().size() == 64);
  CHECK(stage.at("outputs").contains("ingest/ledger.csv"));
  CHECK(stage.at("inputs").size() == 2);
}

TEST_CASE("a malformed ledger row exits 1 and names the row") {
  const auto dir = fixture::scratch_dir("cli_bad_row");
  Row good{.txn_id = "T1"};
  Row bad{.txn_id = "T2", .amount = "lots"};
  write(dir / "ledger.csv", fixture::ledger_csv({good, bad}));
  auto r = run({"ingest", "--run-dir", (dir / "run").string(), "--ledger",
                (dir / "ledger.csv").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("row 2") != std::string::npos);
}

TEST_CASE("missing inputs and configuration exit 1") {
  const auto dir = fixture::scratch_dir("cli_missing");
  small_inputs(dir);
  auto r = run({"ingest", "--run-dir", (dir / "run").string(), "--ledger",
                (dir / "absent.csv").string()});
  CHECK(r.code == 1);
  r = run({"ingest", "--run-dir", (dir / "run").string(), "--config",
           (dir / "absent.ini").string(), "--ledger",
           (dir / "ledger.csv").string()});
  CHECK(r.code == 1);
  write(dir / "broken.ini", "[tables]\nsectors = nowhere.csv\n");
  r = run({"ingest", "--run-dir", (dir / "run").string(), "--config",
           (dir / "broken.ini").string(), "--ledger",
           (dir / "ledger.csv").string()});
  CHECK(r.code == 1);
  r = run({"analyze", "--run-dir", (dir / "fresh").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("ingest") != std::string::npos);
  r = run({"ingest", "--ledger", (dir / "ledger.csv").string()});
  CHECK(r.code == 1);
}

TEST_CASE("an unwritable run directory exits 3") {
  const auto dir = fixture::scratch_dir("cli_io");
  small_inputs(dir);
  auto r = run({"ingest", "--run-dir", "/proc/amlnet-no-such/run", "--ledger",
                (dir / "ledger.csv").string()});
  CHECK(r.code == 3);
}

TEST_CASE("the full pipeline runs on a small ledger") {
  const auto dir = fixture::scratch_dir("cli_pipeline");
  small_inputs(dir);
  const auto rd = (dir / "run").string();
  auto step = [&](std::vector<std::string> args) {
    args.insert(args.begin() + 1, {"--run-dir", rd, "--config", config()});
    auto r = run(args);
    INFO(args[0], ": ", r.err);
    return r;
  };
  REQUIRE(step({"ingest", "--ledger", (dir / "ledger.csv").string(),
                "--labels", (dir / "labels.csv").string()})
              .code == 0);
  REQUIRE(step({"analyze"}).code == 0);
  CHECK(fs::exists(dir / "run" / "analyze" / "features.csv"));
  for (const char* kind : {"transactions", "sector", "geo", "tacit"}) {
    CHECK(fs::exists(dir / "run" / "analyze" / "networks" /
                     (std::string(kind) + ".graphml")));
  }

  auto r = step({"score", "--model", "paper:model4", "--top-k", "2"});
  REQUIRE(r.code == 0);
  std::istringstream scores(slurp(dir / "run" / "score" / "scores.csv"));
  std::string line;
  int lines = 0;
  while (std::getline(scores, line)) ++lines;
  CHECK(lines == 3);

  // A, B and C share owner O1; flagging A and C alerts B.
  r = step({"alerts"});
  REQUIRE(r.code == 0);
  const auto alerts = slurp(dir / "run" / "alerts" / "alerts.csv");
  CHECK(alerts.find("B,") != std::string::npos);
  CHECK(alerts.find("D,") == std::string::npos);

  REQUIRE(step({"export"}).code == 0);
  CHECK(fs::exists(dir / "run" / "export" / "risk_profiles.csv"));

  // Re-running an upstream stage drops its dependants.
  REQUIRE(step({"analyze"}).code == 0);
  const auto m = manifest(dir / "run");
  CHECK_FALSE(m.at("stages").contains("score"));
  CHECK_FALSE(m.at("stages").contains("export"));
  CHECK(m.at("stages").contains("alerts"));
}

TEST_CASE("fitting needs at least three labeled rows") {
  const auto dir = fixture::scratch_dir("cli_fit_few");
  small_inputs(dir);
  write(dir / "labels.csv", "party_id,high_risk\nA,1\nB,0\n");
  const auto rd = (dir / "run").string();
  REQUIRE(run({"ingest", "--run-dir", rd, "--ledger",
               (dir / "ledger.csv").string(), "--labels",
               (dir / "labels.csv").string()})
              .code == 0);
  auto r = run({"analyze", "--run-dir", rd});
  REQUIRE(r.code == 0);
  CHECK(manifest(dir / "run")["stages"]["analyze"]["counts"]["correlations"] ==
        "skipped");
  r = run({"fit", "--run-dir", rd});
  CHECK(r.code == 1);
  CHECK_FALSE(fs::exists(dir / "run" / "fit" / "model.json"));
}

TEST_CASE("alerts without any flags produce a header-only report") {
  const auto dir = fixture::scratch_dir("cli_no_flags");
  small_inputs(dir);
  const auto rd = (dir / "run").string();
  REQUIRE(run({"ingest", "--run-dir", rd, "--ledger",
               (dir / "ledger.csv").string()})
              .code == 0);
  auto r = run({"alerts", "--run-dir", rd});
  REQUIRE(r.code == 0);
  CHECK(slurp(dir / "run" / "alerts" / "alerts.csv") ==
        "party_id,component_id,reason_members\n");

  write(dir / "flags.csv", "party_id\nA\nZZZ\n");
  r = run({"alerts", "--run-dir", rd, "--flags",
           (dir / "flags.csv").string()});
  REQUIRE(r.code == 0);
  CHECK(r.err.find("ZZZ") != std::string::npos);
  const auto alerts = slurp(dir / "run" / "alerts" / "alerts.csv");
  CHECK(alerts.find("B,") != std::string::npos);
  CHECK(alerts.find("C,") != std::string::npos);
}

TEST_CASE("an empty ledger still analyzes") {
  const auto dir = fixture::scratch_dir("cli_empty");
  write(dir / "ledger.csv", fixture::ledger_csv({}));
  const auto rd = (dir / "run").string();
  REQUIRE(run({"ingest", "--run-dir", rd, "--ledger",
               (dir / "ledger.csv").string()})
              .code == 0);
  auto r = run({"analyze", "--run-dir", rd});
  CHECK(r.code == 0);
  CHECK(manifest(dir / "run")["stages"]["analyze"]["counts"]["feature_rows"] ==
        0);
}

TEST_CASE("a threshold of 1 keeps every finalized arc") {
  const auto dir = fixture::scratch_dir("cli_threshold");
  small_inputs(dir);
  const auto rd = (dir / "run").string();
  REQUIRE(run({"ingest", "--run-dir", rd, "--ledger",
               (dir / "ledger.csv").string()})
              .code == 0);
  REQUIRE(run({"analyze", "--run-dir", rd, "--threshold", "1.0"}).code == 0);
  const auto counts = manifest(dir / "run")["stages"]["analyze"]["counts"];
  for (const char* kind : {"transactions", "sector", "geo"}) {
    CHECK(counts[kind]["arcs_kept"] == counts[kind]["arcs_finalized"]);
    CHECK(counts[kind]["threshold"] == 1.0);
  }
  CHECK(run({"analyze", "--run-dir", rd, "--threshold", "nan"}).code == 1);
  CHECK(run({"analyze", "--run-dir", rd, "--collapse", "median"}).code == 1);
}

TEST_CASE("tampered upstream outputs break the manifest chain") {
  const auto dir = fixture::scratch_dir("cli_tamper");
  small_inputs(dir);
  const auto rd = (dir / "run").string();
  REQUIRE(run({"ingest", "--run-dir", rd, "--ledger",
               (dir / "ledger.csv").string(), "--labels",
               (dir / "labels.csv").string()})
              .code == 0);
  REQUIRE(run({"analyze", "--run-dir", rd}).code == 0);
  std::ofstream(dir / "run" / "analyze" / "features.csv", std::ios::app)
      << "X,1,2,3\n";
  auto r = run({"score", "--run-dir", rd, "--model", "paper:model4"});
  CHECK(r.code == 1);
  CHECK(r.err.find("manifest") != std::string::npos);
}

TEST_CASE("generate writes a reproducible scenario") {
  const auto dir = fixture::scratch_dir("cli_generate");
  auto gen = [&](const std::string& name) {
    return run({"generate", "--run-dir", (dir / name).string(), "--preset",
                "small", "--seed", "11"});
  };
  REQUIRE(gen("a").code == 0);
  REQUIRE(gen("b").code == 0);
  for (const char* f : {"ledger.csv", "labels.csv", "truth.json"}) {
    CHECK(slurp(dir / "a" / "generate" / f) ==
          slurp(dir / "b" / "generate" / f));
  }
  CHECK(run({"generate", "--run-dir", (dir / "c").string(), "--preset",
             "galaxy"})
            .code == 1);
}

TEST_CASE("unknown subcommands and options are usage errors") {
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"ingest", "--run-dir", "x", "--nope"}).code == 1);
  CHECK(run({"--version"}).code == 0);
}
