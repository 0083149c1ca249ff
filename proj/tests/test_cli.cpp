#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "satsim/cli.hpp"
#include "satsim/config.hpp"

using namespace satsim;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliResult {
  int exit_code;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("satsim_test_" + tag);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// small, fast scenario: tiny blocks, one distance
std::string small_config(const fs::path& dir) {
  const fs::path p = dir / "config.json";
  fs::create_directories(dir);
  std::ofstream f(p);
  f << R"({
    "blocks": {"count": 3, "size": 20000},
    "distances_km": [50.0],
    "seed": 777
  })";
  return p.string();
}

}  // namespace

TEST_CASE("rate subcommand reproduces the reference ratings") {
  const auto dir = temp_dir("rate");
  const auto r = run_cli({"rate", "--expertise", "proficient", "--knowledge", "restricted",
                          "--window", "moderate", "--equipment", "specialized", "--out",
                          dir.string()});
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("AP 14") != std::string::npos);
  CHECK(r.out.find("Moderate") != std::string::npos);

  const auto r2 = run_cli({"rate", "--expertise", "expert", "--knowledge", "restricted",
                           "--window", "difficult", "--equipment", "bespoke", "--out",
                           dir.string()});
  CHECK(r2.exit_code == 0);
  CHECK(r2.out.find("AP 26") != std::string::npos);
  CHECK(r2.out.find("Beyond High") != std::string::npos);
}

TEST_CASE("rate rejects unknown level names with the vocabulary") {
  const auto r = run_cli({"rate", "--expertise", "sorcerer", "--knowledge", "restricted",
                          "--window", "moderate", "--equipment", "specialized"});
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("unknown expertise level") != std::string::npos);
  CHECK(r.err.find("proficient") != std::string::npos);

  const auto missing = run_cli({"rate", "--expertise", "expert"});
  CHECK(missing.exit_code == 1);
}

TEST_CASE("rate catalog file") {
  const auto dir = temp_dir("catalog");
  fs::create_directories(dir);
  const fs::path cat = dir / "catalog.json";
  {
    std::ofstream f(cat);
    f << R"({"attacks": [
      {"name": "coherent displacement", "expertise": "expert", "knowledge": "restricted",
       "window": "difficult", "equipment": "bespoke"},
      {"name": "incoherent injection", "expertise": "proficient", "knowledge": "restricted",
       "window": "moderate", "equipment": "specialized"}
    ]})";
  }
  const auto r = run_cli({"rate", "--catalog", cat.string(), "--out", dir.string()});
  CHECK(r.exit_code == 0);
  // priority order: lowest attack potential first
  CHECK(r.out.find("incoherent injection") < r.out.find("coherent displacement"));

  const json doc = json::parse(slurp(dir / "rating.json"));
  REQUIRE(doc.at("rows").size() == 2);
  CHECK(doc.at("rows")[0].at("attack_potential").get<int>() == 14);
  CHECK(doc.at("rows")[1].at("attack_potential").get<int>() == 26);
}

TEST_CASE("threshold subcommand proves the bracket") {
  const auto dir = temp_dir("threshold");
  const auto r = run_cli({"threshold", "--distance-km", "50", "--out", dir.string()});
  CHECK(r.exit_code == 0);
  const json row = json::parse(r.out);
  CHECK(row.at("xi_null").get<double>() > 0.0);
  CHECK(row.at("k_below").get<double>() > 0.0);
  CHECK(row.at("k_above").get<double>() < 0.0);
}

TEST_CASE("sweep row count follows the range arithmetic") {
  const auto dir = temp_dir("sweep");
  const auto r = run_cli({"sweep", "--from-km", "50", "--to-km", "60", "--step-km", "5", "--out",
                          dir.string(), "--format", "both"});
  CHECK(r.exit_code == 0);
  const json doc = json::parse(slurp(dir / "results.json"));
  CHECK(doc.at("rows").size() == 3);

  // CSV: comment header, column header, then one line per row
  std::istringstream csv(slurp(dir / "results.csv"));
  std::string line;
  int lines = 0;
  while (std::getline(csv, line)) ++lines;
  CHECK(lines == 2 + 3);
}

TEST_CASE("simulate is deterministic and cross-format consistent") {
  const auto dir1 = temp_dir("sim1");
  const auto dir2 = temp_dir("sim2");
  const auto cfg = small_config(temp_dir("simcfg"));

  const auto r1 = run_cli({"simulate", "--config", cfg, "--out", dir1.string(), "--threads", "1"});
  REQUIRE(r1.exit_code == 0);
  const auto r2 = run_cli({"simulate", "--config", cfg, "--out", dir2.string(), "--threads", "4"});
  REQUIRE(r2.exit_code == 0);

  const std::string csv1 = slurp(dir1 / "results.csv");
  const std::string csv2 = slurp(dir2 / "results.csv");
  CHECK(csv1 == csv2);  // byte-identical across runs and thread counts

  // identical values in both formats
  const json doc = json::parse(slurp(dir1 / "results.json"));
  REQUIRE(doc.at("rows").size() == 1);
  const auto& row = doc.at("rows")[0];
  std::istringstream csv(csv1);
  std::string comment, header, data;
  std::getline(csv, comment);
  std::getline(csv, header);
  std::getline(csv, data);
  std::vector<std::string> cols, cells;
  {
    std::istringstream hs(header);
    for (std::string tok; std::getline(hs, tok, ',');) cols.push_back(tok);
  }
  {
    std::istringstream ds(data);
    for (std::string tok; std::getline(ds, tok, ',');) cells.push_back(tok);
  }
  REQUIRE(cols.size() == cells.size());
  for (std::size_t i = 0; i < cols.size(); ++i) {
    const auto& v = row.at(cols[i]);
    if (v.is_number()) {
      CHECK(std::stod(cells[i]) == v.get<double>());
    }
  }

  // reproducibility header carries seed and config hash
  CHECK(comment.find("seed=777") != std::string::npos);
  CHECK(comment.find("config_hash=0x") != std::string::npos);
}

TEST_CASE("optimize reports infeasibility as a result, not an error") {
  const auto dir = temp_dir("coh");
  // coherent defaults are phase-noise limited: infeasible, exit code 0
  const auto r = run_cli({"optimize", "--distance-km", "50", "--strategy", "coherent", "--out",
                          dir.string()});
  CHECK(r.exit_code == 0);
  const json row = json::parse(r.out);
  CHECK(row.at("feasible").get<bool>() == false);
  CHECK_FALSE(row.at("reason").get<std::string>().empty());

  // far beyond any positive-key distance: still a result row
  const auto r2 = run_cli({"optimize", "--distance-km", "300", "--out", dir.string()});
  CHECK(r2.exit_code == 0);
  const json row2 = json::parse(r2.out);
  CHECK(row2.at("feasible").get<bool>() == false);
}

TEST_CASE("invalid config never writes outputs") {
  const auto dir = temp_dir("invalid");
  fs::create_directories(dir);
  const fs::path cfg = dir / "bad.json";
  {
    std::ofstream f(cfg);
    f << R"({"protocol": {"eta_b": 1.7}})";
  }
  const auto r = run_cli({"simulate", "--config", cfg.string(), "--out", (dir / "out").string()});
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("protocol") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "out" / "results.csv"));
  CHECK_FALSE(fs::exists(dir / "out" / "results.json"));
}

TEST_CASE("unknown config fields are reported with their path") {
  const auto dir = temp_dir("unknown");
  fs::create_directories(dir);
  const fs::path cfg = dir / "typo.json";
  {
    std::ofstream f(cfg);
    f << R"({"protocol": {"va": 19.0}})";
  }
  const auto r = run_cli({"simulate", "--config", cfg.string(), "--out", (dir / "out").string()});
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("protocol.va") != std::string::npos);
}

TEST_CASE("config round trip through canonical json") {
  const auto cfg = config::default_config();
  const auto text = config::canonical_json(cfg);
  const auto parsed = config::parse_config_text(text);
  CHECK(config::canonical_json(parsed) == text);
  CHECK(config::config_hash(parsed) == config::config_hash(cfg));
}
