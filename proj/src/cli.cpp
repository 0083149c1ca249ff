#include "satsim/cli.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "satsim/config.hpp"
#include "satsim/rating_json.hpp"

namespace satsim::cli {

namespace {

using nlohmann::json;

constexpr const char* kVersion = SATSIM_VERSION;

struct CommonOptions {
  std::string config_path;
  std::string out_dir = "satsim-out";
  std::string format = "both";  // csv|json|both
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> strategy;
};

void add_common(CLI::App* sub, CommonOptions& opts, bool with_strategy) {
  sub->add_option("--config", opts.config_path, "JSON config file (defaults: built-in reference scenario)");
  sub->add_option("--out", opts.out_dir, "output directory")->capture_default_str();
  sub->add_option("--format", opts.format, "output format: csv|json|both")
      ->check(CLI::IsMember({"csv", "json", "both"}))
      ->capture_default_str();
  sub->add_option("--seed", opts.seed, "master seed override");
  sub->add_option("--threads", opts.threads, "worker threads (0 = hardware)");
  if (with_strategy) {
    sub->add_option("--strategy", opts.strategy, "attack strategy: coherent|incoherent")
        ->check(CLI::IsMember({"coherent", "incoherent"}));
  }
}

config::ExperimentConfig load(const CommonOptions& opts) {
  config::ExperimentConfig cfg =
      opts.config_path.empty() ? config::default_config() : config::load_config(opts.config_path);
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.threads) cfg.threads = *opts.threads;
  if (opts.strategy) cfg.scenario.attack.strategy = attack::strategy_from_string(*opts.strategy);
  config::validate(cfg);
  return cfg;
}

// One textual form per value, shared by the CSV and JSON writers so the two
// formats always encode identical numbers. Strings are quoted only when a
// CSV metacharacter forces it.
std::string cell_text(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    quoted += '"';
    return quoted;
  }
  return v.dump();
}

json meta_for(const config::ExperimentConfig& cfg, const std::string& subcommand) {
  std::ostringstream hash;
  hash << "0x" << std::hex << std::setfill('0') << std::setw(16) << config::config_hash(cfg);
  return json{{"tool", "satsim"},
              {"version", kVersion},
              {"subcommand", subcommand},
              {"seed", cfg.seed},
              {"config_hash", hash.str()},
              {"strategy", attack::to_string(cfg.scenario.attack.strategy)}};
}

// Outputs are assembled fully in memory and written in one shot, so a failing
// run never leaves a partial file behind.
void write_outputs(const CommonOptions& opts, const json& meta,
                   const std::vector<std::string>& columns, const json& rows,
                   const std::string& stem) {
  std::filesystem::create_directories(opts.out_dir);
  const auto path = [&](const char* ext) {
    return std::filesystem::path(opts.out_dir) / (stem + ext);
  };
  if (opts.format == "json" || opts.format == "both") {
    json doc{{"meta", meta}, {"rows", rows}};
    std::ofstream f(path(".json"), std::ios::binary);
    f << doc.dump(2) << "\n";
    if (!f) throw std::runtime_error("failed to write " + path(".json").string());
  }
  if (opts.format == "csv" || opts.format == "both") {
    std::ostringstream csv;
    csv << "# " << meta.at("tool").get<std::string>() << " " << meta.at("version").get<std::string>()
        << " subcommand=" << meta.at("subcommand").get<std::string>()
        << " strategy=" << meta.at("strategy").get<std::string>()
        << " seed=" << meta.at("seed") << " config_hash=" << meta.at("config_hash").get<std::string>()
        << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) {
      csv << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    }
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < columns.size(); ++i) {
        csv << cell_text(row.at(columns[i])) << (i + 1 < columns.size() ? "," : "\n");
      }
    }
    std::ofstream f(path(".csv"), std::ios::binary);
    f << csv.str();
    if (!f) throw std::runtime_error("failed to write " + path(".csv").string());
  }
}

const std::vector<std::string> kResultColumns = {
    "d_km", "t", "v_a", "delta", "gain", "t_sat", "t_sat_std", "xi_sat", "xi_sat_std",
    "xi_null", "k_attack", "k_honest", "feasible"};

json solution_row(const optimizer::AttackSolution& sol,
                  const std::optional<optimizer::MonteCarloCheck>& mc,
                  const config::ExperimentConfig& cfg) {
  json row{{"d_km", sol.d_km},         {"t", sol.t_true},       {"v_a", sol.v_a},
           {"delta", sol.delta},       {"gain", sol.gain},      {"t_sat", sol.t_sat},
           {"t_sat_std", nullptr},     {"xi_sat", sol.xi_sat},  {"xi_sat_std", nullptr},
           {"xi_null", sol.xi_null},   {"k_attack", sol.key_rate},
           {"k_honest", sol.key_rate_honest},                   {"feasible", sol.feasible}};
  if (mc) {
    const auto& est = mc->estimate;
    row["t_sat"] = est.t_sat;
    row["t_sat_std"] = est.std_t;
    row["xi_sat"] = est.xi_sat;
    row["xi_sat_std"] = est.std_xi;
    const double k = security::key_rate({sol.v_a, std::min(est.t_sat, 1.0),
                                         std::max(est.xi_sat, 0.0), cfg.scenario.protocol.eta_b,
                                         cfg.scenario.protocol.v_ele, cfg.scenario.beta});
    row["k_attack"] = k;
    row["feasible"] = sol.feasible && mc->confirmed;
  }
  return row;
}

json sweep_rows(const std::vector<double>& distances, const config::ExperimentConfig& cfg,
                bool monte_carlo, std::ostream& out) {
  json rows = json::array();
  const auto strategy = cfg.scenario.attack.strategy;
  for (std::size_t i = 0; i < distances.size(); ++i) {
    const double d = distances[i];
    const auto sol = optimizer::optimize_attack(d, strategy, cfg.conditions, cfg.scenario, cfg.search);
    std::optional<optimizer::MonteCarloCheck> mc;
    if (monte_carlo && sol.feasible) {
      // Substream keyed on the distance value, so running a subset of the
      // distances reproduces exactly the same rows.
      std::uint64_t key = 0;
      std::memcpy(&key, &d, sizeof(key));
      const std::uint64_t row_seed = Rng::derive_stream(cfg.seed, key);
      mc = optimizer::verify_solution_monte_carlo(sol, cfg.scenario, cfg.conditions, cfg.blocks.count,
                                                  cfg.blocks.size, row_seed, cfg.threads);
    }
    rows.push_back(solution_row(sol, mc, cfg));
    out << "d=" << d << " km: " << (rows.back()["feasible"].get<bool>() ? "feasible" : "infeasible");
    if (!sol.feasible) out << " (" << sol.report.reason << ")";
    out << "\n";
  }
  return rows;
}

int cmd_simulate(const CommonOptions& opts, const std::vector<double>& cli_distances,
                 std::ostream& out) {
  config::ExperimentConfig cfg = load(opts);
  const auto distances = cli_distances.empty() ? cfg.distances_km : cli_distances;
  json rows = sweep_rows(distances, cfg, cfg.monte_carlo, out);
  write_outputs(opts, meta_for(cfg, "simulate"), kResultColumns, rows, "results");
  out << "wrote " << rows.size() << " row(s) to " << opts.out_dir << "\n";
  return 0;
}

int cmd_optimize(const CommonOptions& opts, double d_km, std::ostream& out) {
  config::ExperimentConfig cfg = load(opts);
  const auto sol = optimizer::optimize_attack(d_km, cfg.scenario.attack.strategy, cfg.conditions,
                                              cfg.scenario, cfg.search);
  json row = solution_row(sol, std::nullopt, cfg);
  row["reason"] = sol.report.reason;
  out << row.dump(2) << "\n";
  auto columns = kResultColumns;
  columns.push_back("reason");
  write_outputs(opts, meta_for(cfg, "optimize"), columns, json::array({row}), "results");
  return 0;
}

int cmd_sweep(const CommonOptions& opts, double from_km, double to_km, double step_km,
              bool verify, std::ostream& out) {
  if (!(step_km > 0.0) || to_km < from_km) {
    throw std::invalid_argument("sweep: need from-km <= to-km and step-km > 0");
  }
  config::ExperimentConfig cfg = load(opts);
  std::vector<double> distances;
  for (double d = from_km; d <= to_km + 1e-9; d += step_km) distances.push_back(d);
  json rows = sweep_rows(distances, cfg, verify, out);
  write_outputs(opts, meta_for(cfg, "sweep"), kResultColumns, rows, "results");
  out << "wrote " << rows.size() << " row(s) to " << opts.out_dir << "\n";
  return 0;
}

int cmd_threshold(const CommonOptions& opts, double d_km, std::ostream& out) {
  config::ExperimentConfig cfg = load(opts);
  const auto& p = cfg.scenario.protocol;
  const double t = protocol::distance_to_transmittance(d_km, cfg.scenario.loss_db_per_km);
  const double v_a = security::optimal_v_a(t, p.eta_b, p.v_ele, cfg.scenario.beta,
                                           cfg.scenario.xi_nominal);
  const double xi_null = security::null_key_threshold(t, v_a, p.eta_b, p.v_ele, cfg.scenario.beta);
  // bracket proof: the key rate straddles zero around the root
  const double k_below = security::key_rate({v_a, t, std::max(xi_null - 1e-5, 0.0), p.eta_b, p.v_ele,
                                             cfg.scenario.beta});
  const double k_above = security::key_rate({v_a, t, xi_null + 1e-5, p.eta_b, p.v_ele,
                                             cfg.scenario.beta});
  json row{{"d_km", d_km},      {"t", t},           {"v_a", v_a},
           {"xi_null", xi_null}, {"k_below", k_below}, {"k_above", k_above}};
  out << row.dump(2) << "\n";
  write_outputs(opts, meta_for(cfg, "threshold"),
                {"d_km", "t", "v_a", "xi_null", "k_below", "k_above"}, json::array({row}),
                "threshold");
  return 0;
}

struct RateOptions {
  std::string catalog_path;
  std::string name = "attack";
  std::string expertise, knowledge, window, equipment;
  std::string notes;
};

int cmd_rate(const CommonOptions& opts, const RateOptions& ropts, std::ostream& out) {
  std::vector<rating::CatalogEntry> entries;
  if (!ropts.catalog_path.empty()) {
    entries = rating::load_catalog(ropts.catalog_path);
  } else {
    rating::FactorLevels f;
    f.expertise = rating::expertise_from_string(ropts.expertise);
    f.knowledge = rating::knowledge_from_string(ropts.knowledge);
    f.window = rating::window_from_string(ropts.window);
    f.equipment = rating::equipment_from_string(ropts.equipment);
    entries.push_back({ropts.name, f, ropts.notes});
  }
  const auto sheets = rating::rate_catalog(entries);
  json rows = json::array();
  for (const auto& sheet : sheets) {
    rows.push_back(rating::to_json(sheet));
    out << sheet.attack_name << ": AP " << sheet.attack_potential << " -> "
        << rating::to_string(sheet.severity);
    if (sheet.unbounded_equipment) out << " (quantum equipment: unbounded)";
    out << "\n";
  }
  config::ExperimentConfig cfg = load(opts);  // meta header only
  write_outputs(opts, meta_for(cfg, "rate"),
                {"name", "expertise", "knowledge", "window", "equipment", "attack_potential",
                 "severity", "unbounded_equipment", "notes"},
                rows, "rating");
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"saturation-attack simulator, optimizer and attack-rating calculator for GMCS CV-QKD"};
  app.name("satsim");
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  CommonOptions sim_opts, opt_opts, sweep_opts, thr_opts, rate_common;
  std::vector<double> sim_distances;
  double opt_distance = 50.0;
  double from_km = 35.0, to_km = 100.0, step_km = 5.0;
  bool verify = false;
  double thr_distance = 50.0;
  RateOptions rate_opts;

  auto* sim = app.add_subcommand("simulate", "optimize and Monte Carlo verify the configured distances");
  add_common(sim, sim_opts, true);
  sim->add_option("--distance-km", sim_distances, "distance(s) to simulate (default: config list)");

  auto* opt = app.add_subcommand("optimize", "search attack parameters at one distance");
  add_common(opt, opt_opts, true);
  opt->add_option("--distance-km", opt_distance, "transmission distance")->required();

  auto* swp = app.add_subcommand("sweep", "optimize across a range of distances");
  add_common(swp, sweep_opts, true);
  swp->add_option("--from-km", from_km, "first distance")->capture_default_str();
  swp->add_option("--to-km", to_km, "last distance")->capture_default_str();
  swp->add_option("--step-km", step_km, "distance step")->capture_default_str();
  swp->add_flag("--verify", verify, "Monte Carlo verify feasible solutions");

  auto* thr = app.add_subcommand("threshold", "null-key excess-noise threshold at one distance");
  add_common(thr, thr_opts, false);
  thr->add_option("--distance-km", thr_distance, "transmission distance")->required();

  auto* rate = app.add_subcommand("rate", "Common Criteria attack-potential rating");
  add_common(rate, rate_common, false);
  rate->add_option("--catalog", rate_opts.catalog_path, "JSON catalog of attacks to rate");
  rate->add_option("--name", rate_opts.name, "attack name")->capture_default_str();
  rate->add_option("--expertise", rate_opts.expertise, "laymen|proficient|expert|multiple-experts");
  rate->add_option("--knowledge", rate_opts.knowledge, "public|restricted|sensitive|critical");
  rate->add_option("--window", rate_opts.window, "unnecessary|easy|moderate|difficult");
  rate->add_option("--equipment", rate_opts.equipment, "standard|specialized|bespoke|multiple-bespoke|quantum");
  rate->add_option("--notes", rate_opts.notes, "free-text notes");

  std::vector<std::string> argv_strings;
  argv_strings.push_back("satsim");
  argv_strings.insert(argv_strings.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(argv_strings.size());
  for (const auto& s : argv_strings) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (sim->parsed()) return cmd_simulate(sim_opts, sim_distances, out);
    if (opt->parsed()) return cmd_optimize(opt_opts, opt_distance, out);
    if (swp->parsed()) return cmd_sweep(sweep_opts, from_km, to_km, step_km, verify, out);
    if (thr->parsed()) return cmd_threshold(thr_opts, thr_distance, out);
    if (rate->parsed()) {
      if (rate_opts.catalog_path.empty() &&
          (rate_opts.expertise.empty() || rate_opts.knowledge.empty() ||
           rate_opts.window.empty() || rate_opts.equipment.empty())) {
        throw std::invalid_argument(
            "rate: provide --catalog or all of --expertise --knowledge --window --equipment");
      }
      return cmd_rate(rate_common, rate_opts, out);
    }
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace satsim::cli
