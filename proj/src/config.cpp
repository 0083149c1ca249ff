#include "satsim/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace satsim::config {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected a boolean");
  return j.get<bool>();
}

std::uint64_t as_u64(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    fail(path, "expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

// Walks an object section, dispatching known keys and rejecting unknown ones.
template <typename Handler>
void walk_object(const json& j, const std::string& path, Handler&& handle) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!handle(key, value)) fail(path + "." + key, "unknown field");
  }
}

void apply_protocol(const json& j, ExperimentConfig& cfg) {
  walk_object(j, "protocol", [&](const std::string& k, const json& v) {
    auto& p = cfg.scenario.protocol;
    if (k == "v_a") p.v_a = as_number(v, "protocol.v_a");
    else if (k == "eta_b") p.eta_b = as_number(v, "protocol.eta_b");
    else if (k == "v_ele") p.v_ele = as_number(v, "protocol.v_ele");
    else if (k == "xi_channel") p.xi_channel = as_number(v, "protocol.xi_channel");
    else return false;
    return true;
  });
}

void apply_detector(const json& j, ExperimentConfig& cfg) {
  bool volts_seen = false, snu_seen = false;
  double a1_volts = 0, a2_volts = 0, a1_snu = 0, a2_snu = 0;
  walk_object(j, "detector", [&](const std::string& k, const json& v) {
    if (k == "volts_per_sqrt_n0") {
      cfg.calibration.volts_per_sqrt_n0 = as_number(v, "detector.volts_per_sqrt_n0");
    } else if (k == "alpha1_volts") {
      a1_volts = as_number(v, "detector.alpha1_volts");
      volts_seen = true;
    } else if (k == "alpha2_volts") {
      a2_volts = as_number(v, "detector.alpha2_volts");
      volts_seen = true;
    } else if (k == "alpha1_snu") {
      a1_snu = as_number(v, "detector.alpha1_snu");
      snu_seen = true;
    } else if (k == "alpha2_snu") {
      a2_snu = as_number(v, "detector.alpha2_snu");
      snu_seen = true;
    } else {
      return false;
    }
    return true;
  });
  if (volts_seen && snu_seen) fail("detector", "specify limits in volts or in SNU, not both");
  if (volts_seen) {
    if (!j.contains("alpha1_volts") || !j.contains("alpha2_volts")) {
      fail("detector", "both alpha1_volts and alpha2_volts are required");
    }
    cfg.scenario.protocol.limits.alpha1 = snu::volts_to_snu(a1_volts, cfg.calibration);
    cfg.scenario.protocol.limits.alpha2 = snu::volts_to_snu(a2_volts, cfg.calibration);
  } else if (snu_seen) {
    if (!j.contains("alpha1_snu") || !j.contains("alpha2_snu")) {
      fail("detector", "both alpha1_snu and alpha2_snu are required");
    }
    cfg.scenario.protocol.limits.alpha1 = a1_snu;
    cfg.scenario.protocol.limits.alpha2 = a2_snu;
  }
}

void apply_attack(const json& j, ExperimentConfig& cfg) {
  bool incoherent_eta_set = false;
  walk_object(j, "attack", [&](const std::string& k, const json& v) {
    auto& a = cfg.scenario.attack;
    if (k == "strategy") a.strategy = attack::strategy_from_string(as_string(v, "attack.strategy"));
    else if (k == "delta") a.delta = as_number(v, "attack.delta");
    else if (k == "gain") a.gain = as_number(v, "attack.gain");
    else if (k == "tech_noise") a.tech_noise = as_number(v, "attack.tech_noise");
    else if (k == "toward_upper_limit") a.toward_upper_limit = as_bool(v, "attack.toward_upper_limit");
    else if (k == "coherent") {
      walk_object(v, "attack.coherent", [&](const std::string& ck, const json& cv) {
        auto& m = a.coherent;
        if (ck == "drift_rate_rad_per_s") m.drift_rate_rad_per_s = as_number(cv, "attack.coherent.drift_rate_rad_per_s");
        else if (ck == "latency_s") m.latency_s = as_number(cv, "attack.coherent.latency_s");
        else if (ck == "quad_coeff") m.quad_coeff = as_number(cv, "attack.coherent.quad_coeff");
        else return false;
        return true;
      });
    } else if (k == "incoherent") {
      walk_object(v, "attack.incoherent", [&](const std::string& ik, const json& iv) {
        auto& m = a.incoherent;
        if (ik == "lin_coeff") m.lin_coeff = as_number(iv, "attack.incoherent.lin_coeff");
        else if (ik == "eta_b") {
          m.eta_b = as_number(iv, "attack.incoherent.eta_b");
          incoherent_eta_set = true;
        } else if (ik == "i_lo_photons_per_pulse") m.i_lo = as_number(iv, "attack.incoherent.i_lo_photons_per_pulse");
        else if (ik == "t_bs") m.t_bs = as_number(iv, "attack.incoherent.t_bs");
        else return false;
        return true;
      });
    } else {
      return false;
    }
    return true;
  });
  if (!incoherent_eta_set) cfg.scenario.attack.incoherent.eta_b = cfg.scenario.protocol.eta_b;
}

void apply_success(const json& j, ExperimentConfig& cfg) {
  walk_object(j, "success", [&](const std::string& k, const json& v) {
    auto& c = cfg.conditions;
    if (k == "require_t_match") c.require_t_match = as_bool(v, "success.require_t_match");
    else if (k == "t_tolerance") c.t_tolerance = as_number(v, "success.t_tolerance");
    else if (k == "require_xi_below_null") c.require_xi_below_null = as_bool(v, "success.require_xi_below_null");
    else if (k == "require_positive_key") c.require_positive_key = as_bool(v, "success.require_positive_key");
    else return false;
    return true;
  });
}

void apply_search(const json& j, ExperimentConfig& cfg) {
  walk_object(j, "search", [&](const std::string& k, const json& v) {
    auto& s = cfg.search;
    if (k == "grid_delta") s.grid_delta = as_int(v, "search.grid_delta");
    else if (k == "grid_g") s.grid_g = as_int(v, "search.grid_g");
    else if (k == "g_min") s.g_min = as_number(v, "search.g_min");
    else if (k == "g_max") s.g_max = as_number(v, "search.g_max");
    else if (k == "delta_max_factor") s.delta_max_factor = as_number(v, "search.delta_max_factor");
    else if (k == "refine_tol") s.refine_tol = as_number(v, "search.refine_tol");
    else if (k == "max_sweeps") s.max_sweeps = as_int(v, "search.max_sweeps");
    else if (k == "gh_order") s.quadrature.order = as_int(v, "search.gh_order");
    else if (k == "gh_check_order") s.quadrature.check_order = as_int(v, "search.gh_check_order");
    else return false;
    return true;
  });
}

}  // namespace

ExperimentConfig default_config() { return ExperimentConfig{}; }

ExperimentConfig parse_config_text(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& ex) {
    throw ConfigError(std::string("config is not valid JSON: ") + ex.what());
  }
  ExperimentConfig cfg = default_config();
  walk_object(j, "config", [&](const std::string& k, const json& v) {
    if (k == "protocol") apply_protocol(v, cfg);
    else if (k == "detector") apply_detector(v, cfg);
    else if (k == "attack") apply_attack(v, cfg);
    else if (k == "security") {
      walk_object(v, "security", [&](const std::string& sk, const json& sv) {
        if (sk == "beta") cfg.scenario.beta = as_number(sv, "security.beta");
        else return false;
        return true;
      });
    } else if (k == "channel") {
      walk_object(v, "channel", [&](const std::string& ck, const json& cv) {
        if (ck == "loss_db_per_km") cfg.scenario.loss_db_per_km = as_number(cv, "channel.loss_db_per_km");
        else if (ck == "xi_nominal") cfg.scenario.xi_nominal = as_number(cv, "channel.xi_nominal");
        else return false;
        return true;
      });
    } else if (k == "success") apply_success(v, cfg);
    else if (k == "search") apply_search(v, cfg);
    else if (k == "blocks") {
      walk_object(v, "blocks", [&](const std::string& bk, const json& bv) {
        if (bk == "count") cfg.blocks.count = as_u64(bv, "blocks.count");
        else if (bk == "size") cfg.blocks.size = as_u64(bv, "blocks.size");
        else return false;
        return true;
      });
    } else if (k == "distances_km") {
      if (!v.is_array()) fail("distances_km", "expected an array of numbers");
      cfg.distances_km.clear();
      for (std::size_t i = 0; i < v.size(); ++i) {
        cfg.distances_km.push_back(as_number(v[i], "distances_km[" + std::to_string(i) + "]"));
      }
    } else if (k == "seed") cfg.seed = as_u64(v, "seed");
    else if (k == "threads") cfg.threads = as_int(v, "threads");
    else if (k == "monte_carlo") cfg.monte_carlo = as_bool(v, "monte_carlo");
    else return false;
    return true;
  });
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

void validate(const ExperimentConfig& cfg) {
  auto wrap = [](const char* section, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& ex) {
      throw ConfigError(std::string(section) + ": " + ex.what());
    }
  };
  wrap("protocol", [&] { cfg.scenario.protocol.validate(); });
  wrap("detector", [&] {
    cfg.calibration.validate();
    cfg.scenario.protocol.limits.validate_detector();
  });
  wrap("attack", [&] { cfg.scenario.attack.validate(); });
  wrap("success", [&] { cfg.conditions.validate(); });
  wrap("security", [&] {
    if (!(cfg.scenario.beta > 0.0 && cfg.scenario.beta <= 1.0)) {
      throw std::invalid_argument("beta must be in (0, 1]");
    }
  });
  wrap("channel", [&] {
    if (!(cfg.scenario.loss_db_per_km > 0.0)) throw std::invalid_argument("loss_db_per_km must be > 0");
    if (!(cfg.scenario.xi_nominal >= 0.0)) throw std::invalid_argument("xi_nominal must be >= 0");
  });
  wrap("search", [&] {
    const auto& s = cfg.search;
    if (s.grid_delta < 2 || s.grid_g < 2) throw std::invalid_argument("grid sizes must be >= 2");
    if (!(s.g_min > 0.0 && s.g_min < s.g_max)) throw std::invalid_argument("need 0 < g_min < g_max");
    if (!(s.delta_max_factor > 0.0)) throw std::invalid_argument("delta_max_factor must be > 0");
    if (!(s.refine_tol > 0.0)) throw std::invalid_argument("refine_tol must be > 0");
    if (s.max_sweeps < 1) throw std::invalid_argument("max_sweeps must be >= 1");
    if (s.quadrature.order < 2 || s.quadrature.check_order <= s.quadrature.order) {
      throw std::invalid_argument("need gh_check_order > gh_order >= 2");
    }
  });
  wrap("blocks", [&] {
    if (cfg.blocks.count < 2) throw std::invalid_argument("count must be >= 2");
    if (cfg.blocks.size < 2) throw std::invalid_argument("size must be >= 2");
  });
  wrap("distances_km", [&] {
    for (double d : cfg.distances_km) {
      if (!(d >= 0.0) || !std::isfinite(d)) throw std::invalid_argument("distances must be finite and >= 0");
    }
  });
  wrap("threads", [&] {
    if (cfg.threads < 0) throw std::invalid_argument("threads must be >= 0");
  });
}

std::string canonical_json(const ExperimentConfig& cfg) {
  const auto& p = cfg.scenario.protocol;
  const auto& a = cfg.scenario.attack;
  json j = {
      {"protocol", {{"v_a", p.v_a}, {"eta_b", p.eta_b}, {"v_ele", p.v_ele}, {"xi_channel", p.xi_channel}}},
      {"detector",
       {{"volts_per_sqrt_n0", cfg.calibration.volts_per_sqrt_n0},
        {"alpha1_snu", p.limits.alpha1},
        {"alpha2_snu", p.limits.alpha2}}},
      {"attack",
       {{"strategy", attack::to_string(a.strategy)},
        {"delta", a.delta},
        {"gain", a.gain},
        {"tech_noise", a.tech_noise},
        {"toward_upper_limit", a.toward_upper_limit},
        {"coherent",
         {{"drift_rate_rad_per_s", a.coherent.drift_rate_rad_per_s},
          {"latency_s", a.coherent.latency_s},
          {"quad_coeff", a.coherent.quad_coeff}}},
        {"incoherent",
         {{"lin_coeff", a.incoherent.lin_coeff},
          {"eta_b", a.incoherent.eta_b},
          {"i_lo_photons_per_pulse", a.incoherent.i_lo},
          {"t_bs", a.incoherent.t_bs}}}}},
      {"security", {{"beta", cfg.scenario.beta}}},
      {"channel", {{"loss_db_per_km", cfg.scenario.loss_db_per_km}, {"xi_nominal", cfg.scenario.xi_nominal}}},
      {"success",
       {{"require_t_match", cfg.conditions.require_t_match},
        {"t_tolerance", cfg.conditions.t_tolerance},
        {"require_xi_below_null", cfg.conditions.require_xi_below_null},
        {"require_positive_key", cfg.conditions.require_positive_key}}},
      {"search",
       {{"grid_delta", cfg.search.grid_delta},
        {"grid_g", cfg.search.grid_g},
        {"g_min", cfg.search.g_min},
        {"g_max", cfg.search.g_max},
        {"delta_max_factor", cfg.search.delta_max_factor},
        {"refine_tol", cfg.search.refine_tol},
        {"max_sweeps", cfg.search.max_sweeps},
        {"gh_order", cfg.search.quadrature.order},
        {"gh_check_order", cfg.search.quadrature.check_order}}},
      {"blocks", {{"count", cfg.blocks.count}, {"size", cfg.blocks.size}}},
      {"distances_km", cfg.distances_km},
      {"seed", cfg.seed},
      {"monte_carlo", cfg.monte_carlo},
  };
  // threads is a scheduling knob, not part of the experiment identity, so it
  // stays out of the canonical form and the hash.
  return j.dump(2);
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  // FNV-1a, stable across platforms.
  const std::string text = canonical_json(cfg);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace satsim::config
