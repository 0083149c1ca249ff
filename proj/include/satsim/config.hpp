#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "satsim/optimizer.hpp"

namespace satsim::config {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BlockSettings {
  std::size_t count = 10;
  std::size_t size = 10'000'000;
};

// Master experiment description, mirroring the module parameter types. The
// built-in defaults pin every calibrated constant (detection limits from the
// -2.5 V / +3.3 V electronics, the fitted strategy-noise coefficients, beta,
// eta_B, v_ele), so runs without a config file reproduce the reference
// scenario end to end.
struct ExperimentConfig {
  optimizer::Scenario scenario{};
  optimizer::SuccessConditions conditions{};
  optimizer::SearchSettings search{};
  BlockSettings blocks{};
  std::vector<double> distances_km{35.0, 50.0, 80.0};
  std::uint64_t seed = 20250809;
  int threads = 0;           // 0 = hardware concurrency
  bool monte_carlo = true;   // simulate verifies solutions with block Monte Carlo
  snu::ShotNoiseCalibration calibration{};
};

ExperimentConfig default_config();

// Parse JSON text over the defaults; unknown keys and type mismatches are
// reported with their dotted field path. The merged result is validated.
ExperimentConfig parse_config_text(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

void validate(const ExperimentConfig& cfg);

// Canonical serialization (sorted keys); two configs with equal canonical
// form behave identically. The hash goes into every output header.
std::string canonical_json(const ExperimentConfig& cfg);
std::uint64_t config_hash(const ExperimentConfig& cfg);

}  // namespace satsim::config
