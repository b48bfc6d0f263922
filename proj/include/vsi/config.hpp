#pragma once

// Run configuration: one JSON document covering the plant, sampling, gain,
// region grid, profile ensemble, and integrator. Parsing resolves every
// default (the dumped form always re-parses to an identical config).

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "vsi/montecarlo.hpp"

namespace vsi {

struct IntegratorConfig {
  double dt_s = kDefaultDt;
  double horizon_s = kDefaultHorizon;
};

struct RunConfig {
  PlantParams plant = PlantParams::reference();
  SamplingConfig sampling;
  Gain gain;  // explicit feedback gain; zero = open loop
  RegionGrid grid{0.0, 8000.0, -2500.0, 200.0, 81, 55};
  std::vector<GridProfile> profiles;  // resolved ensemble
  IntegratorConfig integrator;
  std::string out_dir = "out";

  CheckContext context() const;
  static RunConfig defaults();
};

nlohmann::json to_json(const RunConfig& cfg);
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config_file(const std::filesystem::path& path);

nlohmann::json gain_to_json(const Gain& gain);
Gain gain_from_json(const nlohmann::json& j);

/// Reproducibility record written next to every command's artifacts.
nlohmann::json manifest_json(const RunConfig& cfg, const std::string& command,
                             int threads);

}  // namespace vsi
