#include "vsi/config.hpp"

#include <fstream>
#include <stdexcept>

#include "vsi/version.hpp"

namespace vsi {

using nlohmann::json;

namespace {

std::array<double, 2> pair_from(const json& j, const char* key) {
  const auto& a = j.at(key);
  if (!a.is_array() || a.size() != 2)
    throw std::invalid_argument(std::string("config: ") + key + " must be [lo, hi]");
  return {a[0].get<double>(), a[1].get<double>()};
}

json profile_to_json(const GridProfile& p) {
  json j;
  j["label"] = p.label();
  switch (p.kind()) {
    case GridProfile::Kind::kConstant:
      j["kind"] = "constant";
      j["value_v"] = p.value();
      break;
    case GridProfile::Kind::kSinusoid:
      j["kind"] = "sinusoid";
      j["mean_v"] = p.mean();
      j["amplitude_v"] = p.amplitude();
      j["period_s"] = p.period();
      break;
    case GridProfile::Kind::kRandomWalk:
      j["kind"] = "random_walk";
      j["step_v"] = p.step();
      j["dt_s"] = p.walk_dt();
      j["seed"] = p.seed();
      break;
  }
  return j;
}

GridProfile profile_from_json(const json& j, const PlantParams& plant,
                              double default_dt, const std::string& default_label) {
  const std::string kind = j.at("kind").get<std::string>();
  const std::string label = j.value("label", default_label);
  const double lo = plant.vg_lo_v;
  const double hi = plant.vg_hi_v;
  if (kind == "constant")
    return GridProfile::constant(j.at("value_v").get<double>(), lo, hi, label);
  if (kind == "sinusoid")
    return GridProfile::sinusoid(j.at("mean_v").get<double>(),
                                 j.at("amplitude_v").get<double>(),
                                 j.at("period_s").get<double>(), lo, hi, label);
  if (kind == "random_walk")
    return GridProfile::random_walk(j.at("step_v").get<double>(),
                                    j.value("dt_s", default_dt),
                                    j.value("seed", std::uint64_t{1}), lo, hi, label);
  throw std::invalid_argument("config: unknown profile kind: " + kind);
}

}  // namespace

CheckContext RunConfig::context() const {
  CheckContext ctx;
  ctx.params = plant;
  ctx.ensemble = profiles;
  ctx.dt = integrator.dt_s;
  ctx.horizon = integrator.horizon_s;
  return ctx;
}

RunConfig RunConfig::defaults() {
  RunConfig cfg;
  cfg.profiles = default_ensemble(cfg.plant, cfg.integrator.dt_s);
  return cfg;
}

json gain_to_json(const Gain& gain) {
  return json::array({json::array({gain.k.a, gain.k.b}), json::array({gain.k.c, gain.k.d})});
}

Gain gain_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 ||
      !j[1].is_array() || j[1].size() != 2)
    throw std::invalid_argument("config: gain must be [[k11,k12],[k21,k22]]");
  Gain g;
  g.k = {j[0][0].get<double>(), j[0][1].get<double>(),
         j[1][0].get<double>(), j[1][1].get<double>()};
  return g;
}

json to_json(const RunConfig& cfg) {
  json j;
  j["plant"] = {{"r_ohm", cfg.plant.r_ohm},       {"l_henry", cfg.plant.l_henry},
                {"f_hz", cfg.plant.f_hz},         {"vg_lo_v", cfg.plant.vg_lo_v},
                {"vg_hi_v", cfg.plant.vg_hi_v},   {"u_lo_v", cfg.plant.u_lo_v},
                {"u_hi_v", cfg.plant.u_hi_v}};
  j["sampling"] = {{"p_range", cfg.sampling.p_range},
                   {"q_range", cfg.sampling.q_range},
                   {"pf_range", cfg.sampling.pf_range},
                   {"n_setpoints", cfg.sampling.n_setpoints},
                   {"k_box", cfg.sampling.k_box},
                   {"n_gains", cfg.sampling.n_gains},
                   {"seed", cfg.sampling.seed},
                   {"checker", to_string(cfg.sampling.checker)},
                   {"include_zero_gain", cfg.sampling.include_zero_gain}};
  j["gain"] = gain_to_json(cfg.gain);
  j["grid"] = {{"p_min", cfg.grid.p_min}, {"p_max", cfg.grid.p_max},
               {"q_min", cfg.grid.q_min}, {"q_max", cfg.grid.q_max},
               {"n_p", cfg.grid.n_p},     {"n_q", cfg.grid.n_q}};
  j["profiles"] = json::array();
  for (const auto& p : cfg.profiles) j["profiles"].push_back(profile_to_json(p));
  j["integrator"] = {{"dt_s", cfg.integrator.dt_s}, {"horizon_s", cfg.integrator.horizon_s}};
  j["out_dir"] = cfg.out_dir;
  return j;
}

RunConfig config_from_json(const json& j) {
  RunConfig cfg;
  if (j.contains("plant")) {
    const auto& p = j.at("plant");
    cfg.plant = PlantParams::make(
        p.value("r_ohm", 0.12), p.value("l_henry", 4e-3), p.value("f_hz", 50.0),
        p.value("vg_lo_v", 105.6), p.value("vg_hi_v", 114.4),
        p.value("u_lo_v", 104.5), p.value("u_hi_v", 115.5));
  }
  if (j.contains("integrator")) {
    const auto& in = j.at("integrator");
    cfg.integrator.dt_s = in.value("dt_s", kDefaultDt);
    cfg.integrator.horizon_s = in.value("horizon_s", kDefaultHorizon);
    if (!(cfg.integrator.dt_s > 0.0) || !(cfg.integrator.horizon_s > 0.0))
      throw std::invalid_argument("config: integrator dt and horizon must be > 0");
  }
  if (j.contains("sampling")) {
    const auto& s = j.at("sampling");
    if (s.contains("p_range")) cfg.sampling.p_range = pair_from(s, "p_range");
    if (s.contains("q_range")) cfg.sampling.q_range = pair_from(s, "q_range");
    if (s.contains("pf_range")) cfg.sampling.pf_range = pair_from(s, "pf_range");
    cfg.sampling.n_setpoints = s.value("n_setpoints", cfg.sampling.n_setpoints);
    if (s.contains("k_box")) cfg.sampling.k_box = pair_from(s, "k_box");
    cfg.sampling.n_gains = s.value("n_gains", cfg.sampling.n_gains);
    cfg.sampling.seed = s.value("seed", cfg.sampling.seed);
    if (s.contains("checker"))
      cfg.sampling.checker = checker_from_string(s.at("checker").get<std::string>());
    cfg.sampling.include_zero_gain =
        s.value("include_zero_gain", cfg.sampling.include_zero_gain);
    cfg.sampling.validate();
  }
  if (j.contains("gain")) cfg.gain = gain_from_json(j.at("gain"));
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    cfg.grid.p_min = g.value("p_min", cfg.grid.p_min);
    cfg.grid.p_max = g.value("p_max", cfg.grid.p_max);
    cfg.grid.q_min = g.value("q_min", cfg.grid.q_min);
    cfg.grid.q_max = g.value("q_max", cfg.grid.q_max);
    cfg.grid.n_p = g.value("n_p", cfg.grid.n_p);
    cfg.grid.n_q = g.value("n_q", cfg.grid.n_q);
  }
  if (j.contains("profiles")) {
    int i = 0;
    for (const auto& pj : j.at("profiles")) {
      const std::string default_label =
          pj.at("kind").get<std::string>() + "_" + std::to_string(i);
      cfg.profiles.push_back(
          profile_from_json(pj, cfg.plant, cfg.integrator.dt_s, default_label));
      ++i;
    }
    if (cfg.profiles.empty())
      throw std::invalid_argument("config: profiles must not be empty");
  } else {
    cfg.profiles = default_ensemble(cfg.plant, cfg.integrator.dt_s);
  }
  if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
  return cfg;
}

RunConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open config file: " + path.string());
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("config parse error in " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

json manifest_json(const RunConfig& cfg, const std::string& command, int threads) {
  json j;
  j["tool"] = "vsi";
  j["version"] = kVersion;
  j["command"] = command;
  j["seed"] = cfg.sampling.seed;
  j["threads"] = threads;
  j["config"] = to_json(cfg);
  return j;
}

}  // namespace vsi
