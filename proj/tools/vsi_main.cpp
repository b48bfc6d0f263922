// Command-line front end: check one setpoint, map a region, optimize the
// feedback gain, or simulate a tracking run, all from one JSON config with
// flag overrides. See README.md for file formats and exit codes.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "vsi/commands.hpp"
#include "vsi/util.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Achievable-setpoint certification and gain tuning for a "
               "grid-connected voltage-source inverter"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> checker;
  std::optional<std::string> out_dir;
  int threads = vsi::hardware_threads();
  app.add_option("--config", config_path, "JSON config file (defaults built in)");
  app.add_option("--seed", seed, "override sampling seed");
  app.add_option("--threads", threads, "worker threads (default: machine parallelism)");
  app.add_option("--checker", checker, "checker: certificate|steady-state|trajectory");
  app.add_option("--out", out_dir, "output directory");

  double p_ref = 0.0, q_ref = 0.0;
  auto* check = app.add_subcommand("check", "decide achievability of one setpoint");
  check->add_option("--p", p_ref, "active power setpoint (W)")->required();
  check->add_option("--q", q_ref, "reactive power setpoint (var)")->required();
  auto* map = app.add_subcommand("map", "evaluate the checker over a setpoint grid");
  auto* optimize = app.add_subcommand("optimize", "Monte Carlo search for the best gain");
  auto* simulate = app.add_subcommand("simulate", "simulate tracking of one setpoint");
  simulate->add_option("--p", p_ref, "active power setpoint (W)")->required();
  simulate->add_option("--q", q_ref, "reactive power setpoint (var)")->required();
  auto* dump = app.add_subcommand("dump-config", "print the resolved config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return vsi::kExitConfigError;
  }

  vsi::RunConfig cfg;
  try {
    cfg = config_path.empty() ? vsi::RunConfig::defaults()
                              : vsi::load_config_file(config_path);
    if (seed) cfg.sampling.seed = *seed;
    if (checker) cfg.sampling.checker = vsi::checker_from_string(*checker);
    if (out_dir) cfg.out_dir = *out_dir;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return vsi::kExitConfigError;
  }

  if (check->parsed())
    return vsi::cmd_check(cfg, p_ref, q_ref, threads, std::cout, std::cerr);
  if (map->parsed()) return vsi::cmd_map(cfg, threads, std::cerr);
  if (optimize->parsed()) return vsi::cmd_optimize(cfg, threads, std::cerr);
  if (simulate->parsed())
    return vsi::cmd_simulate(cfg, p_ref, q_ref, threads, std::cerr);
  if (dump->parsed()) return vsi::cmd_dump_config(cfg, std::cout);
  return vsi::kExitConfigError;
}
