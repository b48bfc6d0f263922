#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "json.hpp"
#include "vsi/config.hpp"
#include "vsi/io.hpp"

using namespace vsi;
namespace fs = std::filesystem;

namespace {
fs::path temp_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("vsi_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}
}  // namespace

TEST_CASE("config round trip through JSON") {
  const RunConfig cfg = RunConfig::defaults();
  const nlohmann::json j1 = to_json(cfg);
  const RunConfig reparsed = config_from_json(j1);
  const nlohmann::json j2 = to_json(reparsed);
  CHECK(j1 == j2);
  CHECK(j1.dump() == j2.dump());
}

TEST_CASE("config parsing details") {
  SUBCASE("custom profiles resolve plant bounds and integrator dt") {
    nlohmann::json j;
    j["integrator"] = {{"dt_s", 2e-4}, {"horizon_s", 0.3}};
    j["profiles"] = nlohmann::json::array(
        {{{"kind", "constant"}, {"value_v", 108.0}},
         {{"kind", "random_walk"}, {"step_v", 0.2}}});
    const RunConfig cfg = config_from_json(j);
    REQUIRE(cfg.profiles.size() == 2);
    CHECK(cfg.profiles[0].label() == "constant_0");
    CHECK(cfg.profiles[1].walk_dt() == 2e-4);
    CHECK(cfg.profiles[1].lo() == cfg.plant.vg_lo_v);
    // Round trip preserves the resolved ensemble.
    const RunConfig again = config_from_json(to_json(cfg));
    CHECK(to_json(again) == to_json(cfg));
  }

  SUBCASE("gain shape is validated") {
    nlohmann::json j;
    j["gain"] = nlohmann::json::array({1.0, 2.0});
    CHECK_THROWS_AS(config_from_json(j), std::invalid_argument);
  }

  SUBCASE("bad plant values are rejected") {
    nlohmann::json j;
    j["plant"] = {{"l_henry", -1.0}};
    CHECK_THROWS_AS(config_from_json(j), std::invalid_argument);
  }

  SUBCASE("unknown checker is rejected") {
    nlohmann::json j;
    j["sampling"] = {{"checker", "mystery"}};
    CHECK_THROWS_AS(config_from_json(j), std::invalid_argument);
  }

  SUBCASE("out-of-band profile is rejected") {
    nlohmann::json j;
    j["profiles"] = nlohmann::json::array({{{"kind", "constant"}, {"value_v", 50.0}}});
    CHECK_THROWS_AS(config_from_json(j), std::invalid_argument);
  }
}

TEST_CASE("manifest records tool, seed, and resolved config") {
  RunConfig cfg = RunConfig::defaults();
  cfg.sampling.seed = 987;
  const nlohmann::json m = manifest_json(cfg, "optimize", 4);
  CHECK(m.at("tool") == "vsi");
  CHECK(m.at("command") == "optimize");
  CHECK(m.at("seed") == 987);
  CHECK(m.at("threads") == 4);
  CHECK(m.at("config") == to_json(cfg));
}

TEST_CASE("atomic file writes") {
  const fs::path dir = temp_dir("atomic");
  const fs::path target = dir / "data.csv";

  SUBCASE("success path replaces the file completely") {
    atomic_write_file(target, [](std::ostream& os) { os << "old\n"; });
    atomic_write_file(target, [](std::ostream& os) { os << "new\n"; });
    std::ifstream is(target);
    std::string line;
    std::getline(is, line);
    CHECK(line == "new");
  }

  SUBCASE("a failing writer leaves no target and no temp files") {
    atomic_write_file(target, [](std::ostream& os) { os << "keep\n"; });
    CHECK_THROWS(atomic_write_file(target, [](std::ostream& os) {
      os << "partial";
      throw std::runtime_error("interrupted");
    }));
    std::ifstream is(target);
    std::string line;
    std::getline(is, line);
    CHECK(line == "keep");
    int entries = 0;
    for (const auto& e : fs::directory_iterator(dir)) {
      (void)e;
      ++entries;
    }
    CHECK(entries == 1);
  }
}

TEST_CASE("double formatting round-trips") {
  for (double v : {0.0, 1.0, -1.5, 1e-17, 3.141592653589793, 12100.000000000001}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}
