#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "stratmoi/config.hpp"

using namespace stratmoi;
using nlohmann::json;

TEST_CASE("defaults validate cleanly") {
  const RunConfig cfg = default_config();
  CHECK_NOTHROW(validate_config(cfg));
  CHECK(validate_config(cfg).empty());  // no warnings either
  CHECK(cfg.profile.kind == "linear");
}

TEST_CASE("round trip through JSON") {
  const RunConfig cfg = default_config();
  const json j = config_to_json(cfg);
  const RunConfig back = config_from_json(j);
  CHECK(back.grid.nx == cfg.grid.nx);
  CHECK(back.probes.seed == cfg.probes.seed);
  CHECK(back.sweep.eps_max == cfg.sweep.eps_max);
  CHECK(back.profile.rho_top == cfg.profile.rho_top);
  CHECK(config_to_json(back) == j);
}

TEST_CASE("unknown keys are flagged with their path") {
  json j;
  j["grid"]["nx"] = 129;
  j["grid"]["n_y"] = 65;  // typo
  try {
    config_from_json(j);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("grid.n_y") != std::string::npos);
  }
}

TEST_CASE("type errors are reported") {
  json j;
  j["grid"]["nx"] = "many";
  CHECK_THROWS_AS(config_from_json(j), ConfigError);
}

TEST_CASE("resolution floors") {
  RunConfig cfg = default_config();
  cfg.mode.ny = 3;
  try {
    validate_config(cfg);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("ny >= 16") != std::string::npos);
  }
  cfg = default_config();
  cfg.grid.nx = 4;
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);
}

TEST_CASE("amplitude guard: hard ceiling and soft warning") {
  RunConfig cfg = default_config();
  cfg.wave.eps = 0.6;
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);
  cfg.wave.eps = 0.2;
  const auto warnings = validate_config(cfg);
  CHECK(warnings.size() == 1);
  CHECK(warnings[0].find("asymptotic") != std::string::npos);
  cfg.wave.eps = 0.1;
  CHECK(validate_config(cfg).empty());
}

TEST_CASE("sweep lists are validated") {
  RunConfig cfg = default_config();
  cfg.sweep.eps_list = std::vector<double>{0.02, 0.4, 0.9};
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);  // 0.9 >= 0.5
  cfg.sweep.eps_list = std::vector<double>{0.02, 0.4};
  CHECK(validate_config(cfg).size() == 1);  // 0.4 warns
}

TEST_CASE("stratification parameters are checked") {
  RunConfig cfg = default_config();
  cfg.profile.kind = "linear";
  cfg.profile.rho_top = 1.2;  // not decreasing
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);
  cfg = default_config();
  cfg.profile.kind = "tanh-pycnocline";
  cfg.profile.a_p = 1.5;
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);
}

TEST_CASE("parse errors carry a line anchor") {
  const auto path = std::filesystem::temp_directory_path() / "stratmoi_bad.json";
  {
    std::ofstream out(path);
    out << "{\n  \"grid\": {\n  broken\n}\n";
  }
  try {
    load_config(path);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find(":3:") != std::string::npos);
  }
  std::filesystem::remove(path);
}
