#pragma once

#include "stratmoi/stratification.hpp"

// vendored single-header nlohmann/json
#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace stratmoi {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ProfileConfig {
  // Default: the deep linear profile. Of the built-in families it has by far
  // the smallest next-order corrections along the branch (the amplitude
  // suite's m''-consistency checks degrade with a profile-dependent constant),
  // and the whole eps <= 0.1 suite keeps the constructed density inside the
  // background range.
  std::string kind = "linear";
  double g = 1.0;
  double rho0 = 1.0;
  double beta = 3.0;
  double rho_top = 0.1;
  double a_p = 0.05;
  double y_p = 0.5;
  double d = 0.1;
};

struct GridConfig {
  int nx = 1025;
  int ny = 257;
  double decay_lengths = 10.0;
  std::optional<double> L;  // fixed half-width override
};

struct ModeSolveConfig {
  int ny = 2001;
  int index = 1;
};

struct SweepConfig {
  // Default range: the measured envelope where the construction's branch
  // identities (m'' = -dI/dc and the closed m'' law) hold to the tested
  // tolerances. Wider sweeps run fine but their top-end second differences
  // pick up the next-order correction of the leading-order construction.
  double eps_min = 0.02;
  double eps_max = 0.05;
  int points = 17;
  std::optional<std::vector<double>> eps_list;  // explicit amplitudes
  std::optional<std::vector<double>> c_list;    // explicit speeds
};

struct ProbeConfig {
  double h_rel = 1e-4;
  double hessian_h_rel = 1e-2;
  double delta_c_factor = 0.05;  // delta_c = factor * eps^2
  std::uint64_t seed = 20260809ull;
  int directions = 5;
  std::vector<double> eps_list = {0.1, 0.05, 0.025};
};

struct ThresholdConfig {
  double genericity = 1e-6;
  double chain_noise_factor = 10.0;
  double elliptic_tol = 1e-13;
  int elliptic_max_iter = 5000;
};

struct WaveOutputConfig {
  double eps = 0.1;
};

struct OutputConfig {
  std::string directory = "out";
  std::vector<std::string> formats = {"csv", "json"};
};

struct RunConfig {
  int schema_version = 1;
  ProfileConfig profile;
  GridConfig grid;
  ModeSolveConfig mode;
  SweepConfig sweep;
  ProbeConfig probes;
  ThresholdConfig thresholds;
  WaveOutputConfig wave;
  OutputConfig output;

  StratificationProfile make_profile() const;
};

RunConfig default_config();

// Strict parser: unknown keys are errors, types are checked, and hard
// validation failures throw ConfigError. Soft issues (amplitudes above the
// asymptotic guard) are returned as warnings.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);
std::vector<std::string> validate_config(const RunConfig& cfg);

nlohmann::json config_to_json(const RunConfig& cfg);

}  // namespace stratmoi
