#include "stratmoi/config.hpp"

#include "stratmoi/io.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace stratmoi {

using nlohmann::json;

StratificationProfile RunConfig::make_profile() const {
  const ProfileKind kind = profile_kind_from_string(profile.kind);
  StratificationProfile p;
  switch (kind) {
    case ProfileKind::exponential:
      p = StratificationProfile::exponential_profile(profile.rho0, profile.beta,
                                                     profile.g);
      break;
    case ProfileKind::linear:
      p = StratificationProfile::linear_profile(profile.rho0, profile.rho_top,
                                                profile.g);
      break;
    case ProfileKind::tanh_pycnocline:
      p = StratificationProfile::tanh_profile(profile.rho0, profile.a_p,
                                              profile.y_p, profile.d, profile.g);
      break;
  }
  return p;
}

RunConfig default_config() { return RunConfig{}; }

namespace {

void check_keys(const json& j, const std::string& where,
                const std::set<std::string>& allowed) {
  if (!j.is_object())
    throw ConfigError(where + ": expected a JSON object");
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key()))
      throw ConfigError("unknown key '" + where + "." + item.key() + "'");
  }
}

template <typename T>
void assign(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("bad value for key '") + key + "'");
  }
}

}  // namespace

RunConfig config_from_json(const json& j) {
  RunConfig cfg;
  check_keys(j, "$",
             {"schema_version", "profile", "grid", "mode", "sweep", "probes",
              "thresholds", "wave", "output"});
  assign(j, "schema_version", cfg.schema_version);
  if (cfg.schema_version != 1)
    throw ConfigError("unsupported schema_version (expected 1)");

  if (j.contains("profile")) {
    const json& p = j.at("profile");
    check_keys(p, "profile",
               {"kind", "g", "rho0", "beta", "rho_top", "a_p", "y_p", "d"});
    assign(p, "kind", cfg.profile.kind);
    assign(p, "g", cfg.profile.g);
    assign(p, "rho0", cfg.profile.rho0);
    assign(p, "beta", cfg.profile.beta);
    assign(p, "rho_top", cfg.profile.rho_top);
    assign(p, "a_p", cfg.profile.a_p);
    assign(p, "y_p", cfg.profile.y_p);
    assign(p, "d", cfg.profile.d);
  }
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    check_keys(g, "grid", {"nx", "ny", "decay_lengths", "L"});
    assign(g, "nx", cfg.grid.nx);
    assign(g, "ny", cfg.grid.ny);
    assign(g, "decay_lengths", cfg.grid.decay_lengths);
    if (g.contains("L")) {
      double L = 0.0;
      assign(g, "L", L);
      cfg.grid.L = L;
    }
  }
  if (j.contains("mode")) {
    const json& m = j.at("mode");
    check_keys(m, "mode", {"ny", "index"});
    assign(m, "ny", cfg.mode.ny);
    assign(m, "index", cfg.mode.index);
  }
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    check_keys(s, "sweep", {"eps_min", "eps_max", "points", "eps_list", "c_list"});
    assign(s, "eps_min", cfg.sweep.eps_min);
    assign(s, "eps_max", cfg.sweep.eps_max);
    assign(s, "points", cfg.sweep.points);
    if (s.contains("eps_list")) {
      std::vector<double> v;
      assign(s, "eps_list", v);
      cfg.sweep.eps_list = v;
    }
    if (s.contains("c_list")) {
      std::vector<double> v;
      assign(s, "c_list", v);
      cfg.sweep.c_list = v;
    }
  }
  if (j.contains("probes")) {
    const json& p = j.at("probes");
    check_keys(p, "probes",
               {"h_rel", "hessian_h_rel", "delta_c_factor", "seed", "directions",
                "eps_list"});
    assign(p, "h_rel", cfg.probes.h_rel);
    assign(p, "hessian_h_rel", cfg.probes.hessian_h_rel);
    assign(p, "delta_c_factor", cfg.probes.delta_c_factor);
    assign(p, "seed", cfg.probes.seed);
    assign(p, "directions", cfg.probes.directions);
    assign(p, "eps_list", cfg.probes.eps_list);
  }
  if (j.contains("thresholds")) {
    const json& t = j.at("thresholds");
    check_keys(t, "thresholds",
               {"genericity", "chain_noise_factor", "elliptic_tol",
                "elliptic_max_iter"});
    assign(t, "genericity", cfg.thresholds.genericity);
    assign(t, "chain_noise_factor", cfg.thresholds.chain_noise_factor);
    assign(t, "elliptic_tol", cfg.thresholds.elliptic_tol);
    assign(t, "elliptic_max_iter", cfg.thresholds.elliptic_max_iter);
  }
  if (j.contains("wave")) {
    const json& w = j.at("wave");
    check_keys(w, "wave", {"eps"});
    assign(w, "eps", cfg.wave.eps);
  }
  if (j.contains("output")) {
    const json& o = j.at("output");
    check_keys(o, "output", {"directory", "formats"});
    assign(o, "directory", cfg.output.directory);
    assign(o, "formats", cfg.output.formats);
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // convert the byte offset into a line anchor
    size_t line = 1;
    for (size_t i = 0; i < std::min<size_t>(e.byte, text.size()); ++i)
      if (text[i] == '\n') ++line;
    std::ostringstream os;
    os << path.string() << ":" << line << ": " << e.what();
    throw ConfigError(os.str());
  }
  return config_from_json(j);
}

std::vector<std::string> validate_config(const RunConfig& cfg) {
  std::vector<std::string> warnings;
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  require(cfg.grid.nx >= 16, "grid.nx >= 16 required");
  require(cfg.grid.ny >= 16, "grid.ny >= 16 required");
  require(cfg.mode.ny >= 16, "mode.ny >= 16 required");
  require(cfg.mode.index >= 1, "mode.index >= 1 required");
  require(cfg.grid.decay_lengths > 0.0, "grid.decay_lengths must be positive");
  if (cfg.grid.L.has_value()) require(*cfg.grid.L > 0.0, "grid.L must be positive");
  require(cfg.probes.h_rel > 0.0, "probes.h_rel must be positive");
  require(cfg.probes.hessian_h_rel > 0.0, "probes.hessian_h_rel must be positive");
  require(cfg.probes.delta_c_factor > 0.0 && cfg.probes.delta_c_factor < 1.0,
          "probes.delta_c_factor must lie in (0, 1)");
  require(cfg.probes.directions >= 1 && cfg.probes.directions <= 64,
          "probes.directions must lie in [1, 64]");
  require(!cfg.probes.eps_list.empty(), "probes.eps_list must not be empty");
  require(cfg.thresholds.genericity > 0.0, "thresholds.genericity must be positive");
  require(cfg.thresholds.chain_noise_factor > 0.0,
          "thresholds.chain_noise_factor must be positive");
  require(cfg.thresholds.elliptic_tol > 0.0,
          "thresholds.elliptic_tol must be positive");
  require(cfg.thresholds.elliptic_max_iter > 0,
          "thresholds.elliptic_max_iter must be positive");
  require(cfg.sweep.points >= 1, "sweep.points >= 1 required");

  auto check_eps = [&](double eps, const std::string& what) {
    require(eps >= 0.0, what + " must be >= 0");
    require(eps < 0.5, what + " must stay below 0.5 (asymptotic regime)");
    if (eps > 0.15)
      warnings.push_back(what + " = " + format_full(eps) +
                         " exceeds 0.15; results leave the asymptotic regime");
  };
  check_eps(cfg.wave.eps, "wave.eps");
  if (cfg.sweep.eps_list.has_value()) {
    for (double e : *cfg.sweep.eps_list) check_eps(e, "sweep.eps_list entry");
  } else if (!cfg.sweep.c_list.has_value()) {
    require(cfg.sweep.eps_min > 0.0, "sweep.eps_min must be positive");
    require(cfg.sweep.eps_max > cfg.sweep.eps_min,
            "sweep.eps_max must exceed sweep.eps_min");
    check_eps(cfg.sweep.eps_min, "sweep.eps_min");
    check_eps(cfg.sweep.eps_max, "sweep.eps_max");
  }
  for (double e : cfg.probes.eps_list) check_eps(e, "probes.eps_list entry");

  const StratificationProfile p = cfg.make_profile();
  require(p.g > 0.0, "profile.g must be positive");
  require(p.rho0 > 0.0, "profile.rho0 must be positive");
  switch (p.kind) {
    case ProfileKind::exponential:
      require(p.beta > 0.0, "profile.beta must be positive");
      break;
    case ProfileKind::linear:
      require(p.rho_top > 0.0, "profile.rho_top must be positive");
      require(p.rho_top < p.rho0,
              "linear profile requires rho_top < rho0 (stable stratification)");
      break;
    case ProfileKind::tanh_pycnocline:
      require(p.a_p > 0.0 && p.a_p < 1.0, "profile.a_p must lie in (0, 1)");
      require(p.y_p > 0.0 && p.y_p < 1.0, "profile.y_p must lie in (0, 1)");
      require(p.d > 0.0, "profile.d must be positive");
      break;
  }
  return warnings;
}

nlohmann::json config_to_json(const RunConfig& cfg) {
  json j;
  j["schema_version"] = cfg.schema_version;
  json p;
  p["kind"] = cfg.profile.kind;
  p["g"] = cfg.profile.g;
  p["rho0"] = cfg.profile.rho0;
  const ProfileKind kind = profile_kind_from_string(cfg.profile.kind);
  if (kind == ProfileKind::exponential) p["beta"] = cfg.profile.beta;
  if (kind == ProfileKind::linear) p["rho_top"] = cfg.profile.rho_top;
  if (kind == ProfileKind::tanh_pycnocline) {
    p["a_p"] = cfg.profile.a_p;
    p["y_p"] = cfg.profile.y_p;
    p["d"] = cfg.profile.d;
  }
  j["profile"] = p;
  j["grid"]["nx"] = cfg.grid.nx;
  j["grid"]["ny"] = cfg.grid.ny;
  j["grid"]["decay_lengths"] = cfg.grid.decay_lengths;
  if (cfg.grid.L.has_value()) j["grid"]["L"] = *cfg.grid.L;
  j["mode"]["ny"] = cfg.mode.ny;
  j["mode"]["index"] = cfg.mode.index;
  if (cfg.sweep.eps_list.has_value()) {
    j["sweep"]["eps_list"] = *cfg.sweep.eps_list;
  } else if (cfg.sweep.c_list.has_value()) {
    j["sweep"]["c_list"] = *cfg.sweep.c_list;
  } else {
    j["sweep"]["eps_min"] = cfg.sweep.eps_min;
    j["sweep"]["eps_max"] = cfg.sweep.eps_max;
    j["sweep"]["points"] = cfg.sweep.points;
  }
  j["probes"]["h_rel"] = cfg.probes.h_rel;
  j["probes"]["hessian_h_rel"] = cfg.probes.hessian_h_rel;
  j["probes"]["delta_c_factor"] = cfg.probes.delta_c_factor;
  j["probes"]["seed"] = cfg.probes.seed;
  j["probes"]["directions"] = cfg.probes.directions;
  j["probes"]["eps_list"] = cfg.probes.eps_list;
  j["thresholds"]["genericity"] = cfg.thresholds.genericity;
  j["thresholds"]["chain_noise_factor"] = cfg.thresholds.chain_noise_factor;
  j["thresholds"]["elliptic_tol"] = cfg.thresholds.elliptic_tol;
  j["thresholds"]["elliptic_max_iter"] = cfg.thresholds.elliptic_max_iter;
  j["wave"]["eps"] = cfg.wave.eps;
  j["output"]["directory"] = cfg.output.directory;
  j["output"]["formats"] = cfg.output.formats;
  return j;
}

}  // namespace stratmoi
