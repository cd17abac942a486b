// stratmoi: construct small-amplitude internal solitary waves in a stratified
// channel, evaluate the Casimir-corrected Hamiltonian/momentum pair, and check
// the moment-of-instability structure along the speed branch.

#include "stratmoi/acceptance.hpp"
#include "stratmoi/artifacts.hpp"
#include "stratmoi/config.hpp"
#include "stratmoi/io.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

namespace {

constexpr int kExitNumerical = 1;
constexpr int kExitConfig = 2;

stratmoi::RunConfig resolve_config(const std::string& config_path,
                                   const std::string& out_override) {
  stratmoi::RunConfig cfg = config_path.empty()
                                ? stratmoi::default_config()
                                : stratmoi::load_config(config_path);
  if (const char* seed_env = std::getenv("STRATMOI_SEED")) {
    try {
      cfg.probes.seed = std::stoull(seed_env);
    } catch (const std::exception&) {
      throw stratmoi::ConfigError("STRATMOI_SEED is not an unsigned integer");
    }
  }
  if (!out_override.empty()) cfg.output.directory = out_override;
  for (const std::string& w : stratmoi::validate_config(cfg))
    std::cerr << "warning: " << w << "\n";
  return cfg;
}

void print_files(const std::vector<std::string>& files) {
  for (const auto& f : files) std::cout << "wrote " << f << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"internal solitary waves: functionals, branch sweeps, and "
               "moment-of-instability checks"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (jobs <= 0) jobs = 1;
  bool strict = false;
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--out", out_dir, "output directory (overrides config)");
  app.add_option("--jobs", jobs, "worker thread bound")->check(CLI::PositiveNumber);
  app.add_flag("--strict", strict, "treat truncation warnings as errors");

  int samples = 1001;
  CLI::App* cmd_validate =
      app.add_subcommand("validate-profile", "check stratification invariants");
  cmd_validate->add_option("--samples", samples, "sample count")
      ->check(CLI::Range(2, 1000000));
  CLI::App* cmd_modes =
      app.add_subcommand("modes", "solve the vertical eigenproblem");
  CLI::App* cmd_coeffs =
      app.add_subcommand("coeffs", "amplitude-equation coefficients");
  CLI::App* cmd_wave = app.add_subcommand("wave", "write one gridded wave");
  CLI::App* cmd_functionals =
      app.add_subcommand("functionals", "evaluate H, I, and m on one wave");
  CLI::App* cmd_residuals =
      app.add_subcommand("residuals", "criticality residual table");
  CLI::App* cmd_branch =
      app.add_subcommand("branch", "sweep the speed branch and difference m");
  CLI::App* cmd_chain =
      app.add_subcommand("chain-check", "weak-form Jordan chain verification");
  CLI::App* cmd_verify =
      app.add_subcommand("verify", "run the full verification suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    const stratmoi::RunConfig cfg = resolve_config(config_path, out_dir);
    const std::filesystem::path dir = cfg.output.directory;

    if (cmd_validate->parsed()) {
      const auto files = stratmoi::emit_profile_validation(cfg, dir, samples);
      print_files(files);
      const auto report = stratmoi::validate(cfg.make_profile(), samples);
      if (!report.passed) {
        for (const auto& v : report.violations)
          std::cerr << "violated: " << v.invariant << " at y = " << v.y
                    << " (value " << v.value << ")\n";
        return kExitNumerical;
      }
    } else if (cmd_modes->parsed()) {
      print_files(stratmoi::emit_modes(cfg, dir));
    } else if (cmd_coeffs->parsed()) {
      print_files(stratmoi::emit_coeffs(cfg, dir));
    } else if (cmd_wave->parsed()) {
      print_files(stratmoi::emit_wave(cfg, dir, strict));
    } else if (cmd_functionals->parsed()) {
      print_files(stratmoi::emit_functionals(cfg, dir, strict));
    } else if (cmd_residuals->parsed()) {
      print_files(stratmoi::emit_residuals(cfg, dir, jobs));
    } else if (cmd_branch->parsed()) {
      const auto artifacts = stratmoi::emit_branch(cfg, dir, jobs, strict);
      print_files(artifacts.files);
    } else if (cmd_chain->parsed()) {
      const auto artifacts = stratmoi::emit_chain(cfg, dir, jobs);
      print_files(artifacts.files);
      if (!artifacts.invariants_pass) {
        std::cerr << "chain invariant failed: expected chain_terminates and "
                     "m_second < 0\n";
        return kExitNumerical;
      }
    } else if (cmd_verify->parsed()) {
      const auto report = stratmoi::run_acceptance(cfg, dir, std::cout, jobs);
      nlohmann::json j = stratmoi::base_document(cfg);
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& c : report.criteria) {
        nlohmann::json item;
        item["id"] = c.id;
        item["name"] = c.name;
        item["passed"] = c.passed;
        item["details"] = c.details;
        arr.push_back(item);
      }
      j["criteria"] = arr;
      j["all_passed"] = report.all_passed();
      stratmoi::atomic_write(dir / "acceptance_report.json", j.dump(2) + "\n");
      std::cout << (report.all_passed() ? "verify: all criteria passed"
                                        : "verify: FAILURES present")
                << "\n";
      if (!report.all_passed()) return kExitNumerical;
    }
  } catch (const stratmoi::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
