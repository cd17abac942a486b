#pragma once

#include "stratmoi/branch.hpp"
#include "stratmoi/config.hpp"
#include "stratmoi/spectral_chain.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace stratmoi {

// File emitters shared by the CLI subcommands and the verification suite.
// Every JSON document embeds the resolved config and a schema version; CSV
// cells carry 17 significant digits. Data files contain no timestamps, so a
// fixed (config, seed) pair reproduces them byte for byte.

std::vector<std::string> emit_profile_validation(
    const RunConfig& cfg, const std::filesystem::path& dir, int samples = 1001);

std::vector<std::string> emit_modes(const RunConfig& cfg,
                                    const std::filesystem::path& dir);

std::vector<std::string> emit_coeffs(const RunConfig& cfg,
                                     const std::filesystem::path& dir);

std::vector<std::string> emit_wave(const RunConfig& cfg,
                                   const std::filesystem::path& dir,
                                   bool strict = false);

std::vector<std::string> emit_functionals(const RunConfig& cfg,
                                          const std::filesystem::path& dir,
                                          bool strict = false);

std::vector<std::string> emit_residuals(const RunConfig& cfg,
                                        const std::filesystem::path& dir,
                                        int jobs = 1);

struct BranchArtifacts {
  BranchTable table;
  std::vector<std::string> files;
};
BranchArtifacts emit_branch(const RunConfig& cfg,
                            const std::filesystem::path& dir, int jobs = 1,
                            bool strict = false);

struct ChainArtifacts {
  ChainReport report;
  bool invariants_pass = false;
  std::vector<std::string> files;
};
ChainArtifacts emit_chain(const RunConfig& cfg,
                          const std::filesystem::path& dir, int jobs = 1);

struct DataProducts {
  std::vector<std::string> files;
  BranchTable table;
};
// The full deterministic artifact set (modes, coeffs, wave, functionals,
// residuals, branch, chain report).
DataProducts produce_data_files(const RunConfig& cfg,
                                const std::filesystem::path& dir, int jobs = 1,
                                bool strict = false);

// Pipeline helpers.
std::vector<double> sweep_speeds(const RunConfig& cfg, double c0);
nlohmann::json base_document(const RunConfig& cfg);

}  // namespace stratmoi
