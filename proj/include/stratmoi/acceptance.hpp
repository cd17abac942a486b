#pragma once

#include "stratmoi/config.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace stratmoi {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string details;
};

struct AcceptanceReport {
  std::vector<CriterionResult> criteria;
  bool all_passed() const {
    for (const auto& c : criteria)
      if (!c.passed) return false;
    return !criteria.empty();
  }
};

// Runs the full verification suite against the given config, writing the data
// artifacts under outdir and one pass/fail line per criterion to `log`.
AcceptanceReport run_acceptance(const RunConfig& cfg,
                                const std::filesystem::path& outdir,
                                std::ostream& log, int jobs = 1);

}  // namespace stratmoi
