#pragma once

#include "stratmoi/wavefields.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace stratmoi {

// 17 significant digits, scientific: round-trips doubles exactly, so
// refinement ratios can be recomputed from files alone.
std::string format_full(double v);

// Writes via a temp file in the same directory, then renames.
void atomic_write(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

// Gridded wave snapshot as read back from a wave CSV (x, y, rho, psi, sigma).
struct WaveCsvData {
  std::vector<double> x;
  std::vector<double> y;
  Eigen::ArrayXXd rho;
  Eigen::ArrayXXd psi;
  Eigen::ArrayXXd sigma;
};

WaveCsvData read_wave_csv(const std::filesystem::path& path);

std::string wave_csv_text(const WaveField& wave);

}  // namespace stratmoi
