#pragma once

#include "stratmoi/functionals.hpp"
#include "stratmoi/kdv.hpp"
#include "stratmoi/modes.hpp"
#include "stratmoi/wavefields.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace stratmoi {

struct BranchPoint {
  double eps = 0.0;
  double c = 0.0;
  double I_def = 0.0;  // momentum from the functional definition
  double I_kin = 0.0;  // (1/c) int rho |grad psi|^2
  double m = 0.0;      // H - c I
  double criticality_residual = 0.0;  // max |D_eta (H - cI)| over the dictionary
  bool ok = false;
  std::string error;  // populated when the point failed
};

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
};

// OLS in log-log coordinates; throws std::domain_error on nonpositive input
// or fewer than 3 samples.
PowerLawFit fit_power_law(const std::vector<double>& xs,
                          const std::vector<double>& ys);

struct BranchTable {
  double c0 = 0.0;
  double K = 0.0;
  std::vector<BranchPoint> points;  // strictly increasing in c
  // Central second difference of m over c, and central first difference of
  // -I over c; interior points only (NaN elsewhere). The two columns estimate
  // the same quantity through independent stencils.
  std::vector<double> m_second_fd;
  std::vector<double> neg_dIdc_fd;
  std::optional<PowerLawFit> momentum_fit;   // I vs (c - c0)
  std::optional<PowerLawFit> m_second_fit;   // -m'' vs (c - c0)
  double control_refinement_gap = 0.0;  // |I| change under grid doubling, midpoint
  std::vector<std::string> warnings;
};

struct GridPolicy {
  int nx = 1025;
  int ny = 257;
  double decay_lengths = 10.0;        // L = decay_lengths / (k eps)
  std::optional<double> fixed_L;      // overrides the refit when set
};

Grid2D make_grid(const GridPolicy& policy, double k, double eps);

struct SweepOptions {
  int direction_count = 5;
  std::uint64_t seed = 20260809ull;
  double probe_h_rel = 1e-4;
  bool compute_criticality = true;
  bool compute_control_point = true;
  bool strict_truncation = false;
  int jobs = 1;
  PsiSolveOptions solver;
};

// Builds one wave per requested speed (eps = sqrt(c - c0)), evaluates the
// functionals, and assembles the table. Per-point failures are recorded as
// gaps instead of aborting the sweep.
BranchTable sweep(const StratificationProfile& profile, const VerticalMode& mode,
                  const KdvCoefficients& coeffs,
                  const std::vector<double>& c_values, const GridPolicy& policy,
                  const SweepOptions& options = {});

// Fills m_second_fd / neg_dIdc_fd from the table's m and I columns. Requires
// at least 3 points with uniform spacing in c.
void second_derivative_m(BranchTable& table);

// Uniform-in-c speed list covering eps in [eps_min, eps_max].
std::vector<double> uniform_speed_samples(double c0, double eps_min,
                                          double eps_max, int count);

}  // namespace stratmoi
