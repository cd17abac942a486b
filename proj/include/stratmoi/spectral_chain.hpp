#pragma once

#include "stratmoi/functionals.hpp"
#include "stratmoi/wavefields.hpp"

#include <vector>

namespace stratmoi {

// Componentwise normalized max-norms of J I'(phi) + d(phi)/dx; the identity
// J I'(phi) = -d(phi)/dx holds pointwise for any smooth state, so the discrete
// residual is pure differencing error, O(h^2).
struct JqtResidual {
  double rho_component = 0.0;
  double sigma_component = 0.0;
  double max() const { return std::max(rho_component, sigma_component); }
};

JqtResidual check_JQT(const WaveField& wave, const StratificationProfile& profile);

// <eta_i, (H - cI)''(phi) d(phi)/dx> over the direction dictionary; small for
// near-critical states since d(phi)/dx spans the kernel.
std::vector<double> check_eigenfunction(const WaveField& wave,
                                        const StratificationProfile& profile,
                                        const std::vector<Variation>& directions,
                                        double h,
                                        const PsiSolveOptions& solver = {});

// <eta_i, (H - cI)''(phi) d(phi)/dc> - <I'(phi), eta_i>; tests the
// generalized-eigenfunction relation along the speed branch.
std::vector<double> check_generalized_eigenfunction(
    const WaveBuilder& builder, const StratificationProfile& profile, double eps,
    double delta_c, const std::vector<Variation>& directions, double h,
    const PsiSolveOptions& solver = {});

// <I'(phi), d(phi)/dc> = dI/dc, with an independent central-difference
// estimate of dI/dc for cross-checking. chain_terminates reports whether the
// scalar clears the noise floor, i.e. whether the Jordan chain stops at
// length two (no second-order generalized eigenfunction exists).
struct FredholmResult {
  double pairing = 0.0;      // <I'(phi), d(phi)/dc>
  double direct_dIdc = 0.0;  // (I(c + dc) - I(c - dc)) / (2 dc)
  double relative_gap = 0.0;
  double m_second = 0.0;  // = -pairing
  double noise = 0.0;     // spread under delta_c refinement
  bool chain_terminates = false;
};

FredholmResult fredholm_scalar(const WaveBuilder& builder,
                               const StratificationProfile& profile, double eps,
                               double delta_c, double noise_factor = 10.0);

struct ChainOptions {
  double delta_c = 0.0;  // <= 0 means eps^2 / 20
  double hessian_h_rel = 1e-2;
  double noise_factor = 10.0;
  PsiSolveOptions solver;
};

struct ChainReport {
  double eps = 0.0;
  double c = 0.0;
  JqtResidual jqt;
  std::vector<double> eigen_residuals;
  double eigen_residual_dx = 0.0;  // quadratic form with eta = d(phi)/dx itself
  std::vector<double> haupt_residuals;
  FredholmResult fredholm;
};

// Full weak-form verification at one amplitude. Caveat: the adjoint-kernel
// direction I'(phi) is checked to lie in the discrete kernel; its uniqueness
// is not (and cannot be) verified here.
ChainReport run_chain_checks(const WaveBuilder& builder,
                             const StratificationProfile& profile, double eps,
                             const std::vector<Variation>& directions,
                             const ChainOptions& options = {});

}  // namespace stratmoi
