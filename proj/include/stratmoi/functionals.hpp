#pragma once

#include "stratmoi/stratification.hpp"
#include "stratmoi/wavefields.hpp"

#include <cstdint>
#include <vector>

namespace stratmoi {

// The energy/momentum pair and their Casimir corrections:
//   Htilde = int 1/2 rho |grad psi|^2 + g y (rho - rho_bar)
//   Itilde = int y sigma
//   dH     = -int g F(rho, y),          F(rho, y) = int_{rho_bar(y)}^{rho} rho_bar^{-1}
//   dI     = -int rho_bar^{-1}(rho) sigma
//   H = Htilde + dH, I = Itilde + dI, m = H - c I.
// dH carries no sigma factor: only then does (H - cI)' vanish on the quiescent
// state and dH - c dI stay a Casimir of the skew operator. The sigma-bearing
// variant is kept selectable so the difference can be demonstrated.
struct FunctionalValues {
  double Htilde = 0.0;
  double Itilde = 0.0;
  double dH = 0.0;
  double dI = 0.0;
  double H = 0.0;
  double I = 0.0;
  double m = 0.0;
};

enum class CasimirForm { sigma_free, sigma_bearing };

enum class Functional { H, I, H_minus_cI, Htilde, Itilde };

FunctionalValues evaluate_functionals(const WaveField& wave,
                                      const StratificationProfile& profile,
                                      CasimirForm form = CasimirForm::sigma_free);

// (1/c) int rho |grad psi|^2; equals I exactly on exact travelling waves.
double momentum_kinetic_form(const WaveField& wave);

// Closed-form first variation of I:
//   dI/drho   = -sigma / rho_bar'(rho_bar^{-1}(rho)),
//   dI/dsigma = y - rho_bar^{-1}(rho).
Variation first_variation_I(const WaveField& wave,
                            const StratificationProfile& profile);

// Quadrature-weighted L2 pairing over both components.
double inner_product(const Grid2D& grid, const Variation& a, const Variation& b);
double variation_norm(const Grid2D& grid, const Variation& v);

double evaluate_selected(Functional f, const WaveField& wave,
                         const StratificationProfile& profile, CasimirForm form);

// Central-difference directional derivative (F(phi + h eta) - F(phi - h eta))
// / (2h). Perturbed states re-solve psi from (rho, sigma) whenever the
// selector involves the kinetic energy, so the probe sees the full state
// dependence. Throws std::out_of_range when a perturbed state leaves the
// admissible density range.
double gateaux(Functional f, const WaveField& wave,
               const StratificationProfile& profile, const Variation& eta,
               double h, CasimirForm form = CasimirForm::sigma_free,
               const PsiSolveOptions& solver = {});

// Symmetric four-corner estimate of the Hessian bilinear form
// <eta, F''(phi) zeta>.
double hessian_bilinear(Functional f, const WaveField& wave,
                        const StratificationProfile& profile,
                        const Variation& eta, const Variation& zeta, double h,
                        CasimirForm form = CasimirForm::sigma_free,
                        const PsiSolveOptions& solver = {});

// Skew operator of the Hamiltonian pair, applied to v = (a, b):
//   J v = ( rho_y b_x - rho_x b_y,
//           rho_y a_x - rho_x a_y + sigma_y b_x - sigma_x b_y ).
// All derivatives central, one-sided at the domain ends.
Variation apply_J(const WaveField& wave, const Variation& v);

// Seeded, reproducible probe directions: products of Gaussians in x (widths
// and centers scaled to the grid half-width) and sin(m pi y) in y, normalized
// to unit grid norm. sin factors vanish at the walls, keeping perturbed
// densities admissible.
std::vector<Variation> direction_dictionary(const Grid2D& grid, int count,
                                            std::uint64_t seed);

// max-norm deviation of the state from the quiescent background; the natural
// scale for probe steps.
double state_scale(const WaveField& wave, const StratificationProfile& profile);

// h = rel * scale(phi) / |eta|.
double default_probe_step(const WaveField& wave,
                          const StratificationProfile& profile,
                          const Variation& eta, double rel = 1e-4);

}  // namespace stratmoi
