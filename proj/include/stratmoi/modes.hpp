#pragma once

#include "stratmoi/stratification.hpp"

#include <Eigen/Dense>

namespace stratmoi {

// Fundamental (or higher) eigenpair of the long-wave vertical problem
//   (rho_bar * phi')' = (g / c0^2) * rho_bar' * phi,  phi(0) = phi(1) = 0,
// normalized so that max |phi| = 1 with a positive extremum.
struct VerticalMode {
  double c0 = 0.0;
  int mode_index = 1;  // 1 = fundamental (no interior sign change)
  Eigen::ArrayXd y;
  Eigen::ArrayXd phi0;
  Eigen::ArrayXd phi0_prime;

  int ny() const { return static_cast<int>(y.size()); }
};

// Flux-form second-order discretization on a uniform grid; the generalized
// tridiagonal eigenproblem is reduced to symmetric form and solved by Sturm
// bisection plus inverse iteration. Mode selection is by interior sign-change
// count, not eigenvalue index.
VerticalMode solve_fundamental_mode(const StratificationProfile& profile, int ny,
                                    int mode_index = 1);

// int_0^1 rho_bar * phi0^3 dy (Simpson on the mode grid). Callers compare the
// magnitude against a genericity threshold.
double genericity_integral(const VerticalMode& mode,
                           const StratificationProfile& profile);

// int_0^1 rho_bar * phi0'^3 dy; must be bounded away from zero for the
// quadratic weakly nonlinear theory to apply.
double gradient_cubed_integral(const VerticalMode& mode,
                               const StratificationProfile& profile);

// Max-norm of the interior flux-form residual of the mode equation, relative
// to the max-norm of the right-hand side (g/c0^2) rho_bar' phi0.
double mode_residual(const VerticalMode& mode,
                     const StratificationProfile& profile);

}  // namespace stratmoi
