#pragma once

#include "stratmoi/modes.hpp"
#include "stratmoi/stratification.hpp"

namespace stratmoi {

// Coefficients of the solitary-wave amplitude equation
//   A''(X) = -(1/s) A(X) - (r/s) A(X)^2,
// whose homoclinic solution is A(X) = a sech^2(k X) with a = -3/(2r) and
// k = 1/(2 sqrt(-s)). They come from the Fredholm solvability condition of the
// second-order expansion of the travelling-wave equation in streamfunction
// form: projecting onto the vertical mode gives
//   s = -(c0 / 2) I2 / I1,
//   r = -(3/4) (int rho_bar' phi0 phi0'^2) / I1
//       - (g / (2 c0^2)) (int rho_bar'' phi0^3) / I1.
// This choice is what makes the branch functionals obey m'(c) = -I(c) to the
// order the construction supports; see compute_coefficients for the check
// wiring. All quantities carry the mode normalization max |phi0| = 1.
struct KdvCoefficients {
  double c0 = 0.0;
  double r = 0.0;   // quadratic coefficient (solvability projection)
  double s = 0.0;   // dispersive coefficient, < 0
  double a = 0.0;   // soliton amplitude
  double k = 0.0;   // soliton inverse width
  double I1 = 0.0;  // int rho_bar phi0'^2
  double I2 = 0.0;  // int rho_bar phi0^2
  double I3 = 0.0;  // int rho_bar phi0'^3 (reported; not used for r)
  double J1 = 0.0;  // int rho_bar' phi0 phi0'^2
  double J2 = 0.0;  // int rho_bar'' phi0^3
  double genericity = 0.0;  // int rho_bar phi0^3
  double K = 0.0;   // (1/c0) * int A^2 dX * I1, > 0
};

// Simpson quadratures on the mode grid. Throws when either genericity
// integral falls below the threshold (quadratic theory inapplicable), when the
// dispersive sign convention is violated, or when K fails to be positive.
KdvCoefficients compute_coefficients(const VerticalMode& mode,
                                     const StratificationProfile& profile,
                                     double genericity_threshold = 1e-6);

// A(X) = a sech^2(k X).
double soliton(const KdvCoefficients& coeffs, double X);

// int_R A(X)^2 dX = (4/3) a^2 / k.
double soliton_mass(const KdvCoefficients& coeffs);

// K = (1/c0) * (int A^2 dX) * I1.
double instability_constant(const KdvCoefficients& coeffs);

}  // namespace stratmoi
