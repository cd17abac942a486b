#include "stratmoi/kdv.hpp"

#include "stratmoi/quadrature.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace stratmoi {

KdvCoefficients compute_coefficients(const VerticalMode& mode,
                                     const StratificationProfile& profile,
                                     double genericity_threshold) {
  const int ny = mode.ny();
  const double h = 1.0 / (ny - 1);
  Eigen::ArrayXd f1(ny), f2(ny), f3(ny), f4(ny);
  for (int j = 0; j < ny; ++j) {
    const double y = mode.y[j];
    const double rho = profile.density(y);
    const double phi = mode.phi0[j];
    const double dphi = mode.phi0_prime[j];
    f1[j] = rho * dphi * dphi;
    f2[j] = rho * phi * phi;
    f3[j] = profile.density_gradient(y) * phi * dphi * dphi;
    f4[j] = profile.density_curvature(y) * phi * phi * phi;
  }
  KdvCoefficients coeffs;
  coeffs.c0 = mode.c0;
  coeffs.I1 = integrate_samples(f1, h);
  coeffs.I2 = integrate_samples(f2, h);
  coeffs.I3 = gradient_cubed_integral(mode, profile);
  coeffs.J1 = integrate_samples(f3, h);
  coeffs.J2 = integrate_samples(f4, h);
  coeffs.genericity = genericity_integral(mode, profile);

  if (std::abs(coeffs.genericity) < genericity_threshold) {
    std::ostringstream os;
    os << "degenerate stratification: |int rho_bar phi0^3| = "
       << std::abs(coeffs.genericity) << " below threshold "
       << genericity_threshold;
    throw std::runtime_error(os.str());
  }

  coeffs.s = -0.5 * coeffs.c0 * coeffs.I2 / coeffs.I1;
  coeffs.r = -0.75 * coeffs.J1 / coeffs.I1 -
             0.5 * profile.g / (coeffs.c0 * coeffs.c0) * coeffs.J2 / coeffs.I1;
  if (std::abs(coeffs.r) < genericity_threshold) {
    std::ostringstream os;
    os << "degenerate nonlinearity: |r| = " << std::abs(coeffs.r)
       << " below threshold " << genericity_threshold
       << " (quadratic amplitude equation inapplicable)";
    throw std::runtime_error(os.str());
  }
  if (!(coeffs.s < 0.0))
    throw std::runtime_error("dispersive coefficient s must be negative");
  coeffs.a = -1.5 / coeffs.r;
  coeffs.k = 0.5 / std::sqrt(-coeffs.s);
  coeffs.K = instability_constant(coeffs);
  if (!(coeffs.K > 0.0))
    throw std::runtime_error("instability constant K must be positive");
  return coeffs;
}

double soliton(const KdvCoefficients& coeffs, double X) {
  const double sech = 1.0 / std::cosh(coeffs.k * X);
  return coeffs.a * sech * sech;
}

double soliton_mass(const KdvCoefficients& coeffs) {
  if (!(coeffs.s < 0.0))
    throw std::invalid_argument("soliton_mass: requires s < 0");
  return (4.0 / 3.0) * coeffs.a * coeffs.a / coeffs.k;
}

double instability_constant(const KdvCoefficients& coeffs) {
  return soliton_mass(coeffs) * coeffs.I1 / coeffs.c0;
}

}  // namespace stratmoi
