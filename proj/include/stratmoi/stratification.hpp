#pragma once

#include <string>
#include <vector>

namespace stratmoi {

enum class ProfileKind { exponential, linear, tanh_pycnocline };

std::string to_string(ProfileKind kind);
ProfileKind profile_kind_from_string(const std::string& name);

// Analytic background density rho_bar(y) on y in [0, 1], strictly positive and
// strictly decreasing, together with the hydrostatic pressure
// p_bar(y) = -g * int_0^y rho_bar. All evaluations are closed-form except the
// tanh inverse (safeguarded Newton) and the tanh Casimir integral (adaptive
// quadrature).
struct StratificationProfile {
  ProfileKind kind = ProfileKind::exponential;
  double g = 1.0;

  // exponential: rho0 * exp(-beta * y)
  double rho0 = 1.0;
  double beta = 1.0;
  // linear: rho0 at the bottom, rho_top at the top (rho_top < rho0)
  double rho_top = 0.5;
  // tanh pycnocline: rho0 * (1 - a_p * tanh((y - y_p) / d))
  double a_p = 0.05;
  double y_p = 0.5;
  double d = 0.1;

  double root_tol = 1e-13;        // Newton tolerance on y for the tanh inverse
  double casimir_quad_tol = 1e-12;  // adaptive-quadrature tolerance (tanh kind)

  static StratificationProfile exponential_profile(double rho0, double beta,
                                                   double g = 1.0);
  static StratificationProfile linear_profile(double rho_bottom, double rho_top,
                                              double g = 1.0);
  static StratificationProfile tanh_profile(double rho0, double a_p, double y_p,
                                            double d, double g = 1.0);

  double density(double y) const;
  double density_gradient(double y) const;
  double density_curvature(double y) const;
  double pressure(double y) const;

  double min_density() const { return density(1.0); }
  double max_density() const { return density(0.0); }

  // y = rho_bar^{-1}(varrho). Throws std::out_of_range when varrho leaves
  // [rho_bar(1), rho_bar(0)] beyond a small round-off slack.
  double inverse_density(double varrho) const;
  double inverse_density(double varrho, double y_guess) const;
  // d/dvarrho and d2/dvarrho2 of the inverse map.
  double inverse_density_slope(double varrho) const;
  double inverse_density_curvature(double varrho) const;

  // F(rho, y) = int_{rho_bar(y)}^{rho} rho_bar^{-1}(q) dq, evaluated in a
  // cancellation-free form (closed form for exponential/linear kinds).
  double casimir_density_integral(double rho, double y) const;
};

struct QuiescentSample {
  double rho;
  double rho_gradient;
  double pressure;
};

// Closed-form quiescent state at height y; throws std::domain_error outside
// [0, 1].
QuiescentSample evaluate(const StratificationProfile& profile, double y);

struct ProfileViolation {
  std::string invariant;
  double y;
  double value;
};

struct ProfileValidation {
  bool passed = true;
  double min_density = 0.0;
  double max_density_gradient = 0.0;  // most positive rho_bar'; must stay < 0
  double max_inverse_roundtrip_error = 0.0;
  std::vector<ProfileViolation> violations;
};

// Samples the profile invariants (positivity, strict decrease, inverse
// round-trip) on a uniform grid.
ProfileValidation validate(const StratificationProfile& profile, int samples);

}  // namespace stratmoi
