#include "stratmoi/stratification.hpp"

#include "stratmoi/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace stratmoi {

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::exponential: return "exponential";
    case ProfileKind::linear: return "linear";
    case ProfileKind::tanh_pycnocline: return "tanh-pycnocline";
  }
  return "unknown";
}

ProfileKind profile_kind_from_string(const std::string& name) {
  if (name == "exponential") return ProfileKind::exponential;
  if (name == "linear") return ProfileKind::linear;
  if (name == "tanh-pycnocline" || name == "tanh") return ProfileKind::tanh_pycnocline;
  throw std::invalid_argument("unknown profile kind '" + name + "'");
}

StratificationProfile StratificationProfile::exponential_profile(double rho0,
                                                                 double beta,
                                                                 double g) {
  StratificationProfile p;
  p.kind = ProfileKind::exponential;
  p.rho0 = rho0;
  p.beta = beta;
  p.g = g;
  return p;
}

StratificationProfile StratificationProfile::linear_profile(double rho_bottom,
                                                            double rho_top,
                                                            double g) {
  StratificationProfile p;
  p.kind = ProfileKind::linear;
  p.rho0 = rho_bottom;
  p.rho_top = rho_top;
  p.g = g;
  return p;
}

StratificationProfile StratificationProfile::tanh_profile(double rho0, double a_p,
                                                          double y_p, double d,
                                                          double g) {
  StratificationProfile p;
  p.kind = ProfileKind::tanh_pycnocline;
  p.rho0 = rho0;
  p.a_p = a_p;
  p.y_p = y_p;
  p.d = d;
  p.g = g;
  return p;
}

double StratificationProfile::density(double y) const {
  switch (kind) {
    case ProfileKind::exponential:
      return rho0 * std::exp(-beta * y);
    case ProfileKind::linear:
      return rho0 + (rho_top - rho0) * y;
    case ProfileKind::tanh_pycnocline:
      return rho0 * (1.0 - a_p * std::tanh((y - y_p) / d));
  }
  return 0.0;
}

double StratificationProfile::density_gradient(double y) const {
  switch (kind) {
    case ProfileKind::exponential:
      return -beta * rho0 * std::exp(-beta * y);
    case ProfileKind::linear:
      return rho_top - rho0;
    case ProfileKind::tanh_pycnocline: {
      const double t = std::tanh((y - y_p) / d);
      return -rho0 * a_p / d * (1.0 - t * t);
    }
  }
  return 0.0;
}

double StratificationProfile::density_curvature(double y) const {
  switch (kind) {
    case ProfileKind::exponential:
      return beta * beta * rho0 * std::exp(-beta * y);
    case ProfileKind::linear:
      return 0.0;
    case ProfileKind::tanh_pycnocline: {
      const double t = std::tanh((y - y_p) / d);
      return 2.0 * rho0 * a_p / (d * d) * t * (1.0 - t * t);
    }
  }
  return 0.0;
}

double StratificationProfile::pressure(double y) const {
  switch (kind) {
    case ProfileKind::exponential:
      return -g * rho0 * (1.0 - std::exp(-beta * y)) / beta;
    case ProfileKind::linear:
      return -g * (rho0 * y + 0.5 * (rho_top - rho0) * y * y);
    case ProfileKind::tanh_pycnocline: {
      // int_0^y tanh((s - y_p)/d) ds = d * [log cosh((y-y_p)/d) - log cosh(y_p/d)]
      const double lc = std::log(std::cosh((y - y_p) / d));
      const double lc0 = std::log(std::cosh(y_p / d));
      return -g * rho0 * (y - a_p * d * (lc - lc0));
    }
  }
  return 0.0;
}

namespace {

// Admits a sliver of round-off slack at the range ends, then clamps.
double checked_range_clamp(const StratificationProfile& p, double varrho) {
  const double lo = p.min_density();
  const double hi = p.max_density();
  const double slack = 1e-9 * (hi - lo);
  if (varrho < lo - slack || varrho > hi + slack) {
    std::ostringstream os;
    os << "density " << varrho << " outside background range [" << lo << ", "
       << hi << "]";
    throw std::out_of_range(os.str());
  }
  return std::clamp(varrho, lo, hi);
}

double tanh_inverse_newton(const StratificationProfile& p, double varrho,
                           double y_guess) {
  // rho_bar is strictly decreasing; keep a bisection bracket as safeguard.
  double lo = 0.0, hi = 1.0;
  double y = std::clamp(y_guess, 0.0, 1.0);
  for (int it = 0; it < 100; ++it) {
    const double f = p.density(y) - varrho;
    if (f > 0.0)
      lo = y;  // density too high -> true root lies above
    else
      hi = y;
    const double fp = p.density_gradient(y);
    double step = f / fp;  // fp < 0, so the sign works out below
    double y_next = y - step;
    if (!(y_next > lo && y_next < hi)) y_next = 0.5 * (lo + hi);
    const double dy = std::abs(y_next - y);
    y = y_next;
    if (dy <= p.root_tol) return y;
  }
  throw std::runtime_error("inverse_density: Newton iteration did not converge");
}

}  // namespace

double StratificationProfile::inverse_density(double varrho) const {
  return inverse_density(varrho, 0.5);
}

double StratificationProfile::inverse_density(double varrho, double y_guess) const {
  const double q = checked_range_clamp(*this, varrho);
  switch (kind) {
    case ProfileKind::exponential:
      return -std::log(q / rho0) / beta;
    case ProfileKind::linear:
      return (q - rho0) / (rho_top - rho0);
    case ProfileKind::tanh_pycnocline:
      return tanh_inverse_newton(*this, q, y_guess);
  }
  return 0.0;
}

double StratificationProfile::inverse_density_slope(double varrho) const {
  switch (kind) {
    case ProfileKind::exponential: {
      checked_range_clamp(*this, varrho);
      return -1.0 / (beta * varrho);
    }
    case ProfileKind::linear:
      checked_range_clamp(*this, varrho);
      return 1.0 / (rho_top - rho0);
    case ProfileKind::tanh_pycnocline: {
      const double y = inverse_density(varrho);
      return 1.0 / density_gradient(y);
    }
  }
  return 0.0;
}

double StratificationProfile::inverse_density_curvature(double varrho) const {
  const double y = inverse_density(varrho);
  const double dg = density_gradient(y);
  return -density_curvature(y) / (dg * dg * dg);
}

double StratificationProfile::casimir_density_integral(double rho, double y) const {
  const double rho_y = density(y);
  const double delta = rho - rho_y;
  if (delta == 0.0) return 0.0;
  checked_range_clamp(*this, rho);
  switch (kind) {
    case ProfileKind::exponential:
      // int_{rho_y}^{rho} (-log(q/rho0)/beta) dq, written against log1p to
      // avoid cancellation when rho is close to rho_bar(y).
      return y * delta - (rho * std::log1p(delta / rho_y) - delta) / beta;
    case ProfileKind::linear:
      return y * delta + 0.5 * delta * delta / (rho_top - rho0);
    case ProfileKind::tanh_pycnocline: {
      // Remainder after peeling off the constant part y of the inverse map.
      const auto integrand = [&](double q) {
        const double guess = y + (q - rho_y) / density_gradient(y);
        return inverse_density(q, guess) - y;
      };
      const double tail = adaptive_gauss_kronrod(
          integrand, rho_y, rho, casimir_quad_tol,
          casimir_quad_tol * std::abs(delta));
      return y * delta + tail;
    }
  }
  return 0.0;
}

QuiescentSample evaluate(const StratificationProfile& profile, double y) {
  if (!(y >= 0.0 && y <= 1.0)) {
    std::ostringstream os;
    os << "height y = " << y << " outside [0, 1]";
    throw std::domain_error(os.str());
  }
  return {profile.density(y), profile.density_gradient(y), profile.pressure(y)};
}

ProfileValidation validate(const StratificationProfile& profile, int samples) {
  if (samples < 2) throw std::invalid_argument("validate: need samples >= 2");
  ProfileValidation report;
  report.min_density = std::numeric_limits<double>::infinity();
  report.max_density_gradient = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double y = static_cast<double>(i) / (samples - 1);
    const double rho = profile.density(y);
    const double drho = profile.density_gradient(y);
    report.min_density = std::min(report.min_density, rho);
    report.max_density_gradient = std::max(report.max_density_gradient, drho);
    if (!(rho > 0.0))
      report.violations.push_back({"rho_bar > 0", y, rho});
    if (!(drho < 0.0))
      report.violations.push_back({"rho_bar' < 0", y, drho});
    if (rho > 0.0 && drho < 0.0) {
      // The y-accuracy of the inverse is limited by the conditioning of the
      // root problem: round-off in rho_bar maps back as eps * rho / |rho_bar'|.
      const double conditioning_floor =
          8.0 * std::numeric_limits<double>::epsilon() * rho / -drho;
      const double roundtrip_tol =
          profile.kind == ProfileKind::tanh_pycnocline
              ? std::max(10.0 * profile.root_tol, conditioning_floor)
              : std::max(1e-12, conditioning_floor);
      try {
        const double back = profile.inverse_density(rho, y);
        const double err = std::abs(back - y);
        report.max_inverse_roundtrip_error =
            std::max(report.max_inverse_roundtrip_error, err);
        if (err > roundtrip_tol)
          report.violations.push_back({"inverse round-trip", y, err});
      } catch (const std::exception&) {
        report.violations.push_back({"inverse round-trip", y,
                                     std::numeric_limits<double>::quiet_NaN()});
      }
    }
  }
  report.passed = report.violations.empty();
  return report;
}

}  // namespace stratmoi
