#include "stratmoi/modes.hpp"

#include "stratmoi/quadrature.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace stratmoi {

namespace {

struct SymTridiag {
  Eigen::ArrayXd diag;
  Eigen::ArrayXd off;  // size n-1
};

// Number of eigenvalues strictly below lambda (Sturm sequence via the LDL^T
// pivot recurrence).
int sturm_count(const SymTridiag& T, double lambda) {
  const Eigen::Index n = T.diag.size();
  int count = 0;
  double q = 1.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    q = T.diag[j] - lambda - (j > 0 ? T.off[j - 1] * T.off[j - 1] / q : 0.0);
    if (std::abs(q) < 1e-300) q = (q < 0.0 ? -1e-300 : 1e-300);
    if (q < 0.0) ++count;
  }
  return count;
}

// k-th smallest eigenvalue (0-based) by bisection on the Sturm count.
double kth_eigenvalue(const SymTridiag& T, int k) {
  const Eigen::Index n = T.diag.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double r = (j > 0 ? std::abs(T.off[j - 1]) : 0.0) +
                     (j + 1 < n ? std::abs(T.off[j]) : 0.0);
    lo = std::min(lo, T.diag[j] - r);
    hi = std::max(hi, T.diag[j] + r);
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(T, mid) > k)
      hi = mid;
    else
      lo = mid;
    if (hi - lo <= 1e-15 * std::max(std::abs(lo), std::abs(hi)) + 1e-300) break;
  }
  return 0.5 * (lo + hi);
}

// Tridiagonal solve of (T - lambda I) x = b with partial pivoting; the shifted
// matrix is nearly singular by construction, which is what inverse iteration
// wants.
Eigen::ArrayXd solve_shifted(const SymTridiag& T, double lambda,
                             Eigen::ArrayXd b) {
  const Eigen::Index n = T.diag.size();
  Eigen::ArrayXd d = T.diag - lambda;           // row j, column j
  Eigen::ArrayXd up = Eigen::ArrayXd::Zero(n);  // row j, column j+1
  Eigen::ArrayXd lo = Eigen::ArrayXd::Zero(n);  // row j+1, column j
  Eigen::ArrayXd fill = Eigen::ArrayXd::Zero(n);  // row j, column j+2 (pivot fill)
  for (Eigen::Index j = 0; j + 1 < n; ++j) {
    up[j] = T.off[j];
    lo[j] = T.off[j];
  }
  for (Eigen::Index j = 0; j + 1 < n; ++j) {
    if (std::abs(lo[j]) > std::abs(d[j])) {
      // swap rows j and j+1
      std::swap(d[j], lo[j]);
      const double t = up[j];
      up[j] = d[j + 1];
      d[j + 1] = t;
      if (j + 2 < n) {
        fill[j] = up[j + 1];
        up[j + 1] = 0.0;
      }
      std::swap(b[j], b[j + 1]);
    }
    if (std::abs(d[j]) < 1e-300) d[j] = (d[j] < 0.0 ? -1e-300 : 1e-300);
    const double m = lo[j] / d[j];
    d[j + 1] -= m * up[j];
    if (j + 2 < n) up[j + 1] -= m * fill[j];
    b[j + 1] -= m * b[j];
  }
  if (std::abs(d[n - 1]) < 1e-300) d[n - 1] = (d[n - 1] < 0.0 ? -1e-300 : 1e-300);
  Eigen::ArrayXd x(n);
  x[n - 1] = b[n - 1] / d[n - 1];
  if (n >= 2) {
    x[n - 2] = (b[n - 2] - up[n - 2] * x[n - 1]) / d[n - 2];
    for (Eigen::Index j = n - 3; j >= 0; --j)
      x[j] = (b[j] - up[j] * x[j + 1] - fill[j] * x[j + 2]) / d[j];
  }
  return x;
}

Eigen::ArrayXd inverse_iteration(const SymTridiag& T, double lambda) {
  const Eigen::Index n = T.diag.size();
  Eigen::ArrayXd w(n);
  const double pi = 4.0 * std::atan(1.0);
  for (Eigen::Index j = 0; j < n; ++j)
    w[j] = std::sin(pi * static_cast<double>(j + 1) / static_cast<double>(n + 1));
  w.matrix().normalize();
  double previous_overlap = 0.0;
  for (int it = 0; it < 10; ++it) {
    Eigen::ArrayXd z = solve_shifted(T, lambda, w);
    const double nrm = z.matrix().norm();
    if (!(nrm > 0.0) || !std::isfinite(nrm))
      throw std::runtime_error("mode solver: inverse iteration broke down");
    z /= nrm;
    const double overlap = std::abs((z * w).sum());
    w = z;
    if (it > 0 && std::abs(overlap - 1.0) < 1e-14 &&
        std::abs(overlap - previous_overlap) < 1e-14)
      break;
    previous_overlap = overlap;
  }
  return w;
}

int interior_sign_changes(const Eigen::ArrayXd& v) {
  const double floor_val = 1e-8 * v.abs().maxCoeff();
  int changes = 0;
  double last = 0.0;
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    if (std::abs(v[j]) <= floor_val) continue;
    if (last != 0.0 && v[j] * last < 0.0) ++changes;
    last = v[j];
  }
  return changes;
}

}  // namespace

VerticalMode solve_fundamental_mode(const StratificationProfile& profile, int ny,
                                    int mode_index) {
  if (ny < 16) throw std::invalid_argument("mode solver: ny >= 16 required");
  if (mode_index < 1)
    throw std::invalid_argument("mode solver: mode_index >= 1 required");
  const int n = ny - 2;  // interior nodes
  const double h = 1.0 / (ny - 1);

  // A v = lambda B v with A = -(flux form) SPD and B = -diag(rho_bar') > 0;
  // symmetrized to T = B^{-1/2} A B^{-1/2}.
  Eigen::ArrayXd face(ny - 1);  // rho_bar at half nodes
  for (int j = 0; j < ny - 1; ++j)
    face[j] = profile.density((j + 0.5) * h);
  Eigen::ArrayXd bdiag(n);
  for (int j = 0; j < n; ++j) {
    const double drho = profile.density_gradient((j + 1) * h);
    if (!(drho < 0.0))
      throw std::runtime_error("mode solver: rho_bar' >= 0 inside the domain");
    bdiag[j] = -drho;
  }
  SymTridiag T;
  T.diag.resize(n);
  T.off.resize(n - 1);
  for (int j = 0; j < n; ++j)
    T.diag[j] = (face[j] + face[j + 1]) / (h * h) / bdiag[j];
  for (int j = 0; j + 1 < n; ++j)
    T.off[j] = -face[j + 1] / (h * h) / std::sqrt(bdiag[j] * bdiag[j + 1]);

  const int wanted_changes = mode_index - 1;
  const int max_scan = mode_index + 4;
  for (int k = 0; k < max_scan; ++k) {
    const double lambda = kth_eigenvalue(T, k);
    const Eigen::ArrayXd w = inverse_iteration(T, lambda);
    Eigen::ArrayXd v = w / bdiag.sqrt();
    if (interior_sign_changes(v) != wanted_changes) continue;

    VerticalMode mode;
    mode.mode_index = mode_index;
    mode.c0 = std::sqrt(profile.g / lambda);
    mode.y.resize(ny);
    mode.phi0 = Eigen::ArrayXd::Zero(ny);
    for (int j = 0; j < ny; ++j)
      mode.y[j] = static_cast<double>(j) / (ny - 1);
    mode.phi0.segment(1, n) = v;

    // normalize: unit max magnitude, positive extremum
    Eigen::Index imax = 0;
    mode.phi0.abs().maxCoeff(&imax);
    mode.phi0 /= mode.phi0[imax];

    mode.phi0_prime.resize(ny);
    mode.phi0_prime[0] =
        (-3.0 * mode.phi0[0] + 4.0 * mode.phi0[1] - mode.phi0[2]) / (2.0 * h);
    mode.phi0_prime[ny - 1] = (3.0 * mode.phi0[ny - 1] - 4.0 * mode.phi0[ny - 2] +
                               mode.phi0[ny - 3]) /
                              (2.0 * h);
    for (int j = 1; j < ny - 1; ++j)
      mode.phi0_prime[j] = (mode.phi0[j + 1] - mode.phi0[j - 1]) / (2.0 * h);
    return mode;
  }
  throw std::runtime_error(
      "mode solver: no eigenvector with the requested interior sign count "
      "among the lowest eigenvalues");
}

double genericity_integral(const VerticalMode& mode,
                           const StratificationProfile& profile) {
  const int ny = mode.ny();
  Eigen::ArrayXd f(ny);
  for (int j = 0; j < ny; ++j)
    f[j] = profile.density(mode.y[j]) * std::pow(mode.phi0[j], 3);
  return integrate_samples(f, 1.0 / (ny - 1));
}

double gradient_cubed_integral(const VerticalMode& mode,
                               const StratificationProfile& profile) {
  const int ny = mode.ny();
  Eigen::ArrayXd f(ny);
  for (int j = 0; j < ny; ++j)
    f[j] = profile.density(mode.y[j]) * std::pow(mode.phi0_prime[j], 3);
  return integrate_samples(f, 1.0 / (ny - 1));
}

double mode_residual(const VerticalMode& mode,
                     const StratificationProfile& profile) {
  const int ny = mode.ny();
  const double h = 1.0 / (ny - 1);
  const double lambda = profile.g / (mode.c0 * mode.c0);
  double res_max = 0.0;
  double rhs_max = 0.0;
  for (int j = 1; j < ny - 1; ++j) {
    const double fe = profile.density((j + 0.5) * h);
    const double fw = profile.density((j - 0.5) * h);
    const double flux = (fe * (mode.phi0[j + 1] - mode.phi0[j]) -
                         fw * (mode.phi0[j] - mode.phi0[j - 1])) /
                        (h * h);
    const double rhs = lambda * profile.density_gradient(j * h) * mode.phi0[j];
    res_max = std::max(res_max, std::abs(flux - rhs));
    rhs_max = std::max(rhs_max, std::abs(rhs));
  }
  return res_max / std::max(rhs_max, 1e-300);
}

}  // namespace stratmoi
