#include "stratmoi/wavefields.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace stratmoi {

namespace {

void require_shape(const Eigen::ArrayXXd& f, const Grid2D& grid,
                   const char* what) {
  if (f.rows() != grid.ny || f.cols() != grid.nx) {
    std::ostringstream os;
    os << what << ": field shape (" << f.rows() << ", " << f.cols()
       << ") does not match grid (" << grid.ny << ", " << grid.nx << ")";
    throw std::invalid_argument(os.str());
  }
}

// One-sided/central first and second derivatives at a single node. Written
// against differences from the base node so constant fields differentiate to
// an exact zero.
double d1(const Eigen::ArrayXXd& f, int j, int i, int dj, int di, int m,
          double h) {
  // m = index along the derivative direction, bounds nm
  const int nm = dj ? static_cast<int>(f.rows()) : static_cast<int>(f.cols());
  auto at = [&](int s) { return f(j + dj * s, i + di * s); };
  if (m == 0)
    return (4.0 * (at(1) - at(0)) - (at(2) - at(0))) / (2.0 * h);
  if (m == nm - 1)
    return (-4.0 * (at(-1) - at(0)) + (at(-2) - at(0))) / (2.0 * h);
  return (at(1) - at(-1)) / (2.0 * h);
}

double d2(const Eigen::ArrayXXd& f, int j, int i, int dj, int di, int m,
          double h) {
  const int nm = dj ? static_cast<int>(f.rows()) : static_cast<int>(f.cols());
  auto at = [&](int s) { return f(j + dj * s, i + di * s); };
  if (m == 0)
    return (-5.0 * (at(1) - at(0)) + 4.0 * (at(2) - at(0)) - (at(3) - at(0))) /
           (h * h);
  if (m == nm - 1)
    return (-5.0 * (at(-1) - at(0)) + 4.0 * (at(-2) - at(0)) -
            (at(-3) - at(0))) /
           (h * h);
  return ((at(1) - at(0)) + (at(-1) - at(0))) / (h * h);
}

}  // namespace

WaveField build_wave(const VerticalMode& mode, const KdvCoefficients& coeffs,
                     const StratificationProfile& profile, double eps,
                     const Grid2D& grid, bool strict_truncation,
                     std::vector<std::string>* warnings) {
  if (eps < 0.0) throw std::invalid_argument("build_wave: eps must be >= 0");
  if (mode.ny() != grid.ny)
    throw std::invalid_argument(
        "build_wave: mode and grid must share the vertical resolution");
  if (eps > 0.0) {
    const double required_L = 10.0 / (coeffs.k * eps);
    if (grid.L < required_L) {
      std::ostringstream os;
      os << "truncation: L = " << grid.L << " < 10/(k eps) = " << required_L
         << "; the soliton tail is not negligible at the domain ends";
      if (strict_truncation) throw std::runtime_error(os.str());
      if (warnings) warnings->push_back(os.str());
    }
  }

  WaveField w;
  w.grid = grid;
  w.eps = eps;
  w.c = mode.c0 + eps * eps;
  w.rho.resize(grid.ny, grid.nx);
  w.psi.resize(grid.ny, grid.nx);

  Eigen::ArrayXd rho_bar(grid.ny), drho_phi(grid.ny);
  for (int j = 0; j < grid.ny; ++j) {
    const double y = grid.y(j);
    rho_bar[j] = profile.density(y);
    drho_phi[j] = profile.density_gradient(y) * mode.phi0[j];
  }

  const double eps2 = eps * eps;
  for (int i = 0; i < grid.nx; ++i) {
    const double A = soliton(coeffs, eps * grid.x(i));
    w.psi.col(i) = eps2 * A * mode.phi0;
    w.rho.col(i) = rho_bar - (eps2 / mode.c0) * A * drho_phi;
  }

  if (!(w.rho.minCoeff() > 0.0)) {
    Eigen::Index jmin, imin;
    w.rho.minCoeff(&jmin, &imin);
    std::ostringstream os;
    os << "amplitude too large: rho <= 0 at (x, y) = (" << grid.x(imin) << ", "
       << grid.y(jmin) << ")";
    throw std::runtime_error(os.str());
  }

  w.sigma = sigma_from_psi(w.rho, w.psi, grid);
  return w;
}

Eigen::ArrayXXd sigma_from_psi(const Eigen::ArrayXXd& rho,
                               const Eigen::ArrayXXd& psi, const Grid2D& grid) {
  require_shape(rho, grid, "sigma_from_psi(rho)");
  require_shape(psi, grid, "sigma_from_psi(psi)");
  const int nx = grid.nx, ny = grid.ny;
  const double hx2 = grid.hx() * grid.hx();
  const double hy2 = grid.hy() * grid.hy();
  Eigen::ArrayXXd sigma(ny, nx);

  for (int i = 1; i < nx - 1; ++i) {
    for (int j = 1; j < ny - 1; ++j) {
      const double re = 0.5 * (rho(j, i + 1) + rho(j, i));
      const double rw = 0.5 * (rho(j, i) + rho(j, i - 1));
      const double rn = 0.5 * (rho(j + 1, i) + rho(j, i));
      const double rs = 0.5 * (rho(j, i) + rho(j - 1, i));
      sigma(j, i) =
          -((re * (psi(j, i + 1) - psi(j, i)) - rw * (psi(j, i) - psi(j, i - 1))) /
                hx2 +
            (rn * (psi(j + 1, i) - psi(j, i)) - rs * (psi(j, i) - psi(j - 1, i))) /
                hy2);
    }
  }

  // Boundary ring: expanded form -(rho_x psi_x + rho psi_xx + rho_y psi_y
  // + rho psi_yy) with one-sided second-order stencils.
  const double hx = grid.hx(), hy = grid.hy();
  auto expanded = [&](int j, int i) {
    const double rx = d1(rho, j, i, 0, 1, i, hx);
    const double ry = d1(rho, j, i, 1, 0, j, hy);
    const double px = d1(psi, j, i, 0, 1, i, hx);
    const double py = d1(psi, j, i, 1, 0, j, hy);
    const double pxx = d2(psi, j, i, 0, 1, i, hx);
    const double pyy = d2(psi, j, i, 1, 0, j, hy);
    return -(rx * px + rho(j, i) * pxx + ry * py + rho(j, i) * pyy);
  };
  for (int i = 0; i < nx; ++i) {
    sigma(0, i) = expanded(0, i);
    sigma(ny - 1, i) = expanded(ny - 1, i);
  }
  for (int j = 1; j < ny - 1; ++j) {
    sigma(j, 0) = expanded(j, 0);
    sigma(j, nx - 1) = expanded(j, nx - 1);
  }
  return sigma;
}

namespace {

// Applies the interior flux-form operator L u = -div(rho grad u) with
// homogeneous Dirichlet data (boundary entries of u are taken as zero).
void apply_interior_operator(const Eigen::ArrayXXd& fx, const Eigen::ArrayXXd& fy,
                             double hx2, double hy2, const Eigen::ArrayXXd& u,
                             Eigen::ArrayXXd& out) {
  const int nx = static_cast<int>(u.cols());
  const int ny = static_cast<int>(u.rows());
  for (int i = 1; i < nx - 1; ++i) {
    for (int j = 1; j < ny - 1; ++j) {
      out(j, i) = (fx(j, i) * (u(j, i) - u(j, i + 1)) +
                   fx(j, i - 1) * (u(j, i) - u(j, i - 1))) /
                      hx2 +
                  (fy(j, i) * (u(j, i) - u(j + 1, i)) +
                   fy(j - 1, i) * (u(j, i) - u(j - 1, i))) /
                      hy2;
    }
  }
}

double interior_dot(const Eigen::ArrayXXd& a, const Eigen::ArrayXXd& b) {
  // boundary entries are kept at zero, so a full contraction is safe
  return (a * b).sum();
}

}  // namespace

Eigen::ArrayXXd psi_from_sigma(const Eigen::ArrayXXd& rho,
                               const Eigen::ArrayXXd& sigma, const Grid2D& grid,
                               const Eigen::ArrayXXd* guess,
                               const PsiSolveOptions& options) {
  require_shape(rho, grid, "psi_from_sigma(rho)");
  require_shape(sigma, grid, "psi_from_sigma(sigma)");
  const int nx = grid.nx, ny = grid.ny;
  const double hx2 = grid.hx() * grid.hx();
  const double hy2 = grid.hy() * grid.hy();

  // face densities
  Eigen::ArrayXXd fx(ny, nx - 1), fy(ny - 1, nx);
  for (int i = 0; i < nx - 1; ++i)
    fx.col(i) = 0.5 * (rho.col(i) + rho.col(i + 1));
  for (int j = 0; j < ny - 1; ++j)
    fy.row(j) = 0.5 * (rho.row(j) + rho.row(j + 1));

  Eigen::ArrayXXd u = Eigen::ArrayXXd::Zero(ny, nx);
  if (guess != nullptr) {
    require_shape(*guess, grid, "psi_from_sigma(guess)");
    u.block(1, 1, ny - 2, nx - 2) = guess->block(1, 1, ny - 2, nx - 2);
  }

  Eigen::ArrayXXd rhs = Eigen::ArrayXXd::Zero(ny, nx);
  rhs.block(1, 1, ny - 2, nx - 2) = sigma.block(1, 1, ny - 2, nx - 2);
  const double rhs_norm = std::sqrt(interior_dot(rhs, rhs));
  if (rhs_norm == 0.0) return Eigen::ArrayXXd::Zero(ny, nx);

  // Vertical-line preconditioner: per interior column, the tridiagonal part of
  // the operator in y plus the diagonal x-contribution. LDL^T factors.
  Eigen::ArrayXXd pd(ny, nx), pl(ny, nx);
  pd.setZero();
  pl.setZero();
  for (int i = 1; i < nx - 1; ++i) {
    for (int j = 1; j < ny - 1; ++j)
      pd(j, i) = (fx(j, i) + fx(j, i - 1)) / hx2 +
                 (fy(j, i) + fy(j - 1, i)) / hy2;
    for (int j = 1; j < ny - 2; ++j) {
      const double off = -fy(j, i) / hy2;  // couples (j, j+1)
      const double l = off / pd(j, i);
      pl(j, i) = l;
      pd(j + 1, i) -= l * off;
    }
  }
  auto precondition = [&](const Eigen::ArrayXXd& r, Eigen::ArrayXXd& z) {
    z.setZero();
    for (int i = 1; i < nx - 1; ++i) {
      // forward sweep
      z(1, i) = r(1, i);
      for (int j = 2; j < ny - 1; ++j) z(j, i) = r(j, i) - pl(j - 1, i) * z(j - 1, i);
      for (int j = 1; j < ny - 1; ++j) z(j, i) /= pd(j, i);
      for (int j = ny - 3; j >= 1; --j) z(j, i) -= pl(j, i) * z(j + 1, i);
    }
  };

  Eigen::ArrayXXd Au = Eigen::ArrayXXd::Zero(ny, nx);
  apply_interior_operator(fx, fy, hx2, hy2, u, Au);
  Eigen::ArrayXXd r = rhs - Au;
  r.row(0).setZero();
  r.row(ny - 1).setZero();
  r.col(0).setZero();
  r.col(nx - 1).setZero();

  Eigen::ArrayXXd z = Eigen::ArrayXXd::Zero(ny, nx);
  precondition(r, z);
  Eigen::ArrayXXd p = z;
  double rz = interior_dot(r, z);
  const double tol = options.rel_tol * rhs_norm;

  for (int it = 0; it < options.max_iter; ++it) {
    if (std::sqrt(interior_dot(r, r)) <= tol) return u;
    apply_interior_operator(fx, fy, hx2, hy2, p, Au);
    const double pAp = interior_dot(p, Au);
    if (!(pAp > 0.0))
      throw std::runtime_error("psi_from_sigma: operator lost positivity");
    const double alpha = rz / pAp;
    u.block(1, 1, ny - 2, nx - 2) += alpha * p.block(1, 1, ny - 2, nx - 2);
    r.block(1, 1, ny - 2, nx - 2) -= alpha * Au.block(1, 1, ny - 2, nx - 2);
    precondition(r, z);
    const double rz_next = interior_dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    p.block(1, 1, ny - 2, nx - 2) =
        z.block(1, 1, ny - 2, nx - 2) + beta * p.block(1, 1, ny - 2, nx - 2);
  }
  throw std::runtime_error("psi_from_sigma: CG did not converge");
}

Eigen::ArrayXXd partial_x(const Eigen::ArrayXXd& f, const Grid2D& grid) {
  require_shape(f, grid, "partial_x");
  const int nx = grid.nx, ny = grid.ny;
  const double hx = grid.hx();
  Eigen::ArrayXXd g(ny, nx);
  g.col(0) =
      (4.0 * (f.col(1) - f.col(0)) - (f.col(2) - f.col(0))) / (2.0 * hx);
  g.col(nx - 1) = (-4.0 * (f.col(nx - 2) - f.col(nx - 1)) +
                   (f.col(nx - 3) - f.col(nx - 1))) /
                  (2.0 * hx);
  for (int i = 1; i < nx - 1; ++i)
    g.col(i) = (f.col(i + 1) - f.col(i - 1)) / (2.0 * hx);
  return g;
}

Eigen::ArrayXXd partial_y(const Eigen::ArrayXXd& f, const Grid2D& grid) {
  require_shape(f, grid, "partial_y");
  const int nx = grid.nx, ny = grid.ny;
  const double hy = grid.hy();
  Eigen::ArrayXXd g(ny, nx);
  g.row(0) =
      (4.0 * (f.row(1) - f.row(0)) - (f.row(2) - f.row(0))) / (2.0 * hy);
  g.row(ny - 1) = (-4.0 * (f.row(ny - 2) - f.row(ny - 1)) +
                   (f.row(ny - 3) - f.row(ny - 1))) /
                  (2.0 * hy);
  for (int j = 1; j < ny - 1; ++j)
    g.row(j) = (f.row(j + 1) - f.row(j - 1)) / (2.0 * hy);
  return g;
}

Variation partial_x(const WaveField& wave) {
  return {partial_x(wave.rho, wave.grid), partial_x(wave.sigma, wave.grid)};
}

Variation partial_y(const WaveField& wave) {
  return {partial_y(wave.rho, wave.grid), partial_y(wave.sigma, wave.grid)};
}

Variation partial_c(const WaveBuilder& builder, double eps, double delta_c) {
  if (!(delta_c > 0.0) || !(delta_c < eps * eps))
    throw std::invalid_argument(
        "partial_c: need 0 < delta_c < eps^2 so both waves stay on the branch");
  const WaveField plus = builder(std::sqrt(eps * eps + delta_c));
  const WaveField minus = builder(std::sqrt(eps * eps - delta_c));
  if (!plus.grid.same_shape(minus.grid))
    throw std::invalid_argument("partial_c: builder changed the grid");
  return {(plus.rho - minus.rho) / (2.0 * delta_c),
          (plus.sigma - minus.sigma) / (2.0 * delta_c)};
}

}  // namespace stratmoi
