#pragma once

#include "stratmoi/kdv.hpp"
#include "stratmoi/modes.hpp"
#include "stratmoi/stratification.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace stratmoi {

// Uniform tensor grid: x in [-L, L] with nx nodes, y in [0, 1] with ny nodes.
// Fields are stored as (ny, nx) arrays, f(j, i) = f(y_j, x_i).
struct Grid2D {
  int nx = 1025;
  int ny = 257;
  double L = 100.0;

  double hx() const { return 2.0 * L / (nx - 1); }
  double hy() const { return 1.0 / (ny - 1); }
  double x(int i) const { return L * (2.0 * i / (nx - 1) - 1.0); }
  double y(int j) const { return static_cast<double>(j) / (ny - 1); }
  bool same_shape(const Grid2D& o) const {
    return nx == o.nx && ny == o.ny && L == o.L;
  }
};

// One gridded wave state: density rho, streamfunction psi (zero on the
// horizontal walls), and sigma = -div(rho grad psi).
struct WaveField {
  Grid2D grid;
  double c = 0.0;
  double eps = 0.0;
  Eigen::ArrayXXd rho;
  Eigen::ArrayXXd psi;
  Eigen::ArrayXXd sigma;
};

// A tangent/cotangent direction on the same grid as its base field.
struct Variation {
  Eigen::ArrayXXd d_rho;
  Eigen::ArrayXXd d_sigma;
};

// Leading-order wave at speed c = c0 + eps^2:
//   psi = eps^2 A(eps x) phi0(y),
//   rho = rho_bar(y) - (eps^2 / c0) A(eps x) rho_bar'(y) phi0(y),
// with sigma derived by sigma_from_psi. The mode must be sampled on the same
// vertical grid (mode.ny == grid.ny). eps == 0 reproduces the quiescent state
// bit for bit. Insufficient horizontal decay (L < 10 / (k eps)) is a warning,
// or an error in strict mode; non-positive density throws.
WaveField build_wave(const VerticalMode& mode, const KdvCoefficients& coeffs,
                     const StratificationProfile& profile, double eps,
                     const Grid2D& grid, bool strict_truncation = false,
                     std::vector<std::string>* warnings = nullptr);

// Flux-form second-order discretization of -div(rho grad psi) on interior
// nodes (arithmetic-mean face densities); one-sided second-order expanded form
// on the boundary ring.
Eigen::ArrayXXd sigma_from_psi(const Eigen::ArrayXXd& rho,
                               const Eigen::ArrayXXd& psi, const Grid2D& grid);

struct PsiSolveOptions {
  double rel_tol = 1e-13;
  int max_iter = 5000;
};

// Inverse of the interior flux-form operator: solves -div(rho grad psi) =
// sigma with psi = 0 on all four boundaries, by preconditioned CG (vertical
// line tridiagonal preconditioner, matrix-free). `guess`, when given, seeds
// the iteration. Exact discrete inverse of sigma_from_psi's interior stencil.
Eigen::ArrayXXd psi_from_sigma(const Eigen::ArrayXXd& rho,
                               const Eigen::ArrayXXd& sigma, const Grid2D& grid,
                               const Eigen::ArrayXXd* guess = nullptr,
                               const PsiSolveOptions& options = {});

// Central differences, one-sided second order at the ends.
Eigen::ArrayXXd partial_x(const Eigen::ArrayXXd& f, const Grid2D& grid);
Eigen::ArrayXXd partial_y(const Eigen::ArrayXXd& f, const Grid2D& grid);

// (d rho/dx, d sigma/dx) of a wave state.
Variation partial_x(const WaveField& wave);
// (d rho/dy, d sigma/dy); used as a structural negative-control direction.
Variation partial_y(const WaveField& wave);

using WaveBuilder = std::function<WaveField(double eps)>;

// Central speed derivative of the wave family: builds the two waves at
// c +- delta_c (same grid) and differences them. Requires delta_c < eps^2.
Variation partial_c(const WaveBuilder& builder, double eps, double delta_c);

}  // namespace stratmoi
