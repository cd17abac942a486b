#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "stratmoi/spectral_chain.hpp"

#include <cmath>

using namespace stratmoi;

namespace {

const double kPi = 4.0 * std::atan(1.0);

struct Setup {
  StratificationProfile profile;
  VerticalMode mode;
  KdvCoefficients coeffs;
};

Setup make_setup(const StratificationProfile& p, int ny) {
  Setup s{p, solve_fundamental_mode(p, ny), {}};
  s.coeffs = compute_coefficients(s.mode, s.profile);
  return s;
}

// wall-tapered y-derivative direction: "off-kernel" flavour while keeping
// perturbed densities admissible (the wave density equals the background
// range endpoints exactly on the walls)
Variation tapered_partial_y(const WaveField& w) {
  Variation v = partial_y(w);
  for (int j = 0; j < w.grid.ny; ++j) {
    const double taper = std::sin(kPi * w.grid.y(j));
    v.d_rho.row(j) *= taper;
    v.d_sigma.row(j) *= taper;
  }
  const double n = variation_norm(w.grid, v);
  v.d_rho /= n;
  v.d_sigma /= n;
  return v;
}

WaveField synthetic_state(const StratificationProfile& p, int nx, int ny,
                          double rho_amp, double sigma_amp) {
  Grid2D grid{nx, ny, 20.0};
  WaveField w;
  w.grid = grid;
  w.c = 1.0;
  w.eps = 0.0;
  w.rho.resize(ny, nx);
  w.psi = Eigen::ArrayXXd::Zero(ny, nx);
  w.sigma.resize(ny, nx);
  for (int i = 0; i < nx; ++i) {
    const double x = grid.x(i);
    const double gx = std::exp(-x * x / 9.0);
    const double hx = std::exp(-(x - 1.0) * (x - 1.0) / 16.0);
    for (int j = 0; j < ny; ++j) {
      const double y = grid.y(j);
      w.rho(j, i) = p.density(y) * (1.0 + rho_amp * gx * std::sin(kPi * y));
      w.sigma(j, i) = sigma_amp * hx * std::sin(2.0 * kPi * y);
    }
  }
  return w;
}

}  // namespace

TEST_CASE("skew-gradient identity: curved profiles converge at grid order 2") {
  const auto p = StratificationProfile::exponential_profile(1.0, 3.0, 1.0);
  const double r1 = check_JQT(synthetic_state(p, 513, 129, 0.02, 0.05), p).max();
  const double r2 = check_JQT(synthetic_state(p, 1025, 257, 0.02, 0.05), p).max();
  const double order = std::log2(r1 / r2);
  CHECK(order >= 1.7);
  CHECK(order <= 2.3);
}

TEST_CASE("skew-gradient identity: affine inverse map makes it discretely exact") {
  const auto p = StratificationProfile::linear_profile(1.0, 0.1, 1.0);
  const JqtResidual r = check_JQT(synthetic_state(p, 513, 129, 0.02, 0.05), p);
  CHECK(r.rho_component <= 1e-11);
  CHECK(r.sigma_component <= 1e-11);
}

TEST_CASE("skew-gradient identity on a constructed wave") {
  const auto p = StratificationProfile::exponential_profile(1.0, 3.0, 1.0);
  const double eps = 0.1;
  const Setup coarse = make_setup(p, 129);
  const Grid2D g1{513, 129, 10.0 / (coarse.coeffs.k * eps)};
  const double r1 =
      check_JQT(build_wave(coarse.mode, coarse.coeffs, p, eps, g1), p).max();
  const Setup fine = make_setup(p, 257);
  const Grid2D g2{1025, 257, g1.L};
  const double r2 =
      check_JQT(build_wave(fine.mode, fine.coeffs, p, eps, g2), p).max();
  CHECK(std::log2(r1 / r2) == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("fields constant in x give an exactly zero residual") {
  const auto p = StratificationProfile::exponential_profile(1.0, 3.0, 1.0);
  Grid2D grid{65, 65, 10.0};
  WaveField w;
  w.grid = grid;
  w.c = 1.0;
  w.eps = 0.0;
  w.rho.resize(65, 65);
  w.psi = Eigen::ArrayXXd::Zero(65, 65);
  w.sigma.resize(65, 65);
  for (int j = 0; j < 65; ++j) {
    w.rho.row(j).setConstant(p.density(grid.y(j)));
    w.sigma.row(j).setConstant(0.1 * std::sin(2.0 * kPi * grid.y(j)));
  }
  const JqtResidual r = check_JQT(w, p);
  CHECK(r.rho_component == 0.0);
  CHECK(r.sigma_component == 0.0);
}

TEST_CASE("kernel and generalized-kernel residuals shrink along the branch") {
  const auto p = StratificationProfile::linear_profile(1.0, 0.1, 1.0);
  const Setup s = make_setup(p, 129);
  PsiSolveOptions solver;
  std::vector<double> eigen_max, haupt_max;
  for (double eps : {0.1, 0.05}) {
    const Grid2D grid{513, 129, 10.0 / (s.coeffs.k * eps)};
    const WaveBuilder builder = [&, grid](double e) {
      return build_wave(s.mode, s.coeffs, p, e, grid);
    };
    const WaveField w = builder(eps);
    const auto dirs = direction_dictionary(grid, 3, 20260809ull);
    const double h = default_probe_step(w, p, dirs.front(), 1e-2);
    const auto er = check_eigenfunction(w, p, dirs, h, solver);
    const auto hr = check_generalized_eigenfunction(builder, p, eps,
                                                    0.05 * eps * eps, dirs, h,
                                                    solver);
    double emax = 0.0, hmax = 0.0;
    for (double v : er) emax = std::max(emax, std::abs(v));
    for (double v : hr) hmax = std::max(hmax, std::abs(v));
    eigen_max.push_back(emax);
    haupt_max.push_back(hmax);
  }
  CHECK(eigen_max[0] / eigen_max[1] >= 8.0);   // ~ order >= 3
  CHECK(haupt_max[0] / haupt_max[1] >= 2.8);   // ~ order >= 1.5
}

TEST_CASE("quadratic form along the x-derivative direction is small") {
  const auto p = StratificationProfile::linear_profile(1.0, 0.1, 1.0);
  const Setup s = make_setup(p, 129);
  const double eps = 0.08;
  const Grid2D grid{513, 129, 10.0 / (s.coeffs.k * eps)};
  const WaveField w = build_wave(s.mode, s.coeffs, p, eps, grid);
  PsiSolveOptions solver;
  auto unit = [&](const Variation& v) {
    const double n = variation_norm(grid, v);
    return Variation{v.d_rho / n, v.d_sigma / n};
  };
  const Variation dx = unit(partial_x(w));
  const Variation dy = tapered_partial_y(w);
  const double hx_step = default_probe_step(w, p, dx, 1e-2);
  const double quad = hessian_bilinear(Functional::H_minus_cI, w, p, dx, dx,
                                       hx_step, CasimirForm::sigma_free, solver);
  const double hy_step = default_probe_step(w, p, dy, 1e-2);
  const double control = hessian_bilinear(Functional::H_minus_cI, w, p, dy, dy,
                                          hy_step, CasimirForm::sigma_free,
                                          solver);
  CHECK(std::abs(quad) < 0.02 * std::abs(control));
}

TEST_CASE("eigenfunction residual beats the off-kernel control direction") {
  const auto p = StratificationProfile::linear_profile(1.0, 0.1, 1.0);
  const Setup s = make_setup(p, 129);
  const double eps = 0.1;
  const Grid2D grid{513, 129, 10.0 / (s.coeffs.k * eps)};
  const WaveField w = build_wave(s.mode, s.coeffs, p, eps, grid);
  const auto dirs = direction_dictionary(grid, 3, 20260809ull);
  const double h = default_probe_step(w, p, dirs.front(), 1e-2);
  PsiSolveOptions solver;
  const auto kernel_res = check_eigenfunction(w, p, dirs, h, solver);
  // replace the kernel direction d(phi)/dx by the off-kernel y-derivative
  // flavour and redo the same pairings
  const Variation dy = tapered_partial_y(w);
  for (size_t i = 0; i < dirs.size(); ++i) {
    const double control = std::abs(hessian_bilinear(
        Functional::H_minus_cI, w, p, dirs[i], dy, h, CasimirForm::sigma_free,
        solver));
    CHECK(std::abs(kernel_res[i]) < control);
  }
}

TEST_CASE("Fredholm scalar: positivity, agreement, and chain termination") {
  const auto p = StratificationProfile::linear_profile(1.0, 0.1, 1.0);
  const Setup s = make_setup(p, 257);
  const double eps = 0.1;
  const Grid2D grid{1025, 257, 10.0 / (s.coeffs.k * eps)};
  const WaveBuilder builder = [&, grid](double e) {
    return build_wave(s.mode, s.coeffs, p, e, grid);
  };
  const FredholmResult f = fredholm_scalar(builder, p, eps, eps * eps / 20.0);
  CHECK(f.pairing > 0.0);
  CHECK(f.relative_gap <= 1e-2);
  CHECK(f.chain_terminates);
  CHECK(f.m_second == -f.pairing);
  CHECK(f.m_second < 0.0);
  // the scalar approaches (3/2) K eps
  CHECK(f.pairing ==
        doctest::Approx(1.5 * s.coeffs.K * eps).epsilon(0.06));

  // linear-in-eps scaling
  const double eps2 = 0.05;
  const Grid2D grid2{1025, 257, 10.0 / (s.coeffs.k * eps2)};
  const WaveBuilder builder2 = [&, grid2](double e) {
    return build_wave(s.mode, s.coeffs, p, e, grid2);
  };
  const FredholmResult f2 = fredholm_scalar(builder2, p, eps2, eps2 * eps2 / 20.0);
  CHECK(f2.pairing / f.pairing == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("step guard on the speed derivative") {
  const auto p = StratificationProfile::linear_profile(1.0, 0.1, 1.0);
  const Setup s = make_setup(p, 65);
  const Grid2D grid{129, 65, 10.0 / (s.coeffs.k * 0.1)};
  const WaveBuilder builder = [&, grid](double e) {
    return build_wave(s.mode, s.coeffs, p, e, grid);
  };
  CHECK_THROWS_AS(fredholm_scalar(builder, p, 0.1, 0.02), std::invalid_argument);
}

TEST_CASE("full chain report on a suite wave") {
  const auto p = StratificationProfile::linear_profile(1.0, 0.1, 1.0);
  const Setup s = make_setup(p, 129);
  const double eps = 0.08;
  const Grid2D grid{513, 129, 10.0 / (s.coeffs.k * eps)};
  const WaveBuilder builder = [&, grid](double e) {
    return build_wave(s.mode, s.coeffs, p, e, grid);
  };
  const auto dirs = direction_dictionary(grid, 3, 20260809ull);
  const ChainReport report = run_chain_checks(builder, p, eps, dirs);
  CHECK(report.eps == eps);
  CHECK(report.jqt.max() <= 1e-10);  // affine inverse: discretely exact
  CHECK(report.eigen_residuals.size() == 3);
  CHECK(report.haupt_residuals.size() == 3);
  CHECK(report.fredholm.chain_terminates);
  CHECK(report.fredholm.m_second < 0.0);
  CHECK(std::abs(report.eigen_residual_dx) <= 1e-4);
}
