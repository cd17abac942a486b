#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "stratmoi/kdv.hpp"
#include "stratmoi/wavefields.hpp"

#include <cmath>
#include <stdexcept>

using namespace stratmoi;

namespace {

const double kPi = 4.0 * std::atan(1.0);

struct Setup {
  StratificationProfile profile;
  VerticalMode mode;
  KdvCoefficients coeffs;
};

Setup default_setup(int ny) {
  Setup s{StratificationProfile::exponential_profile(1.0, 3.0, 1.0), {}, {}};
  s.mode = solve_fundamental_mode(s.profile, ny);
  s.coeffs = compute_coefficients(s.mode, s.profile);
  return s;
}

Grid2D wave_grid(const Setup& s, double eps, int nx, int ny) {
  return Grid2D{nx, ny, 10.0 / (s.coeffs.k * eps)};
}

}  // namespace

TEST_CASE("grid accessors hit the endpoints exactly") {
  Grid2D g{129, 65, 37.5};
  CHECK(g.x(0) == -37.5);
  CHECK(g.x(128) == 37.5);
  CHECK(g.y(0) == 0.0);
  CHECK(g.y(64) == 1.0);
}

TEST_CASE("zero amplitude reproduces the quiescent state bit for bit") {
  const Setup s = default_setup(65);
  const Grid2D grid{129, 65, 25.0};
  const WaveField w = build_wave(s.mode, s.coeffs, s.profile, 0.0, grid);
  CHECK(w.c == s.mode.c0);
  for (int j = 0; j < grid.ny; ++j) {
    const double rb = s.profile.density(grid.y(j));
    for (int i = 0; i < grid.nx; ++i) {
      CHECK(w.rho(j, i) == rb);
      CHECK(w.psi(j, i) == 0.0);
      CHECK(w.sigma(j, i) == 0.0);
    }
  }
}

TEST_CASE("crest streamfunction equals eps^2 a max(phi0)") {
  const Setup s = default_setup(257);
  const double eps = 0.1;
  const WaveField w = build_wave(s.mode, s.coeffs, s.profile, eps,
                                 wave_grid(s, eps, 513, 257));
  CHECK(w.psi.abs().maxCoeff() ==
        doctest::Approx(eps * eps * std::abs(s.coeffs.a)).epsilon(1e-12));
  CHECK(w.c == doctest::Approx(s.mode.c0 + eps * eps).epsilon(1e-15));
  // psi vanishes on the walls exactly
  CHECK(w.psi.row(0).abs().maxCoeff() == 0.0);
  CHECK(w.psi.row(256).abs().maxCoeff() == 0.0);
  // density stays inside the background range for suite amplitudes
  CHECK(w.rho.maxCoeff() <= s.profile.max_density());
  CHECK(w.rho.minCoeff() >= s.profile.min_density());
}

TEST_CASE("far-field density deviation obeys the sech^2 tail bound") {
  const Setup s = default_setup(129);
  const double eps = 0.1;
  const Grid2D grid = wave_grid(s, eps, 513, 129);
  const WaveField w = build_wave(s.mode, s.coeffs, s.profile, eps, grid);
  double max_dev_factor = 0.0;
  for (int j = 0; j < grid.ny; ++j)
    max_dev_factor = std::max(
        max_dev_factor, std::abs(s.profile.density_gradient(grid.y(j)) *
                                 s.mode.phi0[j]));
  const double bound = 4.0 * std::abs(s.coeffs.a) * (eps * eps / s.mode.c0) *
                       max_dev_factor *
                       std::exp(-2.0 * s.coeffs.k * eps * grid.L) *
                       (1.0 + 1e-9);  // sech^2 <= 4 e^{-2z} is tight at the argmax
  for (int j = 0; j < grid.ny; ++j) {
    const double rb = s.profile.density(grid.y(j));
    CHECK(std::abs(w.rho(j, 0) - rb) <= bound);
    CHECK(std::abs(w.rho(j, grid.nx - 1) - rb) <= bound);
  }
}

TEST_CASE("sigma of a zero streamfunction vanishes identically") {
  const Grid2D grid{65, 33, 10.0};
  const Eigen::ArrayXXd rho = Eigen::ArrayXXd::Constant(33, 65, 1.0);
  const Eigen::ArrayXXd psi = Eigen::ArrayXXd::Zero(33, 65);
  const Eigen::ArrayXXd sigma = sigma_from_psi(rho, psi, grid);
  CHECK(sigma.abs().maxCoeff() == 0.0);
}

TEST_CASE("manufactured uniform-density solution converges at second order") {
  // rho = 1, psi = sin(pi y) G(x), G = exp(-x^2/2):
  // sigma = (pi^2 G - G'') sin(pi y), G'' = (x^2 - 1) G
  auto error_on = [&](int nx, int ny) {
    const Grid2D grid{nx, ny, 8.0};
    Eigen::ArrayXXd rho = Eigen::ArrayXXd::Constant(ny, nx, 1.0);
    Eigen::ArrayXXd psi(ny, nx), exact(ny, nx);
    for (int i = 0; i < nx; ++i) {
      const double x = grid.x(i);
      const double G = std::exp(-0.5 * x * x);
      const double Gpp = (x * x - 1.0) * G;
      for (int j = 0; j < ny; ++j) {
        const double sy = std::sin(kPi * grid.y(j));
        psi(j, i) = sy * G;
        exact(j, i) = (kPi * kPi * G - Gpp) * sy;
      }
    }
    return (sigma_from_psi(rho, psi, grid) - exact).abs().maxCoeff();
  };
  const double e1 = error_on(129, 65);
  const double e2 = error_on(257, 129);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.3));
}

TEST_CASE("discrete divergence theorem on a compact streamfunction") {
  // psi compactly supported away from ALL boundaries, so rho grad(psi) . n
  // vanishes there and the interior flux sum telescopes to tail terms
  const Setup s = default_setup(65);
  const Grid2D grid{257, 65, 12.0};
  Eigen::ArrayXXd rho(65, 257), psi(65, 257);
  for (int i = 0; i < grid.nx; ++i) {
    const double x = grid.x(i);
    for (int j = 0; j < grid.ny; ++j) {
      const double y = grid.y(j);
      rho(j, i) = s.profile.density(y);
      psi(j, i) = std::exp(-0.5 * x * x) *
                  std::exp(-std::pow((y - 0.5) / 0.1, 2));
    }
  }
  const Eigen::ArrayXXd sigma = sigma_from_psi(rho, psi, grid);
  double total = 0.0, total_abs = 0.0;
  for (int i = 1; i < grid.nx - 1; ++i)
    for (int j = 1; j < grid.ny - 1; ++j) {
      total += sigma(j, i);
      total_abs += std::abs(sigma(j, i));
    }
  CHECK(std::abs(total) <= 1e-8 * total_abs);
}

TEST_CASE("psi_from_sigma inverts the interior stencil") {
  const Setup s = default_setup(65);
  const Grid2D grid{257, 65, 12.0};
  Eigen::ArrayXXd rho(65, 257), psi(65, 257);
  for (int i = 0; i < grid.nx; ++i) {
    const double x = grid.x(i);
    for (int j = 0; j < grid.ny; ++j) {
      rho(j, i) = s.profile.density(grid.y(j));
      psi(j, i) = std::exp(-0.5 * x * x) * std::sin(kPi * grid.y(j));
    }
  }
  // zero the columns at the x-ends so the Dirichlet data is consistent
  psi.col(0).setZero();
  psi.col(grid.nx - 1).setZero();
  const Eigen::ArrayXXd sigma = sigma_from_psi(rho, psi, grid);
  const Eigen::ArrayXXd back = psi_from_sigma(rho, sigma, grid);
  CHECK((back - psi).abs().maxCoeff() <= 1e-9 * psi.abs().maxCoeff());
}

TEST_CASE("psi recovery on a built wave") {
  const Setup s = default_setup(129);
  const double eps = 0.1;
  const WaveField w = build_wave(s.mode, s.coeffs, s.profile, eps,
                                 wave_grid(s, eps, 513, 129));
  const Eigen::ArrayXXd back = psi_from_sigma(w.rho, w.sigma, w.grid, &w.psi);
  CHECK((back - w.psi).abs().maxCoeff() <= 1e-6 * w.psi.abs().maxCoeff());
}

TEST_CASE("sigma approaches its long-wave leading form") {
  const Setup s = default_setup(257);
  std::vector<double> eps_list = {0.1, 0.05, 0.025};
  std::vector<double> dist;
  for (double eps : eps_list) {
    const Grid2D grid = wave_grid(s, eps, 1025, 257);
    const WaveField w = build_wave(s.mode, s.coeffs, s.profile, eps, grid);
    double worst = 0.0;
    for (int i = 0; i < grid.nx; ++i) {
      const double A = soliton(s.coeffs, eps * grid.x(i));
      for (int j = 0; j < grid.ny; ++j) {
        const double lead = -(s.profile.g / (s.mode.c0 * s.mode.c0)) *
                            s.profile.density_gradient(grid.y(j)) *
                            s.mode.phi0[j] * eps * eps * A;
        worst = std::max(worst, std::abs(w.sigma(j, i) - lead));
      }
    }
    dist.push_back(worst);
  }
  const double order =
      std::log(dist[0] / dist[2]) / std::log(eps_list[0] / eps_list[2]);
  CHECK(order >= 2.5);
}

TEST_CASE("constructed fields are even in x; x-derivatives are odd") {
  const Setup s = default_setup(65);
  const double eps = 0.1;
  const Grid2D grid = wave_grid(s, eps, 257, 65);
  const WaveField w = build_wave(s.mode, s.coeffs, s.profile, eps, grid);
  const int mid = (grid.nx - 1) / 2;
  for (int k = 1; k < 20; ++k) {
    CHECK(w.rho(30, mid + k) == w.rho(30, mid - k));
    CHECK(w.sigma(40, mid + k) == w.sigma(40, mid - k));
  }
  const Variation dx = partial_x(w);
  CHECK(std::abs(dx.d_rho(30, mid)) <= 1e-300);
  for (int k = 1; k < 20; ++k)
    CHECK(dx.d_rho(30, mid + k) == doctest::Approx(-dx.d_rho(30, mid - k))
                                       .epsilon(1e-12));
}

TEST_CASE("speed derivative passes a Richardson consistency check") {
  const Setup s = default_setup(65);
  const double eps = 0.1;
  const Grid2D grid = wave_grid(s, eps, 257, 65);
  const WaveBuilder builder = [&](double e) {
    return build_wave(s.mode, s.coeffs, s.profile, e, grid);
  };
  const double dc = eps * eps / 10.0;
  const Variation d1v = partial_c(builder, eps, dc);
  const Variation d2v = partial_c(builder, eps, dc / 2.0);
  const Variation d4v = partial_c(builder, eps, dc / 4.0);
  const double gap12 = (d1v.d_rho - d2v.d_rho).abs().maxCoeff();
  const double gap24 = (d2v.d_rho - d4v.d_rho).abs().maxCoeff();
  CHECK(gap12 / gap24 == doctest::Approx(4.0).epsilon(0.4));
}

TEST_CASE("speed step must stay below eps^2") {
  const Setup s = default_setup(65);
  const Grid2D grid = wave_grid(s, 0.1, 257, 65);
  const WaveBuilder builder = [&](double e) {
    return build_wave(s.mode, s.coeffs, s.profile, e, grid);
  };
  CHECK_THROWS_AS(partial_c(builder, 0.1, 0.011), std::invalid_argument);
}

TEST_CASE("strict truncation rejects an undersized domain") {
  const Setup s = default_setup(65);
  const double eps = 0.1;
  Grid2D grid = wave_grid(s, eps, 257, 65);
  grid.L *= 0.25;
  CHECK_THROWS_WITH_AS(
      build_wave(s.mode, s.coeffs, s.profile, eps, grid, true),
      doctest::Contains("truncation"), std::runtime_error);
  std::vector<std::string> warnings;
  CHECK_NOTHROW(
      build_wave(s.mode, s.coeffs, s.profile, eps, grid, false, &warnings));
  CHECK(warnings.size() == 1);
}

TEST_CASE("excessive amplitude drives the density negative") {
  const Setup s = default_setup(65);
  KdvCoefficients doctored = s.coeffs;
  doctored.a = -4000.0;  // deep depression wave
  doctored.r = -1.5 / doctored.a;
  const Grid2D grid{257, 65, 10.0 / (doctored.k * 0.1)};
  CHECK_THROWS_WITH_AS(build_wave(s.mode, doctored, s.profile, 0.1, grid),
                       doctest::Contains("amplitude too large"),
                       std::runtime_error);
}

TEST_CASE("mode and grid resolutions must agree") {
  const Setup s = default_setup(65);
  const Grid2D grid{257, 129, 30.0};
  CHECK_THROWS_AS(build_wave(s.mode, s.coeffs, s.profile, 0.05, grid),
                  std::invalid_argument);
}
