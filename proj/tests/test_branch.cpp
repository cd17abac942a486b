#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "stratmoi/branch.hpp"

#include <cmath>

using namespace stratmoi;

namespace {

BranchTable synthetic_table(int n, double c0, double dc,
                            const std::function<double(double)>& m_of_c,
                            const std::function<double(double)>& I_of_c) {
  BranchTable t;
  t.c0 = c0;
  t.K = 1.0;
  for (int i = 0; i < n; ++i) {
    BranchPoint p;
    p.c = c0 + dc * (i + 1);
    p.eps = std::sqrt(p.c - c0);
    p.m = m_of_c(p.c);
    p.I_def = I_of_c(p.c);
    p.I_kin = p.I_def;
    p.ok = true;
    t.points.push_back(p);
  }
  return t;
}

}  // namespace

TEST_CASE("second differences recover a quadratic exactly") {
  BranchTable t = synthetic_table(
      9, 0.5, 1e-3, [](double c) { return 3.0 + 2.0 * c - 5.0 * c * c; },
      [](double c) { return 1.0 + c; });
  second_derivative_m(t);
  for (size_t i = 1; i + 1 < t.points.size(); ++i) {
    CHECK(t.m_second_fd[i] == doctest::Approx(-10.0).epsilon(1e-7));
    CHECK(t.neg_dIdc_fd[i] == doctest::Approx(-1.0).epsilon(1e-10));
  }
  CHECK(!std::isfinite(t.m_second_fd.front()));
  CHECK(!std::isfinite(t.m_second_fd.back()));
}

TEST_CASE("non-uniform spacing is rejected") {
  BranchTable t = synthetic_table(5, 0.5, 1e-3, [](double c) { return c; },
                                  [](double c) { return c; });
  t.points[3].c += 2e-4;
  CHECK_THROWS_AS(second_derivative_m(t), std::invalid_argument);
}

TEST_CASE("too few points are rejected") {
  BranchTable t = synthetic_table(2, 0.5, 1e-3, [](double c) { return c; },
                                  [](double c) { return c; });
  CHECK_THROWS_AS(second_derivative_m(t), std::invalid_argument);
}

TEST_CASE("power-law fit is exact on exact data") {
  std::vector<double> xs, ys;
  for (double x : {1e-4, 3e-4, 1e-3, 3e-3, 1e-2}) {
    xs.push_back(x);
    ys.push_back(7.0 * std::pow(x, 1.5));
  }
  const PowerLawFit fit = fit_power_law(xs, ys);
  CHECK(fit.exponent == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(fit.prefactor == doctest::Approx(7.0).epsilon(1e-12));
}

TEST_CASE("power-law fit rejects nonpositive samples and short inputs") {
  CHECK_THROWS_AS(fit_power_law({1.0, 2.0}, {1.0, 2.0}), std::domain_error);
  CHECK_THROWS_AS(fit_power_law({1.0, 2.0, -3.0}, {1.0, 2.0, 3.0}),
                  std::domain_error);
  CHECK_THROWS_AS(fit_power_law({1.0, 2.0, 3.0}, {1.0, 0.0, 3.0}),
                  std::domain_error);
}

TEST_CASE("uniform speed sampling covers the amplitude range") {
  const auto cs = uniform_speed_samples(0.5, 0.02, 0.1, 17);
  CHECK(cs.size() == 17);
  CHECK(cs.front() == doctest::Approx(0.5 + 4e-4).epsilon(1e-14));
  CHECK(cs.back() == doctest::Approx(0.5 + 1e-2).epsilon(1e-14));
  const double dc = cs[1] - cs[0];
  for (size_t i = 1; i < cs.size(); ++i)
    CHECK(cs[i] - cs[i - 1] == doctest::Approx(dc).epsilon(1e-10));
}

TEST_CASE("sweep over the default linear profile") {
  const auto p = StratificationProfile::linear_profile(1.0, 0.1, 1.0);
  const VerticalMode mode = solve_fundamental_mode(p, 257);
  const KdvCoefficients coeffs = compute_coefficients(mode, p);
  GridPolicy policy;  // production resolution: the identity check needs it
  policy.nx = 1025;
  policy.ny = 257;
  SweepOptions options;
  options.compute_criticality = false;
  options.compute_control_point = false;
  options.jobs = 2;
  const auto cs = uniform_speed_samples(mode.c0, 0.02, 0.05, 9);
  const BranchTable t = sweep(p, mode, coeffs, cs, policy, options);

  CHECK(t.points.size() == 9);
  double prev = 0.0;
  for (const BranchPoint& pt : t.points) {
    CHECK(pt.ok);
    CHECK(pt.I_def > prev);  // momentum grows monotonically along the branch
    prev = pt.I_def;
  }
  // sign of m'' and the identity with -dI/dc
  for (size_t i = 1; i + 1 < t.points.size(); ++i) {
    CHECK(t.m_second_fd[i] < 0.0);
    CHECK(std::abs(t.m_second_fd[i] - t.neg_dIdc_fd[i]) <=
          0.05 * std::abs(t.neg_dIdc_fd[i]));
  }
  CHECK(t.momentum_fit.has_value());
  CHECK(t.momentum_fit->exponent == doctest::Approx(1.5).epsilon(0.07));
  // a single amplitude point against the cubic law
  const BranchPoint& top = t.points.back();
  CHECK(top.I_def ==
        doctest::Approx(t.K * std::pow(top.c - t.c0, 1.5)).epsilon(0.03));
}

TEST_CASE("speeds below the long-wave speed are recorded as gaps") {
  const auto p = StratificationProfile::linear_profile(1.0, 0.1, 1.0);
  const VerticalMode mode = solve_fundamental_mode(p, 65);
  const KdvCoefficients coeffs = compute_coefficients(mode, p);
  GridPolicy policy;
  policy.nx = 129;
  policy.ny = 65;
  SweepOptions options;
  options.compute_criticality = false;
  options.compute_control_point = false;
  std::vector<double> cs = {mode.c0 - 1e-3, mode.c0 + 1e-3, mode.c0 + 2e-3,
                            mode.c0 + 3e-3};
  const BranchTable t = sweep(p, mode, coeffs, cs, policy, options);
  CHECK_FALSE(t.points[0].ok);
  CHECK(!t.points[0].error.empty());
  CHECK(t.points[1].ok);
  CHECK(t.warnings.size() >= 1);
}

TEST_CASE("empty sweep keeps the header quantities") {
  const auto p = StratificationProfile::linear_profile(1.0, 0.1, 1.0);
  const VerticalMode mode = solve_fundamental_mode(p, 65);
  const KdvCoefficients coeffs = compute_coefficients(mode, p);
  const BranchTable t = sweep(p, mode, coeffs, {}, GridPolicy{129, 65, 10.0, {}},
                              SweepOptions{});
  CHECK(t.points.empty());
  CHECK(t.c0 == mode.c0);
  CHECK(t.K == coeffs.K);
}

TEST_CASE("strictly increasing speeds are required") {
  const auto p = StratificationProfile::linear_profile(1.0, 0.1, 1.0);
  const VerticalMode mode = solve_fundamental_mode(p, 65);
  const KdvCoefficients coeffs = compute_coefficients(mode, p);
  std::vector<double> cs = {mode.c0 + 2e-3, mode.c0 + 1e-3};
  CHECK_THROWS_AS(
      sweep(p, mode, coeffs, cs, GridPolicy{129, 65, 10.0, {}}, SweepOptions{}),
      std::invalid_argument);
}
