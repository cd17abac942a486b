#include "stratmoi/branch.hpp"

#include "stratmoi/parallel.hpp"
#include "stratmoi/quadrature.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace stratmoi {

PowerLawFit fit_power_law(const std::vector<double>& xs,
                          const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 3)
    throw std::domain_error("fit_power_law: need >= 3 matching samples");
  Eigen::ArrayXd lx(xs.size()), ly(ys.size());
  for (size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
      throw std::domain_error("fit_power_law: samples must be positive");
    lx[static_cast<Eigen::Index>(i)] = std::log(xs[i]);
    ly[static_cast<Eigen::Index>(i)] = std::log(ys[i]);
  }
  const LineFit fit = fit_line(lx, ly);
  return {fit.slope, std::exp(fit.intercept)};
}

Grid2D make_grid(const GridPolicy& policy, double k, double eps) {
  Grid2D grid;
  grid.nx = policy.nx;
  grid.ny = policy.ny;
  if (policy.fixed_L.has_value())
    grid.L = *policy.fixed_L;
  else if (eps > 0.0)
    grid.L = policy.decay_lengths / (k * eps);
  else
    grid.L = policy.decay_lengths / k;
  return grid;
}

BranchTable sweep(const StratificationProfile& profile, const VerticalMode& mode,
                  const KdvCoefficients& coeffs,
                  const std::vector<double>& c_values, const GridPolicy& policy,
                  const SweepOptions& options) {
  BranchTable table;
  table.c0 = mode.c0;
  table.K = coeffs.K;
  table.points.resize(c_values.size());
  for (size_t i = 1; i < c_values.size(); ++i)
    if (!(c_values[i] > c_values[i - 1]))
      throw std::invalid_argument("sweep: speeds must be strictly increasing");

  auto eval_point = [&](double c, const GridPolicy& local_policy) {
    BranchPoint point;
    point.c = c;
    if (!(c > mode.c0))
      throw std::invalid_argument("sweep: speed must exceed c0");
    const double eps = std::sqrt(c - mode.c0);
    point.eps = eps;
    const Grid2D grid = make_grid(local_policy, coeffs.k, eps);
    const WaveField wave = build_wave(mode, coeffs, profile, eps, grid,
                                      options.strict_truncation, nullptr);
    const FunctionalValues values = evaluate_functionals(wave, profile);
    point.I_def = values.I;
    point.I_kin = momentum_kinetic_form(wave);
    point.m = values.m;
    if (options.compute_criticality) {
      const auto directions =
          direction_dictionary(grid, options.direction_count, options.seed);
      double worst = 0.0;
      for (const Variation& eta : directions) {
        const double h = default_probe_step(wave, profile, eta, options.probe_h_rel);
        worst = std::max(worst, std::abs(gateaux(Functional::H_minus_cI, wave,
                                                 profile, eta, h,
                                                 CasimirForm::sigma_free,
                                                 options.solver)));
      }
      point.criticality_residual = worst;
    }
    point.ok = true;
    return point;
  };

  parallel_for(static_cast<int>(c_values.size()), options.jobs, [&](int i) {
    try {
      table.points[i] = eval_point(c_values[i], policy);
    } catch (const std::exception& e) {
      table.points[i].c = c_values[i];
      table.points[i].eps = c_values[i] > mode.c0
                                ? std::sqrt(c_values[i] - mode.c0)
                                : std::numeric_limits<double>::quiet_NaN();
      table.points[i].ok = false;
      table.points[i].error = e.what();
    }
  });

  for (const BranchPoint& p : table.points)
    if (!p.ok) {
      std::ostringstream os;
      os << "branch point at c = " << p.c << " skipped: " << p.error;
      table.warnings.push_back(os.str());
    }

  if (!table.points.empty()) {
    try {
      second_derivative_m(table);
    } catch (const std::exception& e) {
      // short or non-uniform sweeps keep NaN derivative columns
      table.warnings.push_back(std::string("second differences skipped: ") +
                               e.what());
    }
  }

  // quadrature control: one doubled-grid midpoint
  if (options.compute_control_point && !table.points.empty()) {
    const size_t mid = table.points.size() / 2;
    if (table.points[mid].ok) {
      GridPolicy doubled = policy;
      doubled.nx = 2 * (policy.nx - 1) + 1;
      doubled.ny = 2 * (policy.ny - 1) + 1;
      try {
        const double c = table.points[mid].c;
        const double eps = std::sqrt(c - mode.c0);
        const Grid2D grid = make_grid(doubled, coeffs.k, eps);
        const VerticalMode fine =
            solve_fundamental_mode(profile, grid.ny, mode.mode_index);
        const KdvCoefficients fine_coeffs = compute_coefficients(fine, profile);
        const WaveField wave = build_wave(fine, fine_coeffs, profile, eps, grid,
                                          options.strict_truncation, nullptr);
        const double I_fine = evaluate_functionals(wave, profile).I;
        table.control_refinement_gap =
            std::abs(I_fine - table.points[mid].I_def) /
            std::max(std::abs(I_fine), 1e-300);
      } catch (const std::exception& e) {
        table.warnings.push_back(std::string("control point failed: ") + e.what());
      }
    }
  }

  // power-law fits over the available points
  std::vector<double> xs, ys;
  for (const BranchPoint& p : table.points)
    if (p.ok && p.c > table.c0 && p.I_def > 0.0) {
      xs.push_back(p.c - table.c0);
      ys.push_back(p.I_def);
    }
  if (xs.size() >= 3) table.momentum_fit = fit_power_law(xs, ys);

  xs.clear();
  ys.clear();
  for (size_t i = 0; i < table.points.size(); ++i)
    if (std::isfinite(table.m_second_fd[i]) && table.m_second_fd[i] < 0.0) {
      xs.push_back(table.points[i].c - table.c0);
      ys.push_back(-table.m_second_fd[i]);
    }
  if (xs.size() >= 3) table.m_second_fit = fit_power_law(xs, ys);

  return table;
}

void second_derivative_m(BranchTable& table) {
  const size_t n = table.points.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  table.m_second_fd.assign(n, nan);
  table.neg_dIdc_fd.assign(n, nan);
  if (n < 3)
    throw std::invalid_argument(
        "second_derivative_m: need at least 3 branch points");
  const double dc = table.points[1].c - table.points[0].c;
  for (size_t i = 1; i + 1 < n; ++i) {
    const double step = table.points[i + 1].c - table.points[i].c;
    if (std::abs(step - dc) > 1e-8 * std::abs(dc))
      throw std::invalid_argument(
          "second_derivative_m: branch points must be uniformly spaced in c");
  }
  for (size_t i = 1; i + 1 < n; ++i) {
    const BranchPoint& lo = table.points[i - 1];
    const BranchPoint& mid = table.points[i];
    const BranchPoint& hi = table.points[i + 1];
    if (!lo.ok || !mid.ok || !hi.ok) continue;
    table.m_second_fd[i] = (hi.m - 2.0 * mid.m + lo.m) / (dc * dc);
    table.neg_dIdc_fd[i] = -(hi.I_def - lo.I_def) / (2.0 * dc);
  }
}

std::vector<double> uniform_speed_samples(double c0, double eps_min,
                                          double eps_max, int count) {
  if (count < 1) throw std::invalid_argument("uniform_speed_samples: count >= 1");
  if (!(eps_min > 0.0) || !(eps_max > eps_min))
    throw std::invalid_argument(
        "uniform_speed_samples: need 0 < eps_min < eps_max");
  const double c_lo = c0 + eps_min * eps_min;
  const double c_hi = c0 + eps_max * eps_max;
  std::vector<double> cs(count);
  if (count == 1) {
    cs[0] = c_hi;
    return cs;
  }
  for (int i = 0; i < count; ++i)
    cs[i] = c_lo + (c_hi - c_lo) * static_cast<double>(i) / (count - 1);
  return cs;
}

}  // namespace stratmoi
