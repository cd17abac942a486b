#include "stratmoi/spectral_chain.hpp"

#include <cmath>
#include <stdexcept>

namespace stratmoi {

JqtResidual check_JQT(const WaveField& wave,
                      const StratificationProfile& profile) {
  const Variation iv = first_variation_I(wave, profile);
  const Variation jiv = apply_J(wave, iv);
  const Variation dx = partial_x(wave);
  JqtResidual res;
  const double rho_scale = dx.d_rho.abs().maxCoeff();
  const double sigma_scale = dx.d_sigma.abs().maxCoeff();
  res.rho_component =
      (jiv.d_rho + dx.d_rho).abs().maxCoeff() / std::max(rho_scale, 1e-300);
  res.sigma_component =
      (jiv.d_sigma + dx.d_sigma).abs().maxCoeff() / std::max(sigma_scale, 1e-300);
  return res;
}

std::vector<double> check_eigenfunction(const WaveField& wave,
                                        const StratificationProfile& profile,
                                        const std::vector<Variation>& directions,
                                        double h, const PsiSolveOptions& solver) {
  const Variation dx = partial_x(wave);
  std::vector<double> residuals;
  residuals.reserve(directions.size());
  for (const Variation& eta : directions)
    residuals.push_back(hessian_bilinear(Functional::H_minus_cI, wave, profile,
                                         eta, dx, h, CasimirForm::sigma_free,
                                         solver));
  return residuals;
}

std::vector<double> check_generalized_eigenfunction(
    const WaveBuilder& builder, const StratificationProfile& profile, double eps,
    double delta_c, const std::vector<Variation>& directions, double h,
    const PsiSolveOptions& solver) {
  const WaveField wave = builder(eps);
  const Variation dc = partial_c(builder, eps, delta_c);
  const Variation iv = first_variation_I(wave, profile);
  std::vector<double> residuals;
  residuals.reserve(directions.size());
  for (const Variation& eta : directions) {
    const double lhs = hessian_bilinear(Functional::H_minus_cI, wave, profile,
                                        eta, dc, h, CasimirForm::sigma_free,
                                        solver);
    const double rhs = inner_product(wave.grid, iv, eta);
    residuals.push_back(lhs - rhs);
  }
  return residuals;
}

namespace {

double pairing_at(const WaveBuilder& builder,
                  const StratificationProfile& profile, double eps,
                  double delta_c) {
  const WaveField wave = builder(eps);
  const Variation iv = first_variation_I(wave, profile);
  const Variation dc = partial_c(builder, eps, delta_c);
  return inner_product(wave.grid, iv, dc);
}

}  // namespace

FredholmResult fredholm_scalar(const WaveBuilder& builder,
                               const StratificationProfile& profile, double eps,
                               double delta_c, double noise_factor) {
  if (!(delta_c > 0.0) || !(delta_c < eps * eps))
    throw std::invalid_argument("fredholm_scalar: need 0 < delta_c < eps^2");
  FredholmResult res;
  res.pairing = pairing_at(builder, profile, eps, delta_c);
  const double pairing_half = pairing_at(builder, profile, eps, 0.5 * delta_c);
  res.noise = std::abs(res.pairing - pairing_half);

  const WaveField plus = builder(std::sqrt(eps * eps + delta_c));
  const WaveField minus = builder(std::sqrt(eps * eps - delta_c));
  const double ip = evaluate_functionals(plus, profile).I;
  const double im = evaluate_functionals(minus, profile).I;
  res.direct_dIdc = (ip - im) / (2.0 * delta_c);
  res.relative_gap = std::abs(res.pairing - res.direct_dIdc) /
                     std::max(std::abs(res.direct_dIdc), 1e-300);
  res.m_second = -res.pairing;
  res.chain_terminates =
      std::abs(res.pairing) > noise_factor * std::max(res.noise, 1e-300);
  return res;
}

ChainReport run_chain_checks(const WaveBuilder& builder,
                             const StratificationProfile& profile, double eps,
                             const std::vector<Variation>& directions,
                             const ChainOptions& options) {
  const double delta_c =
      options.delta_c > 0.0 ? options.delta_c : eps * eps / 20.0;
  const WaveField wave = builder(eps);

  ChainReport report;
  report.eps = eps;
  report.c = wave.c;
  report.jqt = check_JQT(wave, profile);

  const double h = default_probe_step(
      wave, profile,
      directions.empty() ? partial_x(wave) : directions.front(),
      options.hessian_h_rel);
  report.eigen_residuals =
      check_eigenfunction(wave, profile, directions, h, options.solver);
  const Variation dx = partial_x(wave);
  report.eigen_residual_dx =
      hessian_bilinear(Functional::H_minus_cI, wave, profile, dx, dx, h,
                       CasimirForm::sigma_free, options.solver);
  report.haupt_residuals = check_generalized_eigenfunction(
      builder, profile, eps, delta_c, directions, h, options.solver);
  report.fredholm =
      fredholm_scalar(builder, profile, eps, delta_c, options.noise_factor);
  return report;
}

}  // namespace stratmoi
