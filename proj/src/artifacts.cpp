#include "stratmoi/artifacts.hpp"

#include "stratmoi/io.hpp"
#include "stratmoi/parallel.hpp"
#include "stratmoi/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace stratmoi {

using nlohmann::json;

namespace {

void ensure_dir(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
}

void write_json(const std::filesystem::path& path, const json& j) {
  atomic_write(path, j.dump(2) + "\n");
}

struct Pipeline {
  StratificationProfile profile;
  VerticalMode mode;        // fundamental mode at the wave grid resolution
  KdvCoefficients coeffs;
  GridPolicy policy;
  PsiSolveOptions solver;
};

Pipeline make_pipeline(const RunConfig& cfg) {
  Pipeline p;
  p.profile = cfg.make_profile();
  p.mode = solve_fundamental_mode(p.profile, cfg.grid.ny, 1);
  p.coeffs = compute_coefficients(p.mode, p.profile, cfg.thresholds.genericity);
  p.policy.nx = cfg.grid.nx;
  p.policy.ny = cfg.grid.ny;
  p.policy.decay_lengths = cfg.grid.decay_lengths;
  p.policy.fixed_L = cfg.grid.L;
  p.solver.rel_tol = cfg.thresholds.elliptic_tol;
  p.solver.max_iter = cfg.thresholds.elliptic_max_iter;
  return p;
}

WaveBuilder make_builder(const Pipeline& p, const Grid2D& grid, bool strict) {
  return [&p, grid, strict](double eps) {
    return build_wave(p.mode, p.coeffs, p.profile, eps, grid, strict, nullptr);
  };
}

}  // namespace

json base_document(const RunConfig& cfg) {
  json j;
  j["schema_version"] = cfg.schema_version;
  j["config"] = config_to_json(cfg);
  return j;
}

std::vector<double> sweep_speeds(const RunConfig& cfg, double c0) {
  if (cfg.sweep.c_list.has_value()) return *cfg.sweep.c_list;
  if (cfg.sweep.eps_list.has_value()) {
    std::vector<double> cs;
    cs.reserve(cfg.sweep.eps_list->size());
    for (double e : *cfg.sweep.eps_list) cs.push_back(c0 + e * e);
    std::sort(cs.begin(), cs.end());
    return cs;
  }
  return uniform_speed_samples(c0, cfg.sweep.eps_min, cfg.sweep.eps_max,
                               cfg.sweep.points);
}

std::vector<std::string> emit_profile_validation(const RunConfig& cfg,
                                                 const std::filesystem::path& dir,
                                                 int samples) {
  ensure_dir(dir);
  const StratificationProfile profile = cfg.make_profile();
  const ProfileValidation report = validate(profile, samples);
  json j = base_document(cfg);
  j["samples"] = samples;
  j["passed"] = report.passed;
  j["min_density"] = report.min_density;
  j["max_density_gradient"] = report.max_density_gradient;
  j["max_inverse_roundtrip_error"] = report.max_inverse_roundtrip_error;
  json violations = json::array();
  for (const auto& v : report.violations) {
    json item;
    item["invariant"] = v.invariant;
    item["y"] = v.y;
    item["value"] = v.value;
    violations.push_back(item);
  }
  j["violations"] = violations;
  const auto path = dir / "profile_validation.json";
  write_json(path, j);
  return {path.string()};
}

std::vector<std::string> emit_modes(const RunConfig& cfg,
                                    const std::filesystem::path& dir) {
  ensure_dir(dir);
  const StratificationProfile profile = cfg.make_profile();
  const VerticalMode mode =
      solve_fundamental_mode(profile, cfg.mode.ny, cfg.mode.index);

  json j = base_document(cfg);
  j["c0"] = mode.c0;
  j["ny"] = mode.ny();
  j["mode_index"] = mode.mode_index;
  j["genericity_integral"] = genericity_integral(mode, profile);
  j["gradient_cubed_integral"] = gradient_cubed_integral(mode, profile);
  j["mode_residual"] = mode_residual(mode, profile);
  const auto jpath = dir / "modes.json";
  write_json(jpath, j);

  std::string csv = "y,phi0,phi0_prime\n";
  for (int k = 0; k < mode.ny(); ++k) {
    csv += format_full(mode.y[k]);
    csv += ',';
    csv += format_full(mode.phi0[k]);
    csv += ',';
    csv += format_full(mode.phi0_prime[k]);
    csv += '\n';
  }
  const auto cpath = dir / "mode_phi0.csv";
  atomic_write(cpath, csv);
  return {jpath.string(), cpath.string()};
}

std::vector<std::string> emit_coeffs(const RunConfig& cfg,
                                     const std::filesystem::path& dir) {
  ensure_dir(dir);
  const StratificationProfile profile = cfg.make_profile();
  const VerticalMode mode = solve_fundamental_mode(profile, cfg.mode.ny, 1);
  const KdvCoefficients coeffs =
      compute_coefficients(mode, profile, cfg.thresholds.genericity);
  json j = base_document(cfg);
  j["c0"] = coeffs.c0;
  j["r"] = coeffs.r;
  j["s"] = coeffs.s;
  j["a"] = coeffs.a;
  j["k"] = coeffs.k;
  j["I1"] = coeffs.I1;
  j["I2"] = coeffs.I2;
  j["I3"] = coeffs.I3;
  j["K"] = coeffs.K;
  j["genericity_integral"] = coeffs.genericity;
  j["normalization"] = "max |phi0| = 1, positive extremum";
  const auto path = dir / "coeffs.json";
  write_json(path, j);
  return {path.string()};
}

namespace {

std::vector<std::string> emit_wave_impl(const RunConfig& cfg,
                                        const std::filesystem::path& dir,
                                        bool strict, bool with_functionals) {
  ensure_dir(dir);
  const Pipeline p = make_pipeline(cfg);
  const Grid2D grid = make_grid(p.policy, p.coeffs.k, cfg.wave.eps);
  std::vector<std::string> warnings;
  const WaveField wave = build_wave(p.mode, p.coeffs, p.profile, cfg.wave.eps,
                                    grid, strict, &warnings);
  std::vector<std::string> files;
  if (!with_functionals) {
    const auto cpath = dir / "wave.csv";
    atomic_write(cpath, wave_csv_text(wave));
    files.push_back(cpath.string());

    json j = base_document(cfg);
    j["c0"] = p.mode.c0;
    j["c"] = wave.c;
    j["eps"] = wave.eps;
    j["L"] = grid.L;
    j["nx"] = grid.nx;
    j["ny"] = grid.ny;
    j["warnings"] = warnings;
    const auto jpath = dir / "wave_meta.json";
    write_json(jpath, j);
    files.push_back(jpath.string());
    return files;
  }

  const FunctionalValues v = evaluate_functionals(wave, p.profile);
  json j = base_document(cfg);
  j["c0"] = p.mode.c0;
  j["c"] = wave.c;
  j["eps"] = wave.eps;
  j["values"]["Htilde"] = v.Htilde;
  j["values"]["Itilde"] = v.Itilde;
  j["values"]["dH"] = v.dH;
  j["values"]["dI"] = v.dI;
  j["values"]["H"] = v.H;
  j["values"]["I"] = v.I;
  j["values"]["m"] = v.m;
  j["I_kinetic_form"] = momentum_kinetic_form(wave);
  j["warnings"] = warnings;
  const auto path = dir / "functionals.json";
  write_json(path, j);
  files.push_back(path.string());
  return files;
}

}  // namespace

std::vector<std::string> emit_wave(const RunConfig& cfg,
                                   const std::filesystem::path& dir,
                                   bool strict) {
  return emit_wave_impl(cfg, dir, strict, false);
}

std::vector<std::string> emit_functionals(const RunConfig& cfg,
                                          const std::filesystem::path& dir,
                                          bool strict) {
  return emit_wave_impl(cfg, dir, strict, true);
}

std::vector<std::string> emit_residuals(const RunConfig& cfg,
                                        const std::filesystem::path& dir,
                                        int jobs) {
  ensure_dir(dir);
  const Pipeline p = make_pipeline(cfg);
  const int ndir = cfg.probes.directions;
  std::vector<double> eps_list = cfg.probes.eps_list;

  struct Row {
    double eps;
    int direction;
    double value;
    double value_half;
  };
  std::vector<std::vector<Row>> rows(eps_list.size());
  parallel_for(static_cast<int>(eps_list.size()), jobs, [&](int idx) {
    const double eps = eps_list[idx];
    const Grid2D grid = make_grid(p.policy, p.coeffs.k, eps);
    const WaveField wave =
        build_wave(p.mode, p.coeffs, p.profile, eps, grid, false, nullptr);
    const auto dirs = direction_dictionary(grid, ndir, cfg.probes.seed);
    for (int d = 0; d < ndir; ++d) {
      const double h =
          default_probe_step(wave, p.profile, dirs[d], cfg.probes.h_rel);
      const double r0 = gateaux(Functional::H_minus_cI, wave, p.profile, dirs[d],
                                h, CasimirForm::sigma_free, p.solver);
      const double r1 = gateaux(Functional::H_minus_cI, wave, p.profile, dirs[d],
                                0.5 * h, CasimirForm::sigma_free, p.solver);
      rows[idx].push_back({eps, d, r0, r1});
    }
  });

  std::string csv = "eps,direction,value,value_half_step\n";
  for (const auto& block : rows)
    for (const Row& r : block) {
      csv += format_full(r.eps);
      csv += ',';
      csv += std::to_string(r.direction);
      csv += ',';
      csv += format_full(r.value);
      csv += ',';
      csv += format_full(r.value_half);
      csv += '\n';
    }
  const auto cpath = dir / "criticality_residuals.csv";
  atomic_write(cpath, csv);

  // fitted decay order per direction
  json j = base_document(cfg);
  json orders = json::array();
  for (int d = 0; d < ndir; ++d) {
    Eigen::ArrayXd lx(eps_list.size()), ly(eps_list.size());
    bool usable = eps_list.size() >= 2;
    for (size_t idx = 0; idx < eps_list.size(); ++idx) {
      const double v = std::abs(rows[idx][d].value);
      if (!(v > 0.0)) usable = false;
      lx[static_cast<Eigen::Index>(idx)] = std::log(eps_list[idx]);
      ly[static_cast<Eigen::Index>(idx)] = usable ? std::log(v) : 0.0;
    }
    json entry;
    entry["direction"] = d;
    if (usable)
      entry["fitted_order"] = fit_line(lx, ly).slope;
    else
      entry["fitted_order"] = nullptr;
    orders.push_back(entry);
  }
  j["fitted_orders"] = orders;
  const auto jpath = dir / "residuals.json";
  write_json(jpath, j);
  return {cpath.string(), jpath.string()};
}

BranchArtifacts emit_branch(const RunConfig& cfg,
                            const std::filesystem::path& dir, int jobs,
                            bool strict) {
  ensure_dir(dir);
  const Pipeline p = make_pipeline(cfg);
  const std::vector<double> cs = sweep_speeds(cfg, p.mode.c0);

  SweepOptions options;
  options.direction_count = cfg.probes.directions;
  options.seed = cfg.probes.seed;
  options.probe_h_rel = cfg.probes.h_rel;
  options.jobs = jobs;
  options.strict_truncation = strict;
  options.solver = p.solver;
  BranchArtifacts out;
  out.table = sweep(p.profile, p.mode, p.coeffs, cs, p.policy, options);
  const BranchTable& table = out.table;

  std::string csv =
      "eps,c,I_def,I_kin,m,m_second_fd,m_second_closed,criticality_residual\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (size_t i = 0; i < table.points.size(); ++i) {
    const BranchPoint& pt = table.points[i];
    const double closed =
        pt.c > table.c0 ? -1.5 * table.K * std::sqrt(pt.c - table.c0) : nan;
    csv += format_full(pt.eps);
    csv += ',';
    csv += format_full(pt.c);
    csv += ',';
    csv += format_full(pt.ok ? pt.I_def : nan);
    csv += ',';
    csv += format_full(pt.ok ? pt.I_kin : nan);
    csv += ',';
    csv += format_full(pt.ok ? pt.m : nan);
    csv += ',';
    csv += format_full(table.m_second_fd[i]);
    csv += ',';
    csv += format_full(closed);
    csv += ',';
    csv += format_full(pt.ok ? pt.criticality_residual : nan);
    csv += '\n';
  }
  const auto cpath = dir / "branch.csv";
  atomic_write(cpath, csv);
  out.files.push_back(cpath.string());

  json j = base_document(cfg);
  j["c0"] = table.c0;
  j["K"] = table.K;
  if (table.momentum_fit) {
    j["momentum_fit"]["exponent"] = table.momentum_fit->exponent;
    j["momentum_fit"]["prefactor"] = table.momentum_fit->prefactor;
  }
  if (table.m_second_fit) {
    j["m_second_fit"]["exponent"] = table.m_second_fit->exponent;
    j["m_second_fit"]["prefactor"] = table.m_second_fit->prefactor;
  }
  j["control_refinement_gap"] = table.control_refinement_gap;
  json warn = json::array();
  for (const auto& w : table.warnings) warn.push_back(w);
  for (const auto& w : validate_config(cfg)) warn.push_back(w);
  j["warnings"] = warn;
  int gaps = 0;
  for (const auto& pt : table.points)
    if (!pt.ok) ++gaps;
  j["gaps"] = gaps;
  const auto jpath = dir / "branch_summary.json";
  write_json(jpath, j);
  out.files.push_back(jpath.string());
  return out;
}

ChainArtifacts emit_chain(const RunConfig& cfg, const std::filesystem::path& dir,
                          int jobs) {
  (void)jobs;
  ensure_dir(dir);
  const Pipeline p = make_pipeline(cfg);
  const double eps =
      *std::max_element(cfg.probes.eps_list.begin(), cfg.probes.eps_list.end());
  const Grid2D grid = make_grid(p.policy, p.coeffs.k, eps);
  const auto dirs =
      direction_dictionary(grid, cfg.probes.directions, cfg.probes.seed);

  ChainOptions options;
  options.delta_c = cfg.probes.delta_c_factor * eps * eps;
  options.hessian_h_rel = cfg.probes.hessian_h_rel;
  options.noise_factor = cfg.thresholds.chain_noise_factor;
  options.solver = p.solver;
  ChainArtifacts out;
  out.report = run_chain_checks(make_builder(p, grid, false), p.profile, eps,
                                dirs, options);
  const ChainReport& rep = out.report;
  out.invariants_pass = rep.fredholm.chain_terminates && rep.fredholm.m_second < 0.0;

  json j = base_document(cfg);
  j["eps"] = rep.eps;
  j["c"] = rep.c;
  j["jqt_residual"]["rho"] = rep.jqt.rho_component;
  j["jqt_residual"]["sigma"] = rep.jqt.sigma_component;
  j["eigen_residuals"] = rep.eigen_residuals;
  j["eigen_residual_dx"] = rep.eigen_residual_dx;
  j["haupt_residuals"] = rep.haupt_residuals;
  j["fredholm"]["pairing"] = rep.fredholm.pairing;
  j["fredholm"]["direct_dIdc"] = rep.fredholm.direct_dIdc;
  j["fredholm"]["relative_gap"] = rep.fredholm.relative_gap;
  j["fredholm"]["noise"] = rep.fredholm.noise;
  j["fredholm"]["m_second"] = rep.fredholm.m_second;
  j["fredholm"]["chain_terminates"] = rep.fredholm.chain_terminates;
  j["invariants_pass"] = out.invariants_pass;
  // The adjoint-kernel direction I'(phi) is verified to lie in the discrete
  // kernel; its uniqueness is assumed, not checked.
  j["caveat"] =
      "adjoint kernel verified to contain I'(phi); uniqueness not verified";
  const auto path = dir / "chain_report.json";
  write_json(path, j);
  out.files.push_back(path.string());
  return out;
}

DataProducts produce_data_files(const RunConfig& cfg,
                                const std::filesystem::path& dir, int jobs,
                                bool strict) {
  DataProducts out;
  auto absorb = [&out](const std::vector<std::string>& files) {
    out.files.insert(out.files.end(), files.begin(), files.end());
  };
  absorb(emit_profile_validation(cfg, dir));
  absorb(emit_modes(cfg, dir));
  absorb(emit_coeffs(cfg, dir));
  absorb(emit_wave(cfg, dir, strict));
  absorb(emit_functionals(cfg, dir, strict));
  absorb(emit_residuals(cfg, dir, jobs));
  BranchArtifacts branch = emit_branch(cfg, dir, jobs, strict);
  absorb(branch.files);
  out.table = std::move(branch.table);
  absorb(emit_chain(cfg, dir, jobs).files);
  return out;
}

}  // namespace stratmoi
