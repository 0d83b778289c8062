#include "phonon/cli.hpp"

#include <cmath>
#include <ostream>

#include "phonon/analytic.hpp"
#include "phonon/liouville.hpp"
#include "phonon/observables.hpp"
#include "phonon/validate.hpp"

namespace phonon {

namespace {

void kv(std::ostream& out, const std::string& key, const std::string& value) {
  out << key << " = " << value << '\n';
}

void kv(std::ostream& out, const std::string& key, double value) { kv(out, key, format_number(value)); }

void print_params(std::ostream& out, const RunConfig& cfg) {
  const SystemParams& sp = cfg.params;
  kv(out, "units", cfg.units == Units::hertz ? "hertz" : "kappa");
  if (cfg.units == Units::hertz) kv(out, "kappa_hz", cfg.rate_unit_hz);
  kv(out, "g", sp.g);
  kv(out, "kappa", sp.kappa);
  kv(out, "gamma", sp.gamma);
  kv(out, "epsilon", sp.epsilon);
  kv(out, "delta_p", sp.delta_p);
  kv(out, "n_th", sp.n_th);
  kv(out, "cavity_detuning", sp.effective_cavity_detuning());
}

void print_preset(std::ostream& out) {
  const PresetReport r = run_device_preset();
  kv(out, "preset", "paper-sec4");
  kv(out, "g0_hz", r.device.g0_hz);
  kv(out, "alpha_abs", std::abs(r.linearization.alpha));
  kv(out, "alpha_phase", r.linearization.alpha_phase);
  kv(out, "g_eff_hz", r.linearization.g_eff);
  kv(out, "omega_m_hz", r.physical.omega_m);
  kv(out, "kappa_hz", r.device.kappa_hz);
  kv(out, "gamma_hz", r.device.gamma_hz);
  kv(out, "rwa_ratio", r.rwa_ratio);
  kv(out, "rwa", r.rwa == RwaStatus::ok ? "ok" : "warning");
  kv(out, "temperature_k", r.device.temperature_k);
  kv(out, "n_th_computed", r.n_th);
  kv(out, "cooperativity_preset", r.cooperativity);
  kv(out, "strong_blockade_condition", r.cooperativity > 100.0 ? "satisfied" : "not_satisfied");
}

int numerical_failure(std::ostream& err, const Error& e) {
  err << "error: " << e.what() << '\n';
  return kExitNumerical;
}

ConvergenceOptions convergence_options(const RunConfig& cfg) {
  ConvergenceOptions opts;
  opts.steady_state_tol = cfg.tol;
  opts.max_n_b = cfg.max_n_b;
  return opts;
}

int write_outputs(const SweepResult& result, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    std::filesystem::create_directories(cfg.outdir);
    const auto csv = cfg.outdir / (result.spec.name + ".csv");
    const auto svg = cfg.outdir / (result.spec.name + ".svg");
    write_csv(result, csv);
    render_svg(result, svg);
    std::size_t failed = 0;
    for (const auto& row : result.rows) failed += row.error.empty() ? 0 : 1;
    kv(out, "csv", csv.string());
    kv(out, "svg", svg.string());
    kv(out, "rows", std::to_string(result.rows.size()));
    kv(out, "failed_rows", std::to_string(failed));
  } catch (const Error& e) {
    return numerical_failure(err, e);
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.preset) print_preset(out);
  print_params(out, cfg);
  try {
    kv(out, "g2_analytic", g2_analytic(cfg.params));
    kv(out, "cooperativity", cooperativity(cfg.params));
    const ConvergedSteadyState solved =
        converge_truncation(cfg.params, cfg.truncation, cfg.conv_tol, convergence_options(cfg));
    const ObservableSet obs = observe(solved.report.rho);
    kv(out, "n_a", std::to_string(solved.dims.n_a));
    kv(out, "n_b", std::to_string(solved.dims.n_b));
    kv(out, "method", to_string(solved.report.method));
    kv(out, "residual", solved.report.residual);
    kv(out, "top_level_population", solved.report.top_level_population);
    kv(out, "fidelity", obs.fidelity_F);
    kv(out, "mean_photons", obs.mean_photons);
    kv(out, "mean_phonons", obs.mean_phonons);
    // Raises insufficient_occupation for a vacuum state.
    kv(out, "g2_numeric", g2_zero(solved.report.rho));
  } catch (const Error& e) {
    return numerical_failure(err, e);
  }
  return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const SweepSpec spec = parse_sweep_spec(cfg.sweep_spec, cfg);
  SweepResult result;
  try {
    result = run_sweep(spec, cfg.jobs);
  } catch (const Error& e) {
    return numerical_failure(err, e);
  }
  return write_outputs(result, cfg, out, err);
}

int cmd_figure(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  SweepSpec spec = figure_recipe(static_cast<Figure>(cfg.figure), cfg.fig6_n_th);
  spec.solver.convergence_tol = cfg.conv_tol;
  spec.solver.convergence = convergence_options(cfg);
  if (cfg.truncation_given) spec.solver.start = cfg.truncation;
  SweepResult result;
  try {
    result = run_sweep(spec, cfg.jobs);
  } catch (const Error& e) {
    return numerical_failure(err, e);
  }
  return write_outputs(result, cfg, out, err);
}

int cmd_analytic(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.preset) print_preset(out);
  print_params(out, cfg);
  try {
    const SystemParams& sp = cfg.params;
    const AmplitudeSet c = steady_amplitudes(sp);
    kv(out, "cooperativity", cooperativity(sp));
    kv(out, "g2_analytic", g2_analytic(sp));
    kv(out, "g2_resonant", g2_resonant(sp));
    try {
      kv(out, "g2_two_phonon_resonance", g2_two_phonon_resonance(sp));
    } catch (const Error& e) {
      kv(out, "g2_two_phonon_resonance", std::string(to_string(e.code())));
    }
    kv(out, "c01_abs", std::abs(c.c01));
    kv(out, "c02_abs", std::abs(c.c02));
    kv(out, "c10_abs", std::abs(c.c10));
    if (sp.epsilon > 0.0) {
      kv(out, "g2_amplitudes", g2_from_amplitudes(c));
      kv(out, "g2_amplitudes_exact", g2_from_amplitudes_exact(c));
    }
  } catch (const Error& e) {
    return numerical_failure(err, e);
  }
  return kExitOk;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  print_params(out, cfg);
  ValidationOptions opts;
  opts.truncation = cfg.truncation;
  opts.tol = cfg.tol;
  opts.conv_tol = cfg.conv_tol;
  bool all = true;
  for (const CheckResult& r : run_validation(cfg.params, opts)) {
    kv(out, "check." + r.name, r.passed ? "pass" : "fail");
    kv(out, "detail." + r.name, r.detail);
    all = all && r.passed;
  }
  kv(out, "validation", all ? "pass" : "fail");
  return all ? kExitOk : kExitValidation;
}

int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  std::optional<RunConfig> cfg;
  try {
    cfg = parse_config(argv);
  } catch (const Error& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (!cfg) return kExitOk;

  try {
    switch (cfg->command) {
      case Command::solve: return cmd_solve(*cfg, out, err);
      case Command::sweep: return cmd_sweep(*cfg, out, err);
      case Command::figure: return cmd_figure(*cfg, out, err);
      case Command::analytic: return cmd_analytic(*cfg, out, err);
      case Command::validate: return cmd_validate(*cfg, out, err);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::usage_error) {
      err << "usage error: " << e.what() << '\n';
      return kExitUsage;
    }
    return numerical_failure(err, e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace phonon
