#include "phonon/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "phonon/analytic.hpp"
#include "phonon/observables.hpp"

namespace phonon {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool needs_numeric(const std::vector<Output>& outputs) {
  for (Output o : outputs) {
    if (o != Output::g2_analytic) return true;
  }
  return false;
}

}  // namespace

Axis Axis::range(std::string name, double min, double max, int points, Spacing spacing) {
  if (points < 2) throw Error(ErrorCode::invalid_argument, "axis '" + name + "' needs at least 2 points");
  if (spacing == Spacing::list) throw Error(ErrorCode::invalid_argument, "use Axis::list for explicit values");
  if (spacing == Spacing::log && !(min > 0.0 && max > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "log axis '" + name + "' needs positive bounds");
  }
  Axis axis{std::move(name), spacing, {}};
  axis.values.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / (points - 1);
    double v = 0.0;
    if (spacing == Spacing::linear) {
      v = min + t * (max - min);
    } else {
      v = std::exp(std::log(min) + t * (std::log(max) - std::log(min)));
    }
    if (i == points - 1) v = max;
    if (i == 0) v = min;
    axis.values.push_back(v);
  }
  return axis;
}

Axis Axis::list(std::string name, std::vector<double> values) {
  return {std::move(name), Spacing::list, std::move(values)};
}

std::string_view to_string(Output o) noexcept {
  switch (o) {
    case Output::g2_numeric: return "g2_numeric";
    case Output::g2_analytic: return "g2_analytic";
    case Output::fidelity: return "fidelity";
    case Output::mean_phonons: return "mean_phonons";
    case Output::mean_photons: return "mean_photons";
    case Output::residual: return "residual";
  }
  return "unknown";
}

std::optional<Output> parse_output(std::string_view name) {
  for (Output o : {Output::g2_numeric, Output::g2_analytic, Output::fidelity, Output::mean_phonons,
                   Output::mean_photons, Output::residual}) {
    if (to_string(o) == name) return o;
  }
  return std::nullopt;
}

void SweepSpec::validate() const {
  if (axes.empty() || axes.size() > 2) {
    throw Error(ErrorCode::invalid_argument, "a sweep needs 1 or 2 axes, got " + std::to_string(axes.size()));
  }
  const auto& names = system_param_names();
  for (const Axis& axis : axes) {
    if (std::find(names.begin(), names.end(), axis.name) == names.end()) {
      throw Error(ErrorCode::invalid_argument, "axis name '" + axis.name + "' is not a parameter");
    }
    if (axis.values.size() < 2) {
      throw Error(ErrorCode::invalid_argument, "axis '" + axis.name + "' needs at least 2 points");
    }
    for (double v : axis.values) {
      if (!std::isfinite(v) || (axis.spacing == Spacing::log && !(v > 0.0))) {
        throw Error(ErrorCode::invalid_argument, "axis '" + axis.name + "' has an invalid value");
      }
    }
  }
  if (axes.size() == 2 && axes[0].name == axes[1].name) {
    throw Error(ErrorCode::invalid_argument, "both axes sweep '" + axes[0].name + "'");
  }
}

std::size_t SweepSpec::point_count() const {
  std::size_t n = 1;
  for (const Axis& axis : axes) n *= axis.values.size();
  return n;
}

std::vector<std::string> SweepResult::header() const {
  std::vector<std::string> cols;
  for (const Axis& axis : spec.axes) cols.push_back(axis.name);
  for (Output o : spec.outputs) cols.emplace_back(to_string(o));
  cols.emplace_back("error");
  return cols;
}

std::optional<std::size_t> SweepResult::output_column(Output o) const {
  for (std::size_t i = 0; i < spec.outputs.size(); ++i) {
    if (spec.outputs[i] == o) return i;
  }
  return std::nullopt;
}

SweepRow evaluate_point(const SweepSpec& spec, const SystemParams& sp) {
  SweepRow row;
  row.outputs.assign(spec.outputs.size(), kNaN);
  auto set = [&](Output o, double v) {
    for (std::size_t i = 0; i < spec.outputs.size(); ++i) {
      if (spec.outputs[i] == o) row.outputs[i] = v;
    }
  };

  try {
    sp.validate();
    set(Output::g2_analytic, g2_analytic(sp));
    if (!needs_numeric(spec.outputs)) return row;

    const ConvergedSteadyState solved =
        converge_truncation(sp, spec.solver.start, spec.solver.convergence_tol, spec.solver.convergence);
    const ObservableSet obs = observe(solved.report.rho);
    set(Output::fidelity, obs.fidelity_F);
    set(Output::mean_phonons, obs.mean_phonons);
    set(Output::mean_photons, obs.mean_photons);
    set(Output::residual, solved.report.residual);
    if (obs.g2) {
      set(Output::g2_numeric, *obs.g2);
    } else {
      row.error = std::string(to_string(ErrorCode::insufficient_occupation));
    }
  } catch (const Error& e) {
    row.error = std::string(to_string(e.code()));
  }
  return row;
}

SweepResult run_sweep(const SweepSpec& spec, unsigned jobs) {
  spec.validate();
  const std::size_t total = spec.point_count();
  const std::size_t inner = spec.axes.size() == 2 ? spec.axes[1].values.size() : 1;

  SweepResult result{spec, std::vector<SweepRow>(total)};
  auto work = [&](std::size_t index) {
    SystemParams sp = spec.base;
    std::vector<double> axis_values;
    if (spec.axes.size() == 2) {
      axis_values = {spec.axes[0].values[index / inner], spec.axes[1].values[index % inner]};
    } else {
      axis_values = {spec.axes[0].values[index]};
    }
    for (std::size_t a = 0; a < spec.axes.size(); ++a) set_param(sp, spec.axes[a].name, axis_values[a]);
    SweepRow row = evaluate_point(spec, sp);
    row.axis_values = std::move(axis_values);
    result.rows[index] = std::move(row);
  };

  if (jobs == 0) jobs = std::max(1U, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, total));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < total; ++i) work(i);
    return result;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> workers;
  workers.reserve(jobs);
  for (unsigned w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < total; i = next++) work(i);
    });
  }
  workers.clear();
  return result;
}

std::vector<double> default_fig6_thermal_occupations() { return {0.0, 0.01, 0.1, 0.5, 1.0, 2.0}; }

SweepSpec figure_recipe(Figure which, const std::vector<double>& fig6_n_th) {
  SweepSpec spec;
  spec.base = SystemParams{};
  spec.base.kappa = 1.0;
  spec.base.n_th = 0.0;
  const std::vector<Output> g2_outputs{Output::g2_numeric, Output::g2_analytic, Output::mean_phonons,
                                       Output::residual};

  switch (which) {
    case Figure::fig2:
      spec.name = "fig2";
      spec.base.gamma = 0.01;
      spec.base.epsilon = 0.1;
      spec.axes = {Axis::range("delta_p", -3.0, 3.0, 61), Axis::range("g", 0.1, 3.1, 61)};
      spec.outputs = g2_outputs;
      break;
    case Figure::fig3:
      spec.name = "fig3";
      spec.base.g = 2.0;
      spec.base.gamma = 0.01;
      spec.base.delta_p = 0.0;
      spec.axes = {Axis::range("epsilon", 0.0, 1.0, 101)};
      spec.outputs = {Output::fidelity, Output::g2_numeric, Output::mean_phonons, Output::residual};
      break;
    case Figure::fig4:
      spec.name = "fig4";
      spec.base.g = 2.0;
      spec.base.gamma = 0.01;
      spec.base.epsilon = 0.1;
      spec.axes = {Axis::range("delta_p", -4.0, 4.0, 101)};
      spec.outputs = g2_outputs;
      break;
    case Figure::fig5:
      spec.name = "fig5";
      spec.base.g = 2.0;
      spec.base.epsilon = 0.1;
      spec.base.delta_p = 0.0;
      spec.axes = {Axis::range("kappa", 0.01, 10.0, 61, Spacing::log),
                   Axis::range("gamma", 0.01, 10.0, 61, Spacing::log)};
      spec.outputs = g2_outputs;
      break;
    case Figure::fig6:
      spec.name = "fig6";
      spec.base.g = 2.0;
      spec.base.gamma = 0.01;
      spec.base.epsilon = 0.1;
      spec.axes = {Axis::list("n_th", fig6_n_th), Axis::range("delta_p", -4.0, 4.0, 101)};
      spec.outputs = {Output::g2_numeric, Output::mean_phonons, Output::residual};
      break;
    default:
      throw Error(ErrorCode::invalid_argument, "unknown figure");
  }
  return spec;
}

}  // namespace phonon
