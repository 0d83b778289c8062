#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phonon/core.hpp"
#include "phonon/liouville.hpp"
#include "phonon/model.hpp"

namespace phonon {

enum class Spacing { linear, log, list };

struct Axis {
  std::string name;  // a SystemParams field name
  Spacing spacing = Spacing::linear;
  std::vector<double> values;

  static Axis range(std::string name, double min, double max, int points, Spacing spacing = Spacing::linear);
  static Axis list(std::string name, std::vector<double> values);
};

enum class Output { g2_numeric, g2_analytic, fidelity, mean_phonons, mean_photons, residual };

std::string_view to_string(Output o) noexcept;
std::optional<Output> parse_output(std::string_view name);

struct SolverSettings {
  Truncation start{3, 10};
  double convergence_tol = 1e-4;  // relative change between successive truncations
  ConvergenceOptions convergence;
};

struct SweepSpec {
  std::string name = "sweep";
  SystemParams base;
  std::vector<Axis> axes;  // first axis is the outermost (slowest) index
  std::vector<Output> outputs;
  SolverSettings solver;

  /// Throws invalid_argument: 1 or 2 axes, >= 2 points each, known names,
  /// positive values on log axes.
  void validate() const;
  std::size_t point_count() const;
};

struct SweepRow {
  std::vector<double> axis_values;
  std::vector<double> outputs;  // NaN where unavailable
  std::string error;            // empty on success, otherwise an ErrorCode name
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepRow> rows;

  std::vector<std::string> header() const;
  /// Column index of `o` within SweepRow::outputs, if requested.
  std::optional<std::size_t> output_column(Output o) const;
};

/// Solves every grid point independently; rows follow row-major axis order.
/// `jobs` == 0 uses the hardware concurrency.
SweepResult run_sweep(const SweepSpec& spec, unsigned jobs = 0);

/// Single grid point with the same error handling as run_sweep.
SweepRow evaluate_point(const SweepSpec& spec, const SystemParams& sp);

enum class Figure { fig2 = 2, fig3 = 3, fig4 = 4, fig5 = 5, fig6 = 6 };

std::vector<double> default_fig6_thermal_occupations();

/// Locked parameter sets and grids reproducing each figure's data.
SweepSpec figure_recipe(Figure which, const std::vector<double>& fig6_n_th = default_fig6_thermal_occupations());

/// Shortest round-trip scientific notation; "nan" for NaN.
std::string format_number(double v);

void write_csv(const SweepResult& result, const std::filesystem::path& path);
std::string to_csv(const SweepResult& result);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
CsvTable read_csv(const std::filesystem::path& path);
double parse_number(std::string_view text);

void render_svg(const SweepResult& result, const std::filesystem::path& path);
std::string to_svg(const SweepResult& result);

}  // namespace phonon
