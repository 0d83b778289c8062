#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "phonon/analytic.hpp"
#include "phonon/core.hpp"
#include "phonon/model.hpp"
#include "phonon/sweep.hpp"

namespace phonon {

enum class Command { solve, sweep, figure, analytic, validate };
enum class Units { kappa, hertz };

/// Laboratory numbers for a silicon photonic-crystal device: quadratic
/// coupling, GHz mechanics, cryogenic bath. Frequencies in Hz.
struct DevicePreset {
  double g0_hz = 245.0;
  double alpha_magnitude = 1e4;
  double omega_m_hz = 5.6e9;
  double gamma_hz = 328.0;
  double kappa_hz = 20e6;
  double temperature_k = 0.025;
  double omega_c_hz = 1.94e14;  // 1550 nm carrier
  double epsilon_over_gamma = 0.05;  // weak mechanical pump
};

struct PresetReport {
  DevicePreset device;
  PhysicalParams physical;
  Linearization linearization;
  RwaStatus rwa;
  double rwa_ratio;
  double n_th;
  double cooperativity;
  SystemParams params;  // in units of kappa
};

/// Cavity driven on the two-phonon red sideband (Delta_c = 2 omega_m) with the
/// drive strength chosen so that |alpha| equals the preset value.
PhysicalParams physical_params(const DevicePreset& device);

/// linearize -> check_rwa -> thermal_occupation -> cooperativity, and the
/// resulting rates in units of kappa.
PresetReport run_device_preset(const DevicePreset& device = {});

struct RunConfig {
  Command command = Command::solve;
  SystemParams params;
  Truncation truncation{3, 10};
  bool truncation_given = false;  // --na / --nb supplied
  double tol = kDefaultSteadyStateTol;
  double conv_tol = 1e-4;
  int max_n_b = 64;
  std::filesystem::path outdir = ".";
  Units units = Units::kappa;
  unsigned jobs = 0;
  std::optional<std::string> preset;
  int figure = 0;
  std::filesystem::path sweep_spec;
  std::vector<double> fig6_n_th = default_fig6_thermal_occupations();
  // Scale used to convert reported rates back to Hz; 1 in kappa units.
  double rate_unit_hz = 1.0;
};

/// Parses `phonon <command> [args] [--flags]`. Flags override config-file
/// values, which override defaults. Throws Error(usage_error) naming the
/// offending flag or key. Returns std::nullopt when help was requested.
std::optional<RunConfig> parse_config(const std::vector<std::string>& argv);

/// Reads `key = value` lines with `#` comments.
std::map<std::string, std::string> read_key_values(const std::filesystem::path& path);

/// Sweep description: parameter keys, `axis = <name> <min> <max> <points>
/// [linear|log]` or `axis = <name> list v1,v2,...`, `outputs = a,b,...`,
/// `name`, `na`, `nb`, `conv_tol`, `tol`.
SweepSpec parse_sweep_spec(const std::filesystem::path& path, const RunConfig& base);
SweepSpec sweep_spec_from_keys(const std::vector<std::pair<std::string, std::string>>& entries,
                               const RunConfig& base);

}  // namespace phonon
