#include "phonon/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

namespace phonon {

namespace {

[[noreturn]] void usage(const std::string& what) { throw Error(ErrorCode::usage_error, what); }

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

double number_for(const std::string& key, const std::string& value) {
  try {
    return parse_number(trim(value));
  } catch (const Error&) {
    usage("value '" + value + "' for '" + key + "' is not a number");
  }
}

int integer_for(const std::string& key, const std::string& value) {
  const double v = number_for(key, value);
  if (v != std::floor(v) || std::abs(v) > 1e9) usage("value '" + value + "' for '" + key + "' is not an integer");
  return static_cast<int>(v);
}

std::vector<double> number_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(number_for(key, item));
  if (out.empty()) usage("'" + key + "' needs at least one value");
  return out;
}

std::vector<std::pair<std::string, std::string>> read_entries(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) usage("cannot read '" + path.string() + "'");
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(file, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      usage(path.string() + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    entries.emplace_back(normalize_key(trim(line.substr(0, eq))), trim(line.substr(eq + 1)));
  }
  return entries;
}

// Raw rate parameters as supplied, before unit conversion.
struct RawParams {
  std::map<std::string, double> values;
};

bool is_rate_key(const std::string& key) {
  static const std::vector<std::string> rate_keys{"g",       "kappa", "gamma", "epsilon",
                                                  "delta_p", "n_th",  "cavity_detuning"};
  return std::find(rate_keys.begin(), rate_keys.end(), key) != rate_keys.end();
}

void apply_key(RunConfig& cfg, RawParams& raw, const std::string& key, const std::string& value) {
  if (is_rate_key(key)) {
    raw.values[key] = number_for(key, value);
  } else if (key == "na") {
    cfg.truncation.n_a = integer_for(key, value);
    cfg.truncation_given = true;
  } else if (key == "nb") {
    cfg.truncation.n_b = integer_for(key, value);
    cfg.truncation_given = true;
  } else if (key == "tol") {
    cfg.tol = number_for(key, value);
  } else if (key == "conv_tol") {
    cfg.conv_tol = number_for(key, value);
  } else if (key == "max_nb") {
    cfg.max_n_b = integer_for(key, value);
  } else if (key == "outdir") {
    cfg.outdir = value;
  } else if (key == "units") {
    if (value == "kappa" || value == "kappa-units" || value == "kappa_units") cfg.units = Units::kappa;
    else if (value == "hertz" || value == "hz") cfg.units = Units::hertz;
    else usage("unknown units '" + value + "' (expected kappa or hertz)");
  } else if (key == "jobs") {
    const int jobs = integer_for(key, value);
    if (jobs < 0) usage("jobs must be >= 0");
    cfg.jobs = static_cast<unsigned>(jobs);
  } else if (key == "preset") {
    if (value != "paper-sec4") usage("unknown preset '" + value + "' (available: paper-sec4)");
    cfg.preset = value;
  } else if (key == "n_th_list") {
    cfg.fig6_n_th = number_list(key, value);
  } else {
    usage("unknown key '" + key + "'");
  }
}

struct FlagInfo {
  std::string key;
  std::string help;
};

const std::vector<FlagInfo>& flags() {
  static const std::vector<FlagInfo> table{
      {"g", "photon / two-phonon coupling"},
      {"kappa", "cavity decay rate"},
      {"gamma", "mechanical decay rate"},
      {"epsilon", "mechanical pump amplitude"},
      {"delta-p", "pump detuning omega_m - omega_p"},
      {"n-th", "thermal phonon occupation of the bath"},
      {"cavity-detuning", "cavity detuning (default 2 delta_p)"},
      {"na", "photon levels in the starting truncation"},
      {"nb", "phonon levels in the starting truncation"},
      {"tol", "steady-state residual tolerance"},
      {"conv-tol", "relative truncation-convergence tolerance"},
      {"max-nb", "largest phonon truncation tried"},
      {"outdir", "directory for CSV and SVG output"},
      {"units", "kappa (default) or hertz"},
      {"jobs", "worker threads for sweeps (0 = all cores)"},
      {"preset", "named device preset (paper-sec4)"},
      {"n-th-list", "comma-separated n_th values for figure 6"}};
  return table;
}

std::vector<std::string> flag_keys() {
  std::vector<std::string> keys;
  for (const FlagInfo& f : flags()) keys.push_back(f.key);
  return keys;
}

}  // namespace

PhysicalParams physical_params(const DevicePreset& device) {
  PhysicalParams p;
  p.g0 = device.g0_hz;
  p.omega_m = device.omega_m_hz;
  p.kappa = device.kappa_hz;
  p.omega_c = device.omega_c_hz;
  p.omega_L = device.omega_c_hz - 2.0 * device.omega_m_hz;
  p.omega_p = device.omega_m_hz;
  const double detuning = p.cavity_detuning();
  p.omega_drive_amp = device.alpha_magnitude * std::hypot(detuning, device.kappa_hz / 2.0);
  return p;
}

PresetReport run_device_preset(const DevicePreset& device) {
  PresetReport r;
  r.device = device;
  r.physical = physical_params(device);
  r.linearization = linearize(r.physical);
  r.rwa = check_rwa(r.physical, r.linearization.g_eff);
  r.rwa_ratio = r.linearization.g_eff / r.physical.omega_m;
  r.n_th = thermal_occupation(device.omega_m_hz, device.temperature_k);

  SystemParams sp;
  sp.kappa = 1.0;
  sp.g = r.linearization.g_eff / device.kappa_hz;
  sp.gamma = device.gamma_hz / device.kappa_hz;
  sp.epsilon = device.epsilon_over_gamma * sp.gamma;
  sp.delta_p = (r.physical.omega_m - r.physical.omega_p) / device.kappa_hz;
  sp.n_th = r.n_th;
  r.params = sp;
  r.cooperativity = cooperativity(sp);
  return r;
}

std::map<std::string, std::string> read_key_values(const std::filesystem::path& path) {
  std::map<std::string, std::string> out;
  for (auto& [key, value] : read_entries(path)) {
    if (out.count(key)) usage("duplicate key '" + key + "' in " + path.string());
    out[key] = value;
  }
  return out;
}

std::optional<RunConfig> parse_config(const std::vector<std::string>& argv) {
  CLI::App app{"Phonon blockade steady-state simulator", "phonon"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path;
  app.add_option("--config", config_path, "key = value configuration file");
  std::map<std::string, std::string> flag_values;
  for (const FlagInfo& f : flags()) {
    app.add_option("--" + f.key, flag_values[f.key], f.help);
  }

  auto* solve = app.add_subcommand("solve", "Steady state and observables at one parameter point");
  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep described by a spec file");
  std::string sweep_path;
  sweep->add_option("specfile", sweep_path)->required();
  auto* figure = app.add_subcommand("figure", "Reproduce one figure's data (2-6)");
  int figure_number = 0;
  figure->add_option("number", figure_number)->required();
  auto* analytic = app.add_subcommand("analytic", "Closed-form weak-pump results");
  auto* validate = app.add_subcommand("validate", "Run the invariant and cross-check suite");

  std::vector<const char*> args;
  args.reserve(argv.size());
  for (const auto& a : argv) args.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(args.size()), args.data());
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    usage(e.what());
  }

  RunConfig cfg;
  if (solve->parsed()) cfg.command = Command::solve;
  if (sweep->parsed()) {
    cfg.command = Command::sweep;
    cfg.sweep_spec = sweep_path;
  }
  if (figure->parsed()) {
    cfg.command = Command::figure;
    if (figure_number < 2 || figure_number > 6) usage("figure must be one of 2, 3, 4, 5, 6");
    cfg.figure = figure_number;
  }
  if (analytic->parsed()) cfg.command = Command::analytic;
  if (validate->parsed()) cfg.command = Command::validate;

  std::vector<std::pair<std::string, std::string>> layered;
  if (!config_path.empty()) {
    for (auto& [key, value] : read_key_values(config_path)) layered.emplace_back(key, value);
  }
  for (const std::string& key : flag_keys()) {
    if (app.count("--" + key) > 0) layered.emplace_back(normalize_key(key), flag_values[key]);
  }

  // The preset supplies base parameters beneath the file and flag layers.
  RawParams raw;
  for (auto& [key, value] : layered) {
    if (key == "preset") apply_key(cfg, raw, key, value);
  }
  SystemParams base;
  if (cfg.preset) base = run_device_preset().params;
  for (auto& [key, value] : layered) {
    if (key != "preset") apply_key(cfg, raw, key, value);
  }

  if (cfg.units == Units::hertz) {
    if (!raw.values.count("kappa")) usage("--units hertz requires --kappa in Hz");
    const double kappa_hz = raw.values["kappa"];
    if (!(kappa_hz > 0.0)) usage("kappa must be > 0");
    cfg.rate_unit_hz = kappa_hz;
    for (auto& [key, value] : raw.values) {
      if (key != "n_th") value /= kappa_hz;
    }
  }
  for (auto& [key, value] : raw.values) set_param(base, key, value);
  cfg.params = base;

  try {
    cfg.params.validate();
    cfg.truncation = Truncation(cfg.truncation.n_a, cfg.truncation.n_b);
  } catch (const Error& e) {
    usage(e.what());
  }
  if (!(cfg.tol > 0.0)) usage("tol must be > 0");
  if (!(cfg.conv_tol > 0.0)) usage("conv_tol must be > 0");
  if (cfg.max_n_b < 2) usage("max_nb must be >= 2");
  return cfg;
}

SweepSpec sweep_spec_from_keys(const std::vector<std::pair<std::string, std::string>>& entries,
                               const RunConfig& base) {
  SweepSpec spec;
  spec.base = base.params;
  spec.solver.start = base.truncation;
  spec.solver.convergence_tol = base.conv_tol;
  spec.solver.convergence.steady_state_tol = base.tol;
  spec.solver.convergence.max_n_b = base.max_n_b;
  int na = base.truncation.n_a;
  int nb = base.truncation.n_b;

  for (const auto& [key, value] : entries) {
    if (is_rate_key(key)) {
      set_param(spec.base, key, number_for(key, value));
    } else if (key == "name") {
      spec.name = value;
    } else if (key == "na") {
      na = integer_for(key, value);
    } else if (key == "nb") {
      nb = integer_for(key, value);
    } else if (key == "conv_tol") {
      spec.solver.convergence_tol = number_for(key, value);
    } else if (key == "tol") {
      spec.solver.convergence.steady_state_tol = number_for(key, value);
    } else if (key == "outputs") {
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) {
        const auto out = parse_output(trim(item));
        if (!out) usage("unknown output '" + trim(item) + "'");
        spec.outputs.push_back(*out);
      }
    } else if (key == "axis") {
      std::istringstream ss(value);
      std::vector<std::string> words;
      for (std::string w; ss >> w;) words.push_back(w);
      if (words.size() == 3 && words[1] == "list") {
        spec.axes.push_back(Axis::list(words[0], number_list(key, words[2])));
      } else if (words.size() == 4 || words.size() == 5) {
        Spacing spacing = Spacing::linear;
        if (words.size() == 5) {
          if (words[4] == "log") spacing = Spacing::log;
          else if (words[4] != "linear") usage("axis spacing must be linear or log, got '" + words[4] + "'");
        }
        try {
          spec.axes.push_back(Axis::range(words[0], number_for(key, words[1]), number_for(key, words[2]),
                                          integer_for(key, words[3]), spacing));
        } catch (const Error& e) {
          if (e.code() == ErrorCode::usage_error) throw;
          usage(e.what());
        }
      } else {
        usage("axis must be '<name> <min> <max> <points> [linear|log]' or '<name> list v1,v2,...'");
      }
    } else {
      usage("unknown key '" + key + "' in sweep spec");
    }
  }

  try {
    spec.solver.start = Truncation(na, nb);
    spec.validate();
    spec.base.validate();
  } catch (const Error& e) {
    usage(e.what());
  }
  return spec;
}

SweepSpec parse_sweep_spec(const std::filesystem::path& path, const RunConfig& base) {
  SweepSpec spec = sweep_spec_from_keys(read_entries(path), base);
  if (spec.name == "sweep") spec.name = path.stem().string();
  return spec;
}

}  // namespace phonon
