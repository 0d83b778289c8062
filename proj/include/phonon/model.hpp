#pragma once

#include <optional>
#include <string>
#include <vector>

#include "phonon/core.hpp"

namespace phonon {

/// Rates and detunings of the driven two-phonon model, in units where the
/// caller's chosen reference (normally the cavity decay rate) is 1.
struct SystemParams {
  double g = 2.0;         // effective photon / two-phonon coupling
  double kappa = 1.0;     // cavity decay
  double gamma = 0.01;    // mechanical decay
  double epsilon = 0.1;   // mechanical pump amplitude
  double delta_p = 0.0;   // pump detuning omega_m - omega_p
  double n_th = 0.0;      // thermal phonon occupation of the bath
  // Cavity detuning in the pump frame. Unset means the two-phonon resonance
  // condition, i.e. 2 * delta_p.
  std::optional<double> cavity_detuning;

  double effective_cavity_detuning() const { return cavity_detuning.value_or(2.0 * delta_p); }

  /// Throws invalid_argument unless every field is finite, kappa and gamma
  /// are strictly positive and g, epsilon, n_th are non-negative.
  void validate() const;
};

/// Parameter names accepted by `set_param` / sweep axes.
const std::vector<std::string>& system_param_names();
void set_param(SystemParams& sp, const std::string& name, double value);
double get_param(const SystemParams& sp, const std::string& name);

/// Laboratory-frame parameters before linearization. Frequencies in Hz.
struct PhysicalParams {
  double g0 = 0.0;                // single-photon quadratic coupling
  double omega_drive_amp = 0.0;   // cavity drive amplitude Omega
  double omega_c = 0.0;
  double omega_m = 0.0;
  double omega_L = 0.0;
  double omega_p = 0.0;
  double kappa = 0.0;

  double cavity_detuning() const { return omega_c - omega_L; }
};

struct Linearization {
  cplx alpha;      // mean intracavity amplitude
  double g_eff;    // g0 * |alpha|; the phase of alpha is absorbed into the drive
  double alpha_phase;
};

/// alpha = Omega / (-Delta_c + i kappa / 2).
Linearization linearize(const PhysicalParams& p);

enum class RwaStatus { ok, warning };

/// Ratio g_eff / omega_m above which the rotating-wave step is flagged.
inline constexpr double kRwaThreshold = 0.05;

RwaStatus check_rwa(const PhysicalParams& p, double g_eff);

/// 2 dp a^dag a + dp b^dag b + g (a^dag b^2 + a b^dag^2) + eps (b^dag + b),
/// with the cavity term replaced by `cavity_detuning` when set.
Operator build_heff(const SystemParams& sp, Truncation dims);

/// build_heff - i kappa/2 a^dag a - i gamma/2 b^dag b.
CMatrix build_heff_nonhermitian(const SystemParams& sp, Truncation dims);

/// Channel (c, r) contributes (r/2)(2 c rho c^dag - c^dag c rho - rho c^dag c).
struct CollapseChannel {
  Operator op;
  double rate;
};

/// Cavity decay (a, kappa), thermal absorption (b^dag, gamma n_th) and
/// thermal emission (b, gamma (n_th + 1)), in that order.
std::vector<CollapseChannel> collapse_channels(const SystemParams& sp, Truncation dims);

}  // namespace phonon
