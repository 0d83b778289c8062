#pragma once

// Closed-form weak-pump results for the four-state truncation
// {|0,0>, |0,1>, |0,2>, |1,0>} (|photons, phonons>), at zero temperature.

#include "phonon/core.hpp"
#include "phonon/model.hpp"

namespace phonon {

struct AmplitudeSet {
  cplx c00{1.0, 0.0};
  cplx c01{};
  cplx c02{};
  cplx c10{};
};

/// Weak-pump steady amplitudes with c00 pinned to 1.
AmplitudeSet steady_amplitudes(const SystemParams& sp);

/// Right-hand side of the amplitude equations i dC/dt = H' C restricted to the
/// four states. With `pin_ground` the ground amplitude is held fixed.
AmplitudeSet amplitude_derivative(const SystemParams& sp, const AmplitudeSet& c, bool pin_ground = false);

/// Fixed-step RK4 integration of the amplitude equations.
AmplitudeSet evolve_amplitudes(const SystemParams& sp, const AmplitudeSet& init, double t_final, double dt,
                               bool pin_ground = false);

/// 2|c02|^2 / |c01|^4.
double g2_from_amplitudes(const AmplitudeSet& c);

/// 2|c02|^2 / (|c01|^2 + 2|c02|^2)^2, the unapproximated four-state value.
double g2_from_amplitudes_exact(const AmplitudeSet& c);

/// |(gamma/2 + i dp)(kappa/2 + 2i dp)|^2 / |(gamma/2 + i dp)(kappa/2 + 2i dp) + g^2|^2.
double g2_analytic(const SystemParams& sp);

/// 1 / (1 + 4 g^2 / (kappa gamma))^2, the dp = 0 limit.
double g2_resonant(const SystemParams& sp);

/// 4 g^2 / (kappa gamma).
double cooperativity(const SystemParams& sp);

/// g2 at dp = +-sqrt(2) g / 2. Throws negative_denominator if the
/// perturbative denominator is not positive.
double g2_two_phonon_resonance(const SystemParams& sp);

/// Bose-Einstein occupation for a mode at frequency `frequency_hz` (cycles per
/// second, so hbar * omega = h * f) in a bath at `temp_kelvin`.
double thermal_occupation(double frequency_hz, double temp_kelvin);

/// Occupation for a given ratio hbar omega / (k_B T).
double thermal_occupation_from_ratio(double hbar_omega_over_kt);

}  // namespace phonon
