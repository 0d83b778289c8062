#include "phonon/analytic.hpp"

#include <cassert>
#include <cmath>
#include <string>

namespace phonon {

namespace {

constexpr cplx kI{0.0, 1.0};

// CODATA 2018 exact values.
constexpr double kPlanck = 6.62607015e-34;
constexpr double kBoltzmann = 1.380649e-23;

void require_dissipative(const SystemParams& sp) {
  if (!(sp.kappa > 0.0) || !(sp.gamma > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "closed forms need kappa > 0 and gamma > 0");
  }
}

}  // namespace

AmplitudeSet steady_amplitudes(const SystemParams& sp) {
  require_dissipative(sp);
  const double g = sp.g;
  const double eps = sp.epsilon;
  const double dp = sp.delta_p;
  const cplx mech = sp.gamma / 2.0 + kI * dp;
  const cplx cav = sp.kappa / 2.0 + kI * 2.0 * dp;
  const cplx bracket = (sp.gamma + kI * 2.0 * dp) * cav + 2.0 * g * g;
  const cplx denom = bracket * mech;
  if (std::abs(denom) == 0.0) {
    throw Error(ErrorCode::degenerate_denominator, "amplitude denominator vanishes");
  }

  AmplitudeSet c;
  c.c00 = 1.0;
  c.c01 = -kI * eps / mech;
  c.c02 = -std::sqrt(2.0) * eps * eps * cav / denom;
  // Sign fixed by the stationarity of i dC10/dt = (2dp - i kappa/2) C10 + sqrt(2) g C02.
  c.c10 = kI * 2.0 * g * eps * eps / denom;
  return c;
}

AmplitudeSet amplitude_derivative(const SystemParams& sp, const AmplitudeSet& c, bool pin_ground) {
  const double eps = sp.epsilon;
  const double dp = sp.delta_p;
  const double g = sp.g;
  const double r2 = std::sqrt(2.0);
  AmplitudeSet dc;
  dc.c00 = pin_ground ? cplx{} : -kI * eps * c.c01;
  dc.c01 = -kI * eps * c.c00 - kI * (dp - kI * sp.gamma / 2.0) * c.c01 - kI * r2 * eps * c.c02;
  dc.c02 = -kI * r2 * eps * c.c01 - kI * (2.0 * dp - kI * sp.gamma) * c.c02 - kI * r2 * g * c.c10;
  dc.c10 = -kI * (2.0 * dp - kI * sp.kappa / 2.0) * c.c10 - kI * r2 * g * c.c02;
  return dc;
}

AmplitudeSet evolve_amplitudes(const SystemParams& sp, const AmplitudeSet& init, double t_final, double dt,
                               bool pin_ground) {
  if (!(dt > 0.0)) throw Error(ErrorCode::invalid_argument, "dt must be > 0");
  if (!(t_final >= 0.0)) throw Error(ErrorCode::invalid_argument, "t_final must be >= 0");
  auto axpy = [](const AmplitudeSet& x, double s, const AmplitudeSet& y) {
    return AmplitudeSet{x.c00 + s * y.c00, x.c01 + s * y.c01, x.c02 + s * y.c02, x.c10 + s * y.c10};
  };
  const auto steps = static_cast<long long>(std::ceil(t_final / dt - 1e-12));
  if (steps <= 0) return init;
  const double h = t_final / static_cast<double>(steps);
  AmplitudeSet c = init;
  for (long long s = 0; s < steps; ++s) {
    const AmplitudeSet k1 = amplitude_derivative(sp, c, pin_ground);
    const AmplitudeSet k2 = amplitude_derivative(sp, axpy(c, h / 2.0, k1), pin_ground);
    const AmplitudeSet k3 = amplitude_derivative(sp, axpy(c, h / 2.0, k2), pin_ground);
    const AmplitudeSet k4 = amplitude_derivative(sp, axpy(c, h, k3), pin_ground);
    c = axpy(c, h / 6.0, k1);
    c = axpy(c, h / 3.0, k2);
    c = axpy(c, h / 3.0, k3);
    c = axpy(c, h / 6.0, k4);
  }
  return c;
}

double g2_from_amplitudes(const AmplitudeSet& c) {
  const double p1 = std::norm(c.c01);
  return 2.0 * std::norm(c.c02) / (p1 * p1);
}

double g2_from_amplitudes_exact(const AmplitudeSet& c) {
  const double n = std::norm(c.c01) + 2.0 * std::norm(c.c02);
  return 2.0 * std::norm(c.c02) / (n * n);
}

double g2_analytic(const SystemParams& sp) {
  require_dissipative(sp);
  const cplx product = (sp.gamma / 2.0 + kI * sp.delta_p) * (sp.kappa / 2.0 + kI * 2.0 * sp.delta_p);
  const double value = std::norm(product) / std::norm(product + sp.g * sp.g);
#ifndef NDEBUG
  SystemParams unit = sp;
  unit.epsilon = 1.0;
  const double from_amplitudes = g2_from_amplitudes(steady_amplitudes(unit));
  assert(std::abs(from_amplitudes - value) <= 1e-12 * std::max(1.0, value));
#endif
  return value;
}

double g2_resonant(const SystemParams& sp) {
  require_dissipative(sp);
  const double x = 1.0 + 4.0 * sp.g * sp.g / (sp.kappa * sp.gamma);
  return 1.0 / (x * x);
}

double cooperativity(const SystemParams& sp) {
  require_dissipative(sp);
  return 4.0 * sp.g * sp.g / (sp.kappa * sp.gamma);
}

double g2_two_phonon_resonance(const SystemParams& sp) {
  require_dissipative(sp);
  const double g2 = sp.g * sp.g;
  const double k = sp.kappa;
  const double y = sp.gamma;
  const double numerator = (y * y / 4.0 + g2 / 2.0) * (k * k / 4.0 + 2.0 * g2);
  // numerator + g^2 k y / 2 - g^4 with the g^4 terms cancelled by hand;
  // the unexpanded form loses digits when g^2 >> k y.
  const double denominator = y * y * k * k / 16.0 + g2 * (k + 2.0 * y) * (k + 2.0 * y) / 8.0;
  if (!(denominator > 0.0)) {
    throw Error(ErrorCode::negative_denominator,
                "two-phonon resonance denominator " + std::to_string(denominator) + " <= 0");
  }
  return numerator / denominator;
}

double thermal_occupation_from_ratio(double x) {
  if (!(x > 0.0)) throw Error(ErrorCode::invalid_argument, "hbar omega / k_B T must be > 0");
  return 1.0 / std::expm1(x);
}

double thermal_occupation(double frequency_hz, double temp_kelvin) {
  if (!(frequency_hz > 0.0) || !(temp_kelvin > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "frequency and temperature must be > 0");
  }
  return thermal_occupation_from_ratio(kPlanck * frequency_hz / (kBoltzmann * temp_kelvin));
}

}  // namespace phonon
