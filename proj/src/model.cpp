#include "phonon/model.hpp"

#include <cmath>
#include <stdexcept>

namespace phonon {

void SystemParams::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(g) || !finite(kappa) || !finite(gamma) || !finite(epsilon) || !finite(delta_p) ||
      !finite(n_th) || (cavity_detuning && !finite(*cavity_detuning))) {
    throw Error(ErrorCode::invalid_argument, "all parameters must be finite");
  }
  if (!(kappa > 0.0)) throw Error(ErrorCode::invalid_argument, "kappa must be > 0");
  if (!(gamma > 0.0)) throw Error(ErrorCode::invalid_argument, "gamma must be > 0");
  if (g < 0.0) throw Error(ErrorCode::invalid_argument, "g must be >= 0");
  if (epsilon < 0.0) throw Error(ErrorCode::invalid_argument, "epsilon must be >= 0");
  if (n_th < 0.0) throw Error(ErrorCode::invalid_argument, "n_th must be >= 0");
}

const std::vector<std::string>& system_param_names() {
  static const std::vector<std::string> names{"g",       "kappa", "gamma", "epsilon",
                                              "delta_p", "n_th",  "cavity_detuning"};
  return names;
}

void set_param(SystemParams& sp, const std::string& name, double value) {
  if (name == "g") sp.g = value;
  else if (name == "kappa") sp.kappa = value;
  else if (name == "gamma") sp.gamma = value;
  else if (name == "epsilon") sp.epsilon = value;
  else if (name == "delta_p") sp.delta_p = value;
  else if (name == "n_th") sp.n_th = value;
  else if (name == "cavity_detuning") sp.cavity_detuning = value;
  else throw Error(ErrorCode::invalid_argument, "unknown parameter '" + name + "'");
}

double get_param(const SystemParams& sp, const std::string& name) {
  if (name == "g") return sp.g;
  if (name == "kappa") return sp.kappa;
  if (name == "gamma") return sp.gamma;
  if (name == "epsilon") return sp.epsilon;
  if (name == "delta_p") return sp.delta_p;
  if (name == "n_th") return sp.n_th;
  if (name == "cavity_detuning") return sp.effective_cavity_detuning();
  throw Error(ErrorCode::invalid_argument, "unknown parameter '" + name + "'");
}

Linearization linearize(const PhysicalParams& p) {
  const cplx denom{-p.cavity_detuning(), p.kappa / 2.0};
  if (std::abs(denom) == 0.0) {
    throw Error(ErrorCode::degenerate_denominator, "cavity detuning and kappa both vanish");
  }
  const cplx alpha = p.omega_drive_amp / denom;
  return {alpha, p.g0 * std::abs(alpha), std::arg(alpha)};
}

RwaStatus check_rwa(const PhysicalParams& p, double g_eff) {
  if (!(p.omega_m > 0.0)) throw Error(ErrorCode::invalid_argument, "omega_m must be > 0");
  return g_eff / p.omega_m > kRwaThreshold ? RwaStatus::warning : RwaStatus::ok;
}

Operator build_heff(const SystemParams& sp, Truncation dims) {
  if (sp.g != 0.0 && dims.n_a < 2) {
    throw Error(ErrorCode::invalid_argument, "coupling g != 0 needs at least two cavity levels");
  }
  const Operator a = ladder(dims, Mode::cavity);
  const Operator b = ladder(dims, Mode::mechanical);
  const Operator ad = a.adjoint();
  const Operator bd = b.adjoint();

  CMatrix h = sp.effective_cavity_detuning() * (ad.data * a.data) + sp.delta_p * (bd.data * b.data);
  h += sp.g * (ad.data * b.data * b.data + a.data * bd.data * bd.data);
  h += sp.epsilon * (bd.data + b.data);
  return {dims, std::move(h)};
}

CMatrix build_heff_nonhermitian(const SystemParams& sp, Truncation dims) {
  const Operator a = ladder(dims, Mode::cavity);
  const Operator b = ladder(dims, Mode::mechanical);
  const cplx i{0.0, 1.0};
  return build_heff(sp, dims).data - i * (sp.kappa / 2.0) * (a.data.adjoint() * a.data) -
         i * (sp.gamma / 2.0) * (b.data.adjoint() * b.data);
}

std::vector<CollapseChannel> collapse_channels(const SystemParams& sp, Truncation dims) {
  const Operator a = ladder(dims, Mode::cavity);
  const Operator b = ladder(dims, Mode::mechanical);
  return {
      {a, sp.kappa},
      {b.adjoint(), sp.gamma * sp.n_th},
      {b, sp.gamma * (sp.n_th + 1.0)},
  };
}

}  // namespace phonon
