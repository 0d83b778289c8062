#include "phonon/observables.hpp"

#include <cmath>
#include <string>

namespace phonon {

namespace {

// tr(rho * op) for op = f(photons, phonons) diagonal in the Fock basis.
template <class F>
cplx diagonal_expectation(const DensityMatrix& rho, F weight) {
  const Truncation& t = rho.dims();
  cplx acc = 0.0;
  for (int n = 0; n < t.n_a; ++n) {
    for (int m = 0; m < t.n_b; ++m) {
      acc += weight(n, m) * rho.data()(t.index(n, m), t.index(n, m));
    }
  }
  return acc;
}

double checked_real(cplx v, const char* what) {
  if (std::abs(v.imag()) > 1e-10) {
    throw Error(ErrorCode::not_hermitian,
                std::string(what) + " has imaginary part " + std::to_string(v.imag()));
  }
  return v.real();
}

}  // namespace

// b^dag b and b^dag b^dag b b are diagonal in the Fock basis, so the traces
// reduce to weighted sums of populations.
double g2_zero(const DensityMatrix& rho) {
  const double n1 = checked_real(
      diagonal_expectation(rho, [](int, int m) { return static_cast<double>(m); }), "<b^dag b>");
  const double n2 = checked_real(
      diagonal_expectation(rho, [](int, int m) { return static_cast<double>(m) * (m - 1); }),
      "<b^dag b^dag b b>");
  if (n1 < kMinOccupationForG2) {
    throw Error(ErrorCode::insufficient_occupation,
                "mean phonon number " + std::to_string(n1) + " too small for g2(0)");
  }
  return n2 / (n1 * n1);
}

double fidelity_F(const DensityMatrix& rho) {
  const Truncation& t = rho.dims();
  const auto& d = rho.data();
  double f = d(t.index(0, 0), t.index(0, 0)).real() + d(t.index(0, 1), t.index(0, 1)).real();
  if (t.n_b >= 3) f += d(t.index(0, 2), t.index(0, 2)).real();
  if (t.n_a >= 2) f += d(t.index(1, 0), t.index(1, 0)).real();
  return f;
}

Occupations occupations(const DensityMatrix& rho) {
  const cplx na = diagonal_expectation(rho, [](int n, int) { return static_cast<double>(n); });
  const cplx nb = diagonal_expectation(rho, [](int, int m) { return static_cast<double>(m); });
  return {checked_real(na, "<a^dag a>"), checked_real(nb, "<b^dag b>")};
}

ObservableSet observe(const DensityMatrix& rho) {
  ObservableSet out;
  const Occupations occ = occupations(rho);
  out.mean_photons = occ.mean_photons;
  out.mean_phonons = occ.mean_phonons;
  if (occ.mean_phonons >= kMinOccupationForG2) out.g2 = g2_zero(rho);
  out.populations = rho.populations();
  const auto& p = out.populations;
  out.fidelity_F = p[0][0] + p[0][1];
  if (rho.dims().n_b >= 3) out.fidelity_F += p[0][2];
  if (rho.dims().n_a >= 2) out.fidelity_F += p[1][0];
  return out;
}

}  // namespace phonon
