#include <doctest.h>

#include "phonon/observables.hpp"
#include "test_util.hpp"

using namespace phonon;
using phonon::test::error_of;

namespace {

DensityMatrix pure(Truncation dims, const CVector& psi) {
  const CVector n = psi / psi.norm();
  return {dims, n * n.adjoint()};
}

}  // namespace

TEST_CASE("g2 of Fock states") {
  const Truncation dims(2, 6);
  CHECK(g2_zero(DensityMatrix::fock(dims, 0, 1)) == 0.0);
  CHECK(g2_zero(DensityMatrix::fock(dims, 0, 2)) == doctest::Approx(0.5));
  CHECK(g2_zero(DensityMatrix::fock(dims, 1, 3)) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("g2 of a coherent state is one") {
  const Truncation dims(1, 40);
  const double beta = 0.7;
  CVector psi(40);
  double fact = 1.0;
  for (int m = 0; m < 40; ++m) {
    if (m > 0) fact *= m;
    psi(m) = std::pow(beta, m) / std::sqrt(fact);
  }
  CHECK(g2_zero(pure(dims, psi)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(occupations(pure(dims, psi)).mean_phonons == doctest::Approx(beta * beta).epsilon(1e-12));
}

TEST_CASE("g2 of a thermal state is two") {
  const Truncation dims(1, 80);
  const double n = 0.5;
  CMatrix rho = CMatrix::Zero(80, 80);
  for (int m = 0; m < 80; ++m) rho(m, m) = std::pow(n, m) / std::pow(1.0 + n, m + 1);
  rho /= rho.trace().real();
  CHECK(g2_zero(DensityMatrix(dims, rho)) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("g2 needs phonons") {
  const Truncation dims(2, 3);
  CHECK(error_of([&] { g2_zero(DensityMatrix::fock(dims, 1, 0)); }) == ErrorCode::insufficient_occupation);
  CHECK_FALSE(observe(DensityMatrix::fock(dims, 0, 0)).g2.has_value());
}

TEST_CASE("fidelity sums the four retained amplitudes") {
  const Truncation dims(3, 4);
  CHECK(fidelity_F(DensityMatrix::fock(dims, 0, 2)) == 1.0);
  CHECK(fidelity_F(DensityMatrix::fock(dims, 1, 0)) == 1.0);
  CHECK(fidelity_F(DensityMatrix::fock(dims, 1, 1)) == 0.0);
  CHECK(fidelity_F(DensityMatrix::fock(dims, 0, 3)) == 0.0);
  CMatrix rho = CMatrix::Zero(12, 12);
  rho(dims.index(0, 0), dims.index(0, 0)) = 0.5;
  rho(dims.index(0, 3), dims.index(0, 3)) = 0.3;
  rho(dims.index(0, 1), dims.index(0, 1)) = 0.2;
  CHECK(fidelity_F(DensityMatrix(dims, rho)) == doctest::Approx(0.7));
  // Small spaces simply lack the missing states.
  CHECK(fidelity_F(DensityMatrix::fock(Truncation(1, 2), 0, 1)) == 1.0);
}

TEST_CASE("occupations and observation bundle") {
  const Truncation dims(3, 5);
  const Occupations o = occupations(DensityMatrix::fock(dims, 2, 3));
  CHECK(o.mean_photons == 2.0);
  CHECK(o.mean_phonons == 3.0);
  const ObservableSet obs = observe(DensityMatrix::fock(dims, 1, 2));
  REQUIRE(obs.g2.has_value());
  CHECK(*obs.g2 == doctest::Approx(0.5));
  CHECK(obs.populations[1][2] == 1.0);
  CHECK(obs.fidelity_F == 0.0);
}
