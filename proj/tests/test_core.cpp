#include <doctest.h>

#include "phonon/core.hpp"
#include "test_util.hpp"

using namespace phonon;
using phonon::test::error_of;

TEST_CASE("annihilation operator has sqrt(m) below the diagonal and a truncated top") {
  const CMatrix b = annihilation(5);
  for (int m = 1; m < 5; ++m) CHECK(b(m - 1, m).real() == doctest::Approx(std::sqrt(m)).epsilon(1e-15));
  CHECK(max_abs(b.diagonal()) == 0.0);
  // [b, b^dagger] = 1 except at the top level, where it is 1 - n.
  const CMatrix comm = b * b.adjoint() - b.adjoint() * b;
  for (int m = 0; m < 4; ++m) CHECK(comm(m, m).real() == doctest::Approx(1.0));
  CHECK(comm(4, 4).real() == doctest::Approx(-4.0));
}

TEST_CASE("kron index puts the cavity leftmost") {
  const Truncation dims(3, 4);
  CHECK(dims.dim() == 12);
  CHECK(dims.index(0, 0) == 0);
  CHECK(dims.index(0, 3) == 3);
  CHECK(dims.index(1, 0) == 4);
  CHECK(dims.index(2, 1) == 9);

  const Operator a = ladder(dims, Mode::cavity);
  const Operator b = ladder(dims, Mode::mechanical);
  CHECK(a.data(dims.index(0, 2), dims.index(1, 2)).real() == doctest::Approx(1.0));
  CHECK(b.data(dims.index(1, 1), dims.index(1, 2)).real() == doctest::Approx(std::sqrt(2.0)));
  // Operators on different modes commute exactly.
  CHECK(max_abs((a * b - b * a).data) == 0.0);
  CHECK(max_abs((a * b.adjoint() - b.adjoint() * a).data) == 0.0);
}

TEST_CASE("kron matches the textbook block layout") {
  CMatrix x(2, 2), y(2, 2);
  x << 1.0, 2.0, 3.0, 4.0;
  y << 0.0, 1.0, 1.0, 0.0;
  const CMatrix k = kron(x, y);
  CHECK(k.rows() == 4);
  CHECK(k(0, 1).real() == 1.0);
  CHECK(k(1, 2).real() == 2.0);
  CHECK(k(2, 1).real() == 3.0);
  CHECK(k(3, 2).real() == 4.0);
  CHECK(k(0, 0).real() == 0.0);
}

TEST_CASE("identity operator and arithmetic") {
  const Truncation dims(2, 3);
  const Operator id = identity(dims);
  const Operator b = ladder(dims, Mode::mechanical);
  CHECK(max_abs((id * b - b).data) == 0.0);
  CHECK(max_abs((b + b - cplx{2.0, 0.0} * b).data) == 0.0);
  CHECK(error_of([&] { (void)(b * ladder(Truncation(3, 3), Mode::mechanical)); }) == ErrorCode::dimension_mismatch);
  CHECK(error_of([&] { Operator(dims, CMatrix::Zero(5, 5)); }) == ErrorCode::dimension_mismatch);
}

TEST_CASE("truncation rejects too few levels") {
  CHECK(error_of([] { Truncation(0, 4); }) == ErrorCode::invalid_argument);
  CHECK(error_of([] { Truncation(2, 1); }) == ErrorCode::invalid_argument);
  CHECK_NOTHROW(Truncation(1, 2));
}

TEST_CASE("eig_hermitian sorts ascending with a fixed phase") {
  CMatrix sx(2, 2);
  sx << 0.0, 1.0, 1.0, 0.0;
  const EigenSystem es = eig_hermitian(sx);
  CHECK(es.values(0) == doctest::Approx(-1.0));
  CHECK(es.values(1) == doctest::Approx(1.0));
  for (int k = 0; k < 2; ++k) {
    Eigen::Index big = 0;
    es.vectors.col(k).cwiseAbs().maxCoeff(&big);
    CHECK(std::abs(es.vectors(big, k).imag()) < 1e-14);
    CHECK(es.vectors(big, k).real() > 0.0);
  }

  std::mt19937_64 rng(3);
  CMatrix g = phonon::test::random_matrix(6, rng);
  const CMatrix h = g + g.adjoint();
  const EigenSystem r = eig_hermitian(h);
  for (int k = 1; k < 6; ++k) CHECK(r.values(k - 1) <= r.values(k));
  CHECK(max_abs(h * r.vectors - r.vectors * r.values.cast<cplx>().asDiagonal()) < 1e-12);
}

TEST_CASE("eig_hermitian is deterministic on degenerate spectra") {
  const CMatrix id = CMatrix::Identity(3, 3);
  const EigenSystem a = eig_hermitian(id);
  const EigenSystem b = eig_hermitian(id);
  CHECK(max_abs(a.vectors - b.vectors) == 0.0);
}

TEST_CASE("eig_hermitian rejects non-Hermitian input") {
  CMatrix m(2, 2);
  m << 0.0, 1.0, 0.0, 0.0;
  CHECK(error_of([&] { eig_hermitian(m); }) == ErrorCode::not_hermitian);
}

TEST_CASE("solve_linear solves regular systems and flags singular ones") {
  CMatrix a(2, 2);
  a << 2.0, 1.0, 1.0, 3.0;
  CVector rhs(2);
  rhs << 3.0, 5.0;
  const CVector x = solve_linear(a, rhs);
  CHECK(x(0).real() == doctest::Approx(0.8));
  CHECK(x(1).real() == doctest::Approx(1.4));

  CMatrix s(2, 2);
  s << 1.0, 2.0, 2.0, 4.0;
  CHECK(error_of([&] { solve_linear(s, rhs); }) == ErrorCode::singular_system);
  CHECK(error_of([&] { solve_linear(s, CVector::Zero(3)); }) == ErrorCode::dimension_mismatch);
}

TEST_CASE("density matrix validation") {
  const Truncation dims(1, 2);
  CMatrix rho = CMatrix::Zero(2, 2);
  rho(0, 0) = 0.5;
  CHECK(error_of([&] { DensityMatrix(dims, rho); }) == ErrorCode::invalid_argument);
  rho(1, 1) = 0.5;
  rho(0, 1) = cplx{0.1, 0.1};
  CHECK(error_of([&] { DensityMatrix(dims, rho); }) == ErrorCode::not_hermitian);
  rho(1, 0) = std::conj(rho(0, 1));
  const DensityMatrix ok(dims, rho);
  CHECK(ok.min_eigenvalue() == doctest::Approx(0.5 - std::abs(rho(0, 1))));
  CHECK(error_of([&] { DensityMatrix(Truncation(1, 3), rho); }) == ErrorCode::dimension_mismatch);
}

TEST_CASE("Fock state populations") {
  const Truncation dims(2, 4);
  const DensityMatrix f = DensityMatrix::fock(dims, 1, 2);
  const auto p = f.populations();
  CHECK(p.size() == 2);
  CHECK(p[0].size() == 4);
  CHECK(p[1][2] == 1.0);
  CHECK(p[0][2] == 0.0);
  CHECK(error_of([&] { DensityMatrix::fock(dims, 2, 0); }) == ErrorCode::invalid_argument);
}

TEST_CASE("error codes render as snake_case names") {
  CHECK(std::string(to_string(ErrorCode::truncation_explosion)) == "truncation_explosion");
  CHECK(std::string(to_string(ErrorCode::insufficient_occupation)) == "insufficient_occupation");
  const Error e(ErrorCode::non_convergence, "stalled");
  CHECK(std::string(e.what()) == "non_convergence: stalled");
}
