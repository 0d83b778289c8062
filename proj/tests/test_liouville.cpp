#include <doctest.h>

#include <random>

#include "phonon/analytic.hpp"
#include "phonon/liouville.hpp"
#include "phonon/observables.hpp"
#include "test_util.hpp"

using namespace phonon;
using phonon::test::error_of;

namespace {

// Master-equation right-hand side written out directly with dense matrices.
CMatrix lindblad_rhs(const SystemParams& sp, Truncation dims, const CMatrix& rho) {
  const cplx i{0.0, 1.0};
  const CMatrix h = build_heff(sp, dims).data;
  CMatrix out = -i * (h * rho - rho * h);
  for (const auto& ch : collapse_channels(sp, dims)) {
    const CMatrix& c = ch.op.data;
    const CMatrix cd = c.adjoint();
    out += ch.rate / 2.0 * (2.0 * c * rho * cd - cd * c * rho - rho * cd * c);
  }
  return out;
}

Liouvillian liouvillian_for(const SystemParams& sp, Truncation dims) {
  return build_liouvillian(build_heff(sp, dims), collapse_channels(sp, dims));
}

void check_physical(const SteadyStateReport& r, double tol) {
  const CMatrix& rho = r.rho.data();
  CHECK(std::abs(rho.trace() - 1.0) < 1e-12);
  CHECK(hermiticity_defect(rho) < 1e-10);
  CHECK(r.rho.min_eigenvalue() >= -1e-8);
  CHECK(r.residual <= tol);
}

}  // namespace

TEST_CASE("superoperator reproduces the master equation on random states") {
  std::mt19937_64 rng(5);
  SystemParams sp;
  sp.g = 1.3;
  sp.epsilon = 0.4;
  sp.delta_p = -0.7;
  sp.n_th = 0.3;
  sp.gamma = 0.2;
  const Truncation dims(3, 4);
  const Liouvillian l = liouvillian_for(sp, dims);
  CHECK(l.matrix.rows() == 144);
  for (int k = 0; k < 5; ++k) {
    const CMatrix rho = phonon::test::random_density(12, rng);
    CHECK(max_abs(l.apply(rho) - lindblad_rhs(sp, dims, rho)) < 1e-12);
  }
}

TEST_CASE("generator preserves trace and Hermiticity") {
  std::mt19937_64 rng(6);
  SystemParams sp;
  sp.n_th = 0.5;
  const Truncation dims(3, 5);
  const Liouvillian l = liouvillian_for(sp, dims);
  for (int k = 0; k < 10; ++k) {
    const CMatrix rho = phonon::test::random_density(15, rng);
    const CMatrix drho = l.apply(rho);
    CHECK(std::abs(drho.trace()) < 1e-12);
    CHECK(hermiticity_defect(drho) < 1e-12);
  }
  // Equivalently vec(I)^T L = 0.
  const CMatrix dense = l.dense();
  CVector tr_row = CVector::Zero(dense.rows());
  for (int j = 0; j < 15; ++j) tr_row(j * 15 + j) = 1.0;
  CHECK((tr_row.transpose() * dense).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("build_liouvillian rejects invalid input") {
  SystemParams sp;
  const Truncation dims(2, 3);
  auto channels = collapse_channels(sp, dims);
  Operator h = build_heff(sp, dims);
  h.data(0, 1) += 1.0;
  CHECK(error_of([&] { build_liouvillian(h, channels); }) == ErrorCode::not_hermitian);
  channels[0].rate = -1.0;
  CHECK(error_of([&] { build_liouvillian(build_heff(sp, dims), channels); }) == ErrorCode::invalid_argument);
  const auto other = collapse_channels(sp, Truncation(2, 4));
  CHECK(error_of([&] { build_liouvillian(build_heff(sp, dims), other); }) == ErrorCode::dimension_mismatch);
  const Liouvillian l = liouvillian_for(sp, dims);
  CHECK(error_of([&] { l.apply(CMatrix::Zero(4, 4)); }) == ErrorCode::dimension_mismatch);
}

TEST_CASE("baseline steady state is physical") {
  const SteadyStateReport r = solve_steady_state(SystemParams{}, Truncation(3, 10));
  check_physical(r, 1e-10);
  CHECK(r.method == SteadyStateMethod::nullspace);
  CHECK(std::string(to_string(r.method)) == "nullspace");
}

TEST_CASE("steady states are physical across random parameters") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 15; ++k) {
    SystemParams sp;
    sp.g = 3.0 * u(rng);
    sp.kappa = 0.2 + u(rng);
    sp.gamma = 0.01 + 0.5 * u(rng);
    sp.epsilon = 0.1 * u(rng);
    sp.delta_p = 4.0 * u(rng) - 2.0;
    sp.n_th = 0.2 * u(rng);
    check_physical(solve_steady_state(sp, Truncation(3, 8)), 1e-10);
  }
}

TEST_CASE("thermal bath without pump or coupling gives a thermal state") {
  SystemParams sp;
  sp.g = 0.0;
  sp.epsilon = 0.0;
  sp.n_th = 0.5;
  const ConvergedSteadyState s = converge_truncation(sp, Truncation(3, 10), 1e-6);
  const auto pops = s.report.rho.populations();
  // p_m = n^m / (1 + n)^(m + 1)
  for (int m = 0; m < 8; ++m) {
    CHECK(pops[0][static_cast<std::size_t>(m)] == doctest::Approx(std::pow(0.5, m) / std::pow(1.5, m + 1)).epsilon(1e-9));
  }
  const ObservableSet obs = observe(s.report.rho);
  REQUIRE(obs.g2.has_value());
  CHECK(std::abs(*obs.g2 - 2.0) < 1e-6);
  CHECK(std::abs(obs.mean_phonons - 0.5) < 1e-6);
  CHECK(obs.mean_photons == doctest::Approx(0.0));
}

TEST_CASE("pumped oscillator without coupling relaxes to a coherent state") {
  SystemParams sp;
  sp.g = 0.0;
  sp.epsilon = 0.001;
  sp.gamma = 0.1;
  const ConvergedSteadyState s = converge_truncation(sp, Truncation(3, 6), 1e-8);
  const ObservableSet obs = observe(s.report.rho);
  const double beta2 = std::pow(0.001 / 0.05, 2);
  CHECK(std::abs(obs.mean_phonons - beta2) < 1e-8);
  REQUIRE(obs.g2.has_value());
  CHECK(std::abs(*obs.g2 - 1.0) < 1e-6);
}

TEST_CASE("null-space and time-evolution steady states agree") {
  SystemParams sp;
  const Truncation dims(2, 4);
  const Liouvillian l = liouvillian_for(sp, dims);
  const SteadyStateReport ns = steady_state(l);
  const DensityMatrix evolved = evolve(l, DensityMatrix::fock(dims, 0, 0), 50.0 / sp.gamma, 0.05);
  CHECK(max_abs(evolved.data() - ns.rho.data()) < 1e-6);
}

TEST_CASE("evolution conserves trace and matches a closed-form decay") {
  // Pure mechanical decay from |0,1>: population exp(-gamma t).
  SystemParams sp;
  sp.g = 0.0;
  sp.epsilon = 0.0;
  sp.gamma = 0.3;
  const Truncation dims(1, 3);
  const Liouvillian l = liouvillian_for(sp, dims);
  const DensityMatrix out = evolve(l, DensityMatrix::fock(dims, 0, 1), 2.0, 0.01);
  CHECK(std::abs(out.data().trace() - 1.0) < 1e-12);
  CHECK(out.data()(1, 1).real() == doctest::Approx(std::exp(-0.6)).epsilon(1e-9));
}

TEST_CASE("evolve argument errors") {
  SystemParams sp;
  const Truncation dims(2, 3);
  const Liouvillian l = liouvillian_for(sp, dims);
  const DensityMatrix vac = DensityMatrix::fock(dims, 0, 0);
  CHECK(error_of([&] { evolve(l, vac, -1.0, 0.1); }) == ErrorCode::invalid_argument);
  CHECK(error_of([&] { evolve(l, vac, 1.0, 0.0); }) == ErrorCode::invalid_argument);
  CHECK(error_of([&] { evolve(l, vac, 1e300, 1.0); }) == ErrorCode::step_size_underflow);
  CHECK(error_of([&] { evolve(l, DensityMatrix::fock(Truncation(2, 4), 0, 0), 1.0, 0.1); }) ==
        ErrorCode::dimension_mismatch);
}

TEST_CASE("baseline truncation converges and doubling n_b barely moves g2") {
  const SystemParams sp;
  const ConvergedSteadyState s = converge_truncation(sp, Truncation(3, 10), 1e-4);
  CHECK(s.report.truncation_converged);
  CHECK(s.dims.n_b <= 24);
  CHECK(s.report.top_level_population < 1e-8);
  const double g2 = g2_zero(s.report.rho);
  const double g2_big = g2_zero(solve_steady_state(sp, Truncation(s.dims.n_a, 2 * s.dims.n_b)).rho);
  CHECK(phonon::test::rel_diff(g2, g2_big) < 0.01);
}

TEST_CASE("without pump the steady state is the vacuum") {
  SystemParams sp;
  sp.epsilon = 0.0;
  const ConvergedSteadyState s = converge_truncation(sp, Truncation(2, 2), 1e-4);
  CHECK(s.report.truncation_converged);
  CHECK(s.report.rho.data()(0, 0).real() == doctest::Approx(1.0));
  CHECK_FALSE(observe(s.report.rho).g2.has_value());
}

TEST_CASE("strong coherent drive exhausts the phonon cap") {
  SystemParams sp;
  sp.g = 0.0;
  sp.epsilon = 0.1;
  sp.gamma = 0.01;
  CHECK(error_of([&] { converge_truncation(sp, Truncation(3, 10), 1e-4); }) == ErrorCode::truncation_explosion);
  ConvergenceOptions opts;
  opts.max_n_b = 8;
  CHECK(error_of([&] { converge_truncation(SystemParams{}, Truncation(3, 10), 1e-4, opts); }) ==
        ErrorCode::truncation_explosion);
}

TEST_CASE("top level populations") {
  const Truncation dims(3, 4);
  const auto [photon, phonon] = top_level_populations(DensityMatrix::fock(dims, 2, 3));
  CHECK(photon == 1.0);
  CHECK(phonon == 1.0);
  const auto [p0, b0] = top_level_populations(DensityMatrix::fock(dims, 1, 1));
  CHECK(p0 == 0.0);
  CHECK(b0 == 0.0);
}
