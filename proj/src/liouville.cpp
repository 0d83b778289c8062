#include "phonon/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <optional>
#include <string>

#include <Eigen/SparseLU>
#ifdef PHONON_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif

#include "phonon/observables.hpp"

namespace phonon {

namespace {

using Triplet = Eigen::Triplet<cplx>;

// Largest Liouvillian size for which evolution builds the dense one-step
// propagator and raises it to a power by repeated squaring.
constexpr Eigen::Index kDensePropagatorLimit = 1024;

struct Entry {
  Eigen::Index row;
  Eigen::Index col;
  cplx value;
};

std::vector<Entry> nonzeros(const CMatrix& m) {
  std::vector<Entry> out;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (m(i, j) != cplx{0.0, 0.0}) out.push_back({i, j, m(i, j)});
    }
  }
  return out;
}

// Appends scale * (lhs kron rhs) to `out`.
void add_kron(std::vector<Triplet>& out, const std::vector<Entry>& lhs, const std::vector<Entry>& rhs,
              Eigen::Index rhs_dim, cplx scale) {
  for (const Entry& l : lhs) {
    for (const Entry& r : rhs) {
      out.emplace_back(l.row * rhs_dim + r.row, l.col * rhs_dim + r.col, scale * l.value * r.value);
    }
  }
}

std::vector<Entry> identity_entries(Eigen::Index d) {
  std::vector<Entry> out;
  out.reserve(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) out.push_back({i, i, 1.0});
  return out;
}

CVector vectorize(const CMatrix& rho) { return Eigen::Map<const CVector>(rho.data(), rho.size()); }

CMatrix unvectorize(const CVector& v, Eigen::Index d) { return Eigen::Map<const CMatrix>(v.data(), d, d); }

double inf_norm(const SparseCMatrix& m) {
  RVector row_sums = RVector::Zero(m.rows());
  for (Eigen::Index k = 0; k < m.outerSize(); ++k) {
    for (SparseCMatrix::InnerIterator it(m, k); it; ++it) row_sums(it.row()) += std::abs(it.value());
  }
  return row_sums.size() == 0 ? 0.0 : row_sums.maxCoeff();
}

// Hermitize and normalize a raw vectorized solution.
std::optional<CMatrix> to_physical(const CVector& x, Eigen::Index d) {
  if (!x.allFinite()) return std::nullopt;
  CMatrix rho = unvectorize(x, d);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  const cplx tr = rho.trace();
  if (std::abs(tr) < 1e-300) return std::nullopt;
  rho /= tr.real();
  return rho;
}

double residual_of(const Liouvillian& l, const CMatrix& rho) { return (l.matrix * vectorize(rho)).norm(); }

CMatrix one_step_propagator(const SparseCMatrix& m, double h) {
  const Eigen::Index n = m.rows();
  const CMatrix x = h * CMatrix(m);
  const CMatrix id = CMatrix::Identity(n, n);
  // I + X (I + X/2 (I + X/3 (I + X/4))): the RK4 update of a linear system.
  CMatrix p = id + x / 4.0;
  p = id + (x * p) / 3.0;
  p = id + (x * p) / 2.0;
  p = id + x * p;
  return p;
}

CVector rk4_step(const SparseCMatrix& m, const CVector& v, double h) {
  const CVector k1 = m * v;
  const CVector k2 = m * (v + 0.5 * h * k1);
  const CVector k3 = m * (v + 0.5 * h * k2);
  const CVector k4 = m * (v + h * k3);
  return v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

CMatrix vacuum(Truncation dims) {
  const auto d = static_cast<Eigen::Index>(dims.dim());
  CMatrix rho = CMatrix::Zero(d, d);
  rho(0, 0) = 1.0;
  return rho;
}

// A Hermitian d x d matrix has d^2 real coordinates. Coordinate p = i + d*j
// holds rho_ii on the diagonal, Re rho_ij above it (i < j) and Im rho_ji
// below it. The returned matrix maps coordinates to vec(rho).
SparseCMatrix hermitian_embedding(Eigen::Index d) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(2 * d * d));
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const Eigen::Index p = i + d * j;
      const Eigen::Index q = j + d * i;
      if (i == j) {
        t.emplace_back(p, p, 1.0);
      } else if (i < j) {
        t.emplace_back(p, p, 1.0);
        t.emplace_back(q, p, 1.0);
      } else {
        t.emplace_back(q, p, cplx{0.0, 1.0});
        t.emplace_back(p, p, cplx{0.0, -1.0});
      }
    }
  }
  SparseCMatrix e(d * d, d * d);
  e.setFromTriplets(t.begin(), t.end());
  return e;
}

// Solves L[rho] = 0 with tr(rho) = 1 replacing the first equation. The
// Liouvillian maps Hermitian matrices to Hermitian matrices, so the system is
// posed in real coordinates, which roughly quarters the factorization cost.
std::optional<CMatrix> nullspace_solution(const Liouvillian& l) {
  const auto d = static_cast<Eigen::Index>(l.dims.dim());
  const Eigen::Index n = d * d;
  const SparseCMatrix embed = hermitian_embedding(d);
  const SparseCMatrix m = l.matrix * embed;

  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(2 * m.nonZeros()));
  for (Eigen::Index k = 0; k < m.outerSize(); ++k) {
    for (SparseCMatrix::InnerIterator it(m, k); it; ++it) {
      const Eigen::Index r = it.row();
      if (r == 0) continue;
      const Eigen::Index ri = r % d;
      const Eigen::Index rj = r / d;
      if (ri > rj) continue;
      if (it.value().real() != 0.0) t.emplace_back(r, it.col(), it.value().real());
      if (ri < rj && it.value().imag() != 0.0) t.emplace_back(rj + d * ri, it.col(), it.value().imag());
    }
  }
  for (Eigen::Index i = 0; i < d; ++i) t.emplace_back(0, i + d * i, 1.0);
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(t.begin(), t.end());
  a.makeCompressed();

#ifdef PHONON_HAVE_UMFPACK
  Eigen::UmfPackLU<Eigen::SparseMatrix<double>> lu;
  lu.umfpackControl()(UMFPACK_STRATEGY) = UMFPACK_STRATEGY_SYMMETRIC;
  lu.umfpackControl()(UMFPACK_ORDERING) = UMFPACK_ORDERING_METIS;
#else
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
#endif
  {
    // The METIS ordering keeps global random state; concurrent orderings would
    // make results depend on the thread schedule.
    static std::mutex ordering_mutex;
    const std::lock_guard<std::mutex> lock(ordering_mutex);
    lu.analyzePattern(a);
  }
  lu.factorize(a);
  if (lu.info() != Eigen::Success) return std::nullopt;
  RVector rhs = RVector::Zero(n);
  rhs(0) = 1.0;
  const RVector x = lu.solve(rhs);
  if (lu.info() != Eigen::Success) return std::nullopt;
  return to_physical(embed * x.cast<cplx>(), d);
}

// Time evolution from the vacuum until the residual drops below tol.
std::optional<CMatrix> relaxation_solution(const Liouvillian& l, double tol) {
  const auto d = static_cast<Eigen::Index>(l.dims.dim());
  const double norm = inf_norm(l.matrix);
  if (norm == 0.0) return std::nullopt;
  const double h = 0.1 / norm;
  CVector v = vectorize(vacuum(l.dims));

  if (l.matrix.rows() <= kDensePropagatorLimit) {
    // After k rounds v has been advanced by 2^k - 1 steps.
    CMatrix p = one_step_propagator(l.matrix, h);
    for (int round = 0; round < 62; ++round) {
      v = p * v;
      if (auto rho = to_physical(v, d); rho && residual_of(l, *rho) <= tol) return rho;
      p = (p * p).eval();
    }
    return std::nullopt;
  }

  constexpr std::int64_t kMaxSteps = 20'000'000;
  constexpr std::int64_t kCheckEvery = 2000;
  for (std::int64_t step = 1; step <= kMaxSteps; ++step) {
    v = rk4_step(l.matrix, v, h);
    if (step % kCheckEvery == 0) {
      if (auto rho = to_physical(v, d); rho && residual_of(l, *rho) <= tol) return rho;
    }
  }
  return std::nullopt;
}

}  // namespace

CMatrix Liouvillian::apply(const CMatrix& rho) const {
  const auto d = static_cast<Eigen::Index>(dims.dim());
  if (rho.rows() != d || rho.cols() != d) {
    throw Error(ErrorCode::dimension_mismatch, "density matrix does not match Liouvillian");
  }
  return unvectorize(matrix * vectorize(rho), d);
}

Liouvillian build_liouvillian(const Operator& h, const std::vector<CollapseChannel>& channels) {
  if (hermiticity_defect(h.data) > 1e-10) {
    throw Error(ErrorCode::not_hermitian, "Hamiltonian is not Hermitian");
  }
  const Truncation dims = h.dims;
  const auto d = static_cast<Eigen::Index>(dims.dim());
  const std::vector<Entry> id = identity_entries(d);
  const cplx i{0.0, 1.0};

  std::vector<Triplet> triplets;
  const std::vector<Entry> h_nz = nonzeros(h.data);
  // -i (H rho - rho H)
  add_kron(triplets, id, h_nz, d, -i);
  add_kron(triplets, nonzeros(h.data.transpose()), id, d, i);

  for (const CollapseChannel& ch : channels) {
    if (!(ch.op.dims == dims)) throw Error(ErrorCode::dimension_mismatch, "channel truncation differs");
    if (ch.rate < 0.0) throw Error(ErrorCode::invalid_argument, "negative channel rate");
    if (ch.rate == 0.0) continue;
    const CMatrix& c = ch.op.data;
    const CMatrix cdc = c.adjoint() * c;
    const double half = ch.rate / 2.0;
    add_kron(triplets, nonzeros(c.conjugate()), nonzeros(c), d, 2.0 * half);
    const std::vector<Entry> cdc_nz = nonzeros(cdc);
    add_kron(triplets, id, cdc_nz, d, -half);
    add_kron(triplets, nonzeros(cdc.transpose()), id, d, -half);
  }

  SparseCMatrix m(d * d, d * d);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.prune(cplx{0.0, 0.0});
  m.makeCompressed();
  return {dims, std::move(m)};
}

const char* to_string(SteadyStateMethod m) noexcept {
  return m == SteadyStateMethod::nullspace ? "nullspace" : "evolution";
}

std::pair<double, double> top_level_populations(const DensityMatrix& rho) {
  const Truncation& t = rho.dims();
  const auto pops = rho.populations();
  double photon = 0.0;
  if (t.n_a >= 2) {
    for (double p : pops.back()) photon += p;
  }
  double phonon = 0.0;
  for (const auto& row : pops) phonon += row.back();
  return {photon, phonon};
}

SteadyStateReport steady_state(const Liouvillian& l, double tol) {
  SteadyStateMethod method = SteadyStateMethod::nullspace;
  std::optional<CMatrix> rho = nullspace_solution(l);
  if (!rho || !(residual_of(l, *rho) <= tol)) {
    method = SteadyStateMethod::evolution;
    rho = relaxation_solution(l, tol);
  }
  if (!rho) {
    throw Error(ErrorCode::non_convergence, "steady state not reached by null-space or evolution");
  }
  const double residual = residual_of(l, *rho);
  DensityMatrix state(l.dims, std::move(*rho));
  const double min_eig = state.min_eigenvalue();
  if (min_eig < -1e-6) {
    throw Error(ErrorCode::non_positive, "steady state has eigenvalue " + std::to_string(min_eig));
  }
  const auto [photon_top, phonon_top] = top_level_populations(state);
  const double top = std::max(photon_top, phonon_top);
  return {std::move(state), residual, method, top < kTopLevelThreshold, top};
}

DensityMatrix evolve(const Liouvillian& l, const DensityMatrix& rho0, double t_final, double dt_max) {
  if (!(rho0.dims() == l.dims)) throw Error(ErrorCode::dimension_mismatch, "initial state truncation differs");
  if (!(t_final >= 0.0) || !(dt_max > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "need t_final >= 0 and dt_max > 0");
  }
  const double norm = inf_norm(l.matrix);
  if (t_final == 0.0 || norm == 0.0) return rho0;

  const double h_cap = std::min(dt_max, 0.1 / norm);
  const double steps_real = std::ceil(t_final / h_cap);
  if (!(h_cap > 0.0) || !(steps_real < 4e18)) {
    throw Error(ErrorCode::step_size_underflow, "step count overflows for t_final " + std::to_string(t_final));
  }
  auto steps = static_cast<std::uint64_t>(steps_real);
  const double h = t_final / static_cast<double>(steps);
  if (!(h > 0.0) || t_final + h == t_final) {
    throw Error(ErrorCode::step_size_underflow, "step size underflows");
  }

  const auto d = static_cast<Eigen::Index>(l.dims.dim());
  CVector v = vectorize(rho0.data());
  if (l.matrix.rows() <= kDensePropagatorLimit) {
    CMatrix p = one_step_propagator(l.matrix, h);
    while (steps != 0) {
      if (steps & 1U) v = p * v;
      steps >>= 1U;
      if (steps != 0) p = (p * p).eval();
    }
  } else {
    for (std::uint64_t s = 0; s < steps; ++s) v = rk4_step(l.matrix, v, h);
  }

  CMatrix rho = unvectorize(v, d);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  const double drift = std::abs(rho.trace() - 1.0);
  if (!(drift < 1e-8)) {
    throw Error(ErrorCode::non_convergence, "trace drifted by " + std::to_string(drift));
  }
  rho /= rho.trace().real();
  return {l.dims, std::move(rho)};
}

SteadyStateReport solve_steady_state(const SystemParams& sp, Truncation dims, double tol) {
  sp.validate();
  return steady_state(build_liouvillian(build_heff(sp, dims), collapse_channels(sp, dims)), tol);
}

namespace {

struct Snapshot {
  std::optional<double> g2;
  double mean_phonons;
};

Snapshot snapshot(const DensityMatrix& rho) {
  const ObservableSet obs = observe(rho);
  return {obs.g2, obs.mean_phonons};
}

bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

bool unchanged(const Snapshot& prev, const Snapshot& cur, double tol) {
  if (!close(prev.mean_phonons, cur.mean_phonons, tol)) return false;
  if (prev.g2.has_value() != cur.g2.has_value()) return false;
  return !cur.g2 || close(*prev.g2, *cur.g2, tol);
}

struct Marginals {
  std::vector<double> photons;
  std::vector<double> phonons;
};

Marginals marginals(const DensityMatrix& rho) {
  const auto pops = rho.populations();
  Marginals m{std::vector<double>(pops.size(), 0.0), std::vector<double>(pops.front().size(), 0.0)};
  for (std::size_t i = 0; i < pops.size(); ++i) {
    for (std::size_t j = 0; j < pops[i].size(); ++j) {
      m.photons[i] += pops[i][j];
      m.phonons[j] += pops[i][j];
    }
  }
  return m;
}

// Levels to add so that a geometric continuation of the tail falls below
// `threshold`; 0 if the top level is already below it. The decay rate is
// averaged over the last few levels since the boundary distorts the very top.
int extra_levels(const std::vector<double>& marginal, double threshold) {
  const std::size_t n = marginal.size();
  const double top = marginal.back();
  if (!(top > threshold)) return 0;
  if (n < 2) return 1;
  const std::size_t span = std::min<std::size_t>(3, n - 1);
  const double ref = marginal[n - 1 - span];
  const double ratio = ref > 0.0 ? std::pow(top / ref, 1.0 / static_cast<double>(span)) : 1.0;
  if (!(ratio < 0.9)) return std::numeric_limits<int>::max() / 2;
  return static_cast<int>(std::ceil(std::log(threshold / top) / std::log(ratio)));
}

}  // namespace

ConvergedSteadyState converge_truncation(const SystemParams& sp, Truncation start, double tol,
                                         const ConvergenceOptions& options) {
  sp.validate();
  Truncation dims = start;
  if (sp.g != 0.0 && dims.n_a < 2) dims.n_a = 2;
  if (dims.n_b > options.max_n_b || dims.n_a > options.max_n_a) {
    throw Error(ErrorCode::truncation_explosion, "starting truncation exceeds the cap");
  }

  SteadyStateReport report = solve_steady_state(sp, dims, options.steady_state_tol);
  Snapshot prev = snapshot(report.rho);
  while (true) {
    if (dims.n_b == options.max_n_b) {
      throw Error(ErrorCode::truncation_explosion,
                  "n_b would exceed the cap of " + std::to_string(options.max_n_b) +
                      " (parameters outside the weak-drive regime?)");
    }
    const Marginals m = marginals(report.rho);
    // A step always enlarges the space; n_b grows by at least 2 unless n_a
    // grows instead.
    const bool grow_photons = m.photons.back() > options.top_level_threshold;
    if (grow_photons && dims.n_a == options.max_n_a) {
      throw Error(ErrorCode::truncation_explosion, "n_a would exceed the cap");
    }
    const int grow_b = std::clamp(extra_levels(m.phonons, options.top_level_threshold), grow_photons ? 0 : 2,
                                  std::max(2, dims.n_b / 2));
    Truncation next(dims.n_a, std::min(options.max_n_b, dims.n_b + grow_b));
    if (grow_photons) {
      const int grow_a = std::clamp(extra_levels(m.photons, options.top_level_threshold), 1, 2);
      next.n_a = std::min(options.max_n_a, dims.n_a + grow_a);
    }

    SteadyStateReport next_report = solve_steady_state(sp, next, options.steady_state_tol);
    const Snapshot cur = snapshot(next_report.rho);
    dims = next;
    report = std::move(next_report);
    const auto [p_top, b_top] = top_level_populations(report.rho);
    if (unchanged(prev, cur, tol) && std::max(p_top, b_top) < options.top_level_threshold) {
      report.truncation_converged = true;
      return {dims, std::move(report)};
    }
    prev = cur;
  }
}

}  // namespace phonon
