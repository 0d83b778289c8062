#pragma once

#include <utility>
#include <vector>

#include <Eigen/SparseCore>

#include "phonon/core.hpp"
#include "phonon/model.hpp"

namespace phonon {

using SparseCMatrix = Eigen::SparseMatrix<cplx>;

/// Matrix form of the Lindblad generator on column-stacked density matrices:
/// vec(X rho Y) = (Y^T kron X) vec(rho).
struct Liouvillian {
  Truncation dims;
  SparseCMatrix matrix;

  /// L[rho] computed as matrix * vec(rho).
  CMatrix apply(const CMatrix& rho) const;
  CMatrix dense() const { return CMatrix(matrix); }
};

Liouvillian build_liouvillian(const Operator& h, const std::vector<CollapseChannel>& channels);

enum class SteadyStateMethod { nullspace, evolution };
const char* to_string(SteadyStateMethod m) noexcept;

struct SteadyStateReport {
  DensityMatrix rho;
  double residual;  // ||L[rho]||_F
  SteadyStateMethod method;
  bool truncation_converged;
  double top_level_population;
};

inline constexpr double kDefaultSteadyStateTol = 1e-10;
inline constexpr double kTopLevelThreshold = 1e-8;

/// Null-space solve with the first row of L replaced by the trace functional,
/// falling back to time evolution from the vacuum if the solve fails or
/// misses `tol`. The result is Hermitized and trace-normalized.
SteadyStateReport steady_state(const Liouvillian& l, double tol = kDefaultSteadyStateTol);

/// Fixed-step RK4 of d vec(rho)/dt = L vec(rho), with step <= dt_max and
/// <= 0.1 / ||L||_inf.
DensityMatrix evolve(const Liouvillian& l, const DensityMatrix& rho0, double t_final, double dt_max);

/// Population in the highest retained Fock level of each mode: (photon, phonon).
/// The photon entry is 0 when the cavity has a single level.
std::pair<double, double> top_level_populations(const DensityMatrix& rho);

/// Builds H_eff and the channels for `sp` and solves for the steady state.
SteadyStateReport solve_steady_state(const SystemParams& sp, Truncation dims,
                                     double tol = kDefaultSteadyStateTol);

struct ConvergenceOptions {
  double steady_state_tol = kDefaultSteadyStateTol;
  double top_level_threshold = kTopLevelThreshold;
  int max_n_b = 64;
  int max_n_a = 64;
};

struct ConvergedSteadyState {
  Truncation dims;
  SteadyStateReport report;
};

/// Grows n_b (and n_a when the top photon level is occupied) until g2(0) and
/// <b^dag b> change by less than `tol` (relative) between successive sizes and
/// the top-level population is below the threshold.
ConvergedSteadyState converge_truncation(const SystemParams& sp, Truncation start, double tol,
                                         const ConvergenceOptions& options = {});

}  // namespace phonon
