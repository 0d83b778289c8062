#pragma once

#include <string>
#include <vector>

#include "phonon/core.hpp"
#include "phonon/model.hpp"

namespace phonon {

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
};

struct ValidationOptions {
  Truncation truncation{3, 10};
  double tol = 1e-10;
  double conv_tol = 1e-4;
};

/// Hermiticity, excitation conservation, two-phonon spectrum, Liouvillian
/// trace and Hermiticity preservation, steady-state physicality, truncation
/// convergence, analytic identities, weak-pump numeric/analytic agreement and
/// null-space/evolution agreement, all evaluated at `sp`.
std::vector<CheckResult> run_validation(const SystemParams& sp, const ValidationOptions& options);

}  // namespace phonon
