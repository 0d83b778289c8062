#pragma once

#include <optional>
#include <vector>

#include "phonon/core.hpp"

namespace phonon {

/// Below this mean phonon number g2(0) is reported as undefined.
inline constexpr double kMinOccupationForG2 = 1e-12;

/// tr(rho b^dag b^dag b b) / tr(rho b^dag b)^2. Throws insufficient_occupation
/// when tr(rho b^dag b) < 1e-12.
double g2_zero(const DensityMatrix& rho);

/// Sum of the |0,0>, |0,1>, |0,2> and |1,0> populations (photons, phonons).
double fidelity_F(const DensityMatrix& rho);

struct Occupations {
  double mean_photons;
  double mean_phonons;
};
Occupations occupations(const DensityMatrix& rho);

struct ObservableSet {
  std::optional<double> g2;  // empty when undefined
  double mean_phonons;
  double mean_photons;
  double fidelity_F;
  std::vector<std::vector<double>> populations;  // [photons][phonons]
};

ObservableSet observe(const DensityMatrix& rho);

}  // namespace phonon
