#pragma once

#include <cmath>
#include <optional>
#include <random>

#include "phonon/core.hpp"
#include "phonon/error.hpp"

namespace phonon::test {

// Error code thrown by f, or nullopt if it returns normally.
template <class F>
std::optional<ErrorCode> error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

// Random density matrix: normalized G G^dagger.
inline CMatrix random_density(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = cplx{n(rng), n(rng)};
  CMatrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

inline CMatrix random_matrix(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = cplx{n(rng), n(rng)};
  return m;
}

}  // namespace phonon::test
