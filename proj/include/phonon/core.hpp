#pragma once

// Dense linear-algebra kernel for a cavity mode (a) coupled to a mechanical
// mode (b) in a truncated two-mode Fock space.
//
// Composite basis ordering is fixed: index = photon * n_b + phonon, i.e. the
// cavity factor is the left operand of every Kronecker product.

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "phonon/error.hpp"

namespace phonon {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Fock cutoffs: photon numbers 0..n_a-1, phonon numbers 0..n_b-1.
struct Truncation {
  int n_a = 3;
  int n_b = 10;

  Truncation() = default;
  Truncation(int na, int nb);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(n_a) * n_b; }
  Eigen::Index index(int photons, int phonons) const noexcept {
    return static_cast<Eigen::Index>(photons) * n_b + phonons;
  }

  friend bool operator==(const Truncation&, const Truncation&) = default;
};

enum class Mode { cavity, mechanical };

/// A d x d complex matrix acting on the composite space described by `dims`.
struct Operator {
  Truncation dims;
  CMatrix data;

  Operator(Truncation t, CMatrix m);

  Operator adjoint() const { return {dims, data.adjoint()}; }
  friend Operator operator*(const Operator& lhs, const Operator& rhs);
  friend Operator operator+(const Operator& lhs, const Operator& rhs);
  friend Operator operator-(const Operator& lhs, const Operator& rhs);
  friend Operator operator*(cplx s, const Operator& op);
};

Operator identity(Truncation dims);

/// Annihilation operator for `which`, identity-padded on the other factor.
Operator ladder(Truncation dims, Mode which);

/// Single-mode annihilation operator on `levels` Fock states.
CMatrix annihilation(int levels);

CMatrix kron(const CMatrix& lhs, const CMatrix& rhs);

/// Largest entrywise modulus of m - m^dagger.
double hermiticity_defect(const CMatrix& m);

double max_abs(const CMatrix& m);

struct EigenSystem {
  RVector values;   // ascending
  CMatrix vectors;  // columns, matching `values`
};

/// Eigen-decomposition of a Hermitian matrix. Eigenvalues ascend; ties (within
/// 1e-12 relative) are ordered by the real parts of their eigenvectors,
/// compared lexicographically. Each eigenvector's largest component is made
/// real and positive.
EigenSystem eig_hermitian(const CMatrix& m);
inline EigenSystem eig_hermitian(const Operator& op) { return eig_hermitian(op.data); }

/// Solves A x = rhs by LU with partial pivoting, then verifies
/// ||A x - rhs|| <= 1e-10 (||A||_F ||x|| + ||rhs||).
CVector solve_linear(const CMatrix& a, const CVector& rhs);

/// Hermitian, unit-trace state on the composite space.
class DensityMatrix {
 public:
  /// Validates Hermiticity (1e-10) and trace (1e-10).
  DensityMatrix(Truncation dims, CMatrix data);

  static DensityMatrix fock(Truncation dims, int photons, int phonons);

  const Truncation& dims() const noexcept { return dims_; }
  const CMatrix& data() const noexcept { return data_; }
  double min_eigenvalue() const;

  /// Diagonal populations indexed [photons][phonons]; roundoff negatives
  /// above -1e-10 are clipped to zero.
  std::vector<std::vector<double>> populations() const;

 private:
  Truncation dims_;
  CMatrix data_;
};

}  // namespace phonon
