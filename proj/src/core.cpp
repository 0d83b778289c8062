#include "phonon/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace phonon {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::not_hermitian: return "not_hermitian";
    case ErrorCode::singular_system: return "singular_system";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::degenerate_denominator: return "degenerate_denominator";
    case ErrorCode::negative_denominator: return "negative_denominator";
    case ErrorCode::non_convergence: return "non_convergence";
    case ErrorCode::non_positive: return "non_positive";
    case ErrorCode::step_size_underflow: return "step_size_underflow";
    case ErrorCode::truncation_explosion: return "truncation_explosion";
    case ErrorCode::insufficient_occupation: return "insufficient_occupation";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::io_failure: return "io_failure";
    case ErrorCode::unsupported_shape: return "unsupported_shape";
    case ErrorCode::usage_error: return "usage_error";
  }
  return "unknown";
}

Truncation::Truncation(int na, int nb) : n_a(na), n_b(nb) {
  if (na < 1 || nb < 2) {
    throw Error(ErrorCode::invalid_argument,
                "truncation requires n_a >= 1 and n_b >= 2, got (" + std::to_string(na) + ", " +
                    std::to_string(nb) + ")");
  }
}

Operator::Operator(Truncation t, CMatrix m) : dims(t), data(std::move(m)) {
  const auto d = static_cast<Eigen::Index>(dims.dim());
  if (data.rows() != d || data.cols() != d) {
    throw Error(ErrorCode::dimension_mismatch, "operator matrix does not match truncation");
  }
}

namespace {
void require_same_dims(const Operator& lhs, const Operator& rhs) {
  if (!(lhs.dims == rhs.dims)) {
    throw Error(ErrorCode::dimension_mismatch, "operators act on different truncations");
  }
}
}  // namespace

Operator operator*(const Operator& lhs, const Operator& rhs) {
  require_same_dims(lhs, rhs);
  return {lhs.dims, lhs.data * rhs.data};
}

Operator operator+(const Operator& lhs, const Operator& rhs) {
  require_same_dims(lhs, rhs);
  return {lhs.dims, lhs.data + rhs.data};
}

Operator operator-(const Operator& lhs, const Operator& rhs) {
  require_same_dims(lhs, rhs);
  return {lhs.dims, lhs.data - rhs.data};
}

Operator operator*(cplx s, const Operator& op) { return {op.dims, s * op.data}; }

Operator identity(Truncation dims) {
  const auto d = static_cast<Eigen::Index>(dims.dim());
  return {dims, CMatrix::Identity(d, d)};
}

CMatrix annihilation(int levels) {
  CMatrix c = CMatrix::Zero(levels, levels);
  for (int m = 1; m < levels; ++m) c(m - 1, m) = std::sqrt(static_cast<double>(m));
  return c;
}

Operator ladder(Truncation dims, Mode which) {
  if (which == Mode::cavity) {
    return {dims, kron(annihilation(dims.n_a), CMatrix::Identity(dims.n_b, dims.n_b))};
  }
  return {dims, kron(CMatrix::Identity(dims.n_a, dims.n_a), annihilation(dims.n_b))};
}

CMatrix kron(const CMatrix& lhs, const CMatrix& rhs) {
  const Eigen::Index r = rhs.rows();
  const Eigen::Index c = rhs.cols();
  CMatrix out(lhs.rows() * r, lhs.cols() * c);
  for (Eigen::Index i = 0; i < lhs.rows(); ++i) {
    for (Eigen::Index j = 0; j < lhs.cols(); ++j) {
      out.block(i * r, j * c, r, c) = lhs(i, j) * rhs;
    }
  }
  return out;
}

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double hermiticity_defect(const CMatrix& m) { return max_abs(m - m.adjoint()); }

EigenSystem eig_hermitian(const CMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::dimension_mismatch, "eig_hermitian needs a square matrix");
  const double defect = hermiticity_defect(m);
  if (defect > 1e-10) {
    throw Error(ErrorCode::not_hermitian, "max |A - A^dagger| = " + std::to_string(defect));
  }
  const CMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::non_convergence, "Hermitian eigensolver failed");
  }

  const Eigen::Index n = m.rows();
  CMatrix vecs = solver.eigenvectors();
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index big = 0;
    vecs.col(k).cwiseAbs().maxCoeff(&big);
    const cplx phase = std::conj(vecs(big, k)) / std::abs(vecs(big, k));
    vecs.col(k) *= phase;
  }

  const RVector& vals = solver.eigenvalues();
  const double scale = std::max(1.0, vals.cwiseAbs().maxCoeff());
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index p, Eigen::Index q) {
    if (std::abs(vals(p) - vals(q)) > 1e-12 * scale) return vals(p) < vals(q);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double vp = vecs(i, p).real();
      const double vq = vecs(i, q).real();
      if (std::abs(vp - vq) > 1e-12) return vp < vq;
    }
    return false;
  });

  EigenSystem out{RVector(n), CMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = vals(order[static_cast<std::size_t>(k)]);
    out.vectors.col(k) = vecs.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

CVector solve_linear(const CMatrix& a, const CVector& rhs) {
  if (a.rows() != a.cols() || a.rows() != rhs.size()) {
    throw Error(ErrorCode::dimension_mismatch, "solve_linear needs square A and matching rhs");
  }
  Eigen::PartialPivLU<CMatrix> lu(a);
  const CVector x = lu.solve(rhs);
  if (!x.allFinite()) throw Error(ErrorCode::singular_system, "LU produced non-finite solution");
  const double residual = (a * x - rhs).norm();
  const double bound = 1e-10 * (a.norm() * x.norm() + rhs.norm());
  if (!(residual <= bound)) {
    throw Error(ErrorCode::singular_system,
                "residual " + std::to_string(residual) + " exceeds bound " + std::to_string(bound));
  }
  return x;
}

DensityMatrix::DensityMatrix(Truncation dims, CMatrix data) : dims_(dims), data_(std::move(data)) {
  const auto d = static_cast<Eigen::Index>(dims_.dim());
  if (data_.rows() != d || data_.cols() != d) {
    throw Error(ErrorCode::dimension_mismatch, "density matrix does not match truncation");
  }
  const double defect = hermiticity_defect(data_);
  if (defect > 1e-10) {
    throw Error(ErrorCode::not_hermitian, "density matrix Hermiticity defect " + std::to_string(defect));
  }
  const cplx tr = data_.trace();
  if (std::abs(tr - 1.0) > 1e-10) {
    throw Error(ErrorCode::invalid_argument, "density matrix trace " + std::to_string(tr.real()));
  }
}

DensityMatrix DensityMatrix::fock(Truncation dims, int photons, int phonons) {
  if (photons < 0 || photons >= dims.n_a || phonons < 0 || phonons >= dims.n_b) {
    throw Error(ErrorCode::invalid_argument, "Fock state outside truncation");
  }
  const auto d = static_cast<Eigen::Index>(dims.dim());
  CMatrix rho = CMatrix::Zero(d, d);
  rho(dims.index(photons, phonons), dims.index(photons, phonons)) = 1.0;
  return {dims, std::move(rho)};
}

double DensityMatrix::min_eigenvalue() const { return eig_hermitian(data_).values(0); }

std::vector<std::vector<double>> DensityMatrix::populations() const {
  std::vector<std::vector<double>> pops(static_cast<std::size_t>(dims_.n_a),
                                        std::vector<double>(static_cast<std::size_t>(dims_.n_b)));
  for (int n = 0; n < dims_.n_a; ++n) {
    for (int m = 0; m < dims_.n_b; ++m) {
      double p = data_(dims_.index(n, m), dims_.index(n, m)).real();
      if (p < 0.0 && p > -1e-10) p = 0.0;
      pops[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)] = p;
    }
  }
  return pops;
}

}  // namespace phonon
