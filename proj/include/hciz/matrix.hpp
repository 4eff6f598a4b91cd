#pragma once

#include <Eigen/Dense>
#include <Eigen/QR>
#include <cmath>
#include <complex>
#include <utility>

#include "hciz/errors.hpp"
#include "hciz/random.hpp"

namespace hciz {

inline constexpr double kHermitianEntryTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-10;

// Dense complex Hermitian matrix. Construction validates conjugate symmetry
// entrywise (tolerance kHermitianEntryTol) and then normalizes so that
// A[i][j] == conj(A[j][i]) holds exactly and diagonal imaginary parts are
// exactly zero.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(Eigen::MatrixXcd m) : mat_(std::move(m)) {
    if (mat_.rows() != mat_.cols() || mat_.rows() < 1) {
      throw DomainError("HermitianMatrix: matrix must be square, n >= 1");
    }
    const int n = static_cast<int>(mat_.rows());
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        if (std::abs(mat_(i, j) - std::conj(mat_(j, i))) > kHermitianEntryTol) {
          throw StructuralError("HermitianMatrix: input not Hermitian");
        }
      }
    }
    for (int i = 0; i < n; ++i) {
      mat_(i, i) = std::complex<double>(mat_(i, i).real(), 0.0);
      for (int j = i + 1; j < n; ++j) {
        std::complex<double> v = 0.5 * (mat_(i, j) + std::conj(mat_(j, i)));
        mat_(i, j) = v;
        mat_(j, i) = std::conj(v);
      }
    }
  }

  static HermitianMatrix from_real(const Eigen::MatrixXd& m) {
    return HermitianMatrix(m.cast<std::complex<double>>());
  }

  static HermitianMatrix diagonal(const Eigen::VectorXd& d) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d.size(), d.size());
    for (int i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return HermitianMatrix(std::move(m));
  }

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Eigen::MatrixXcd& mat() const { return mat_; }

  HermitianMatrix leading_block(int k) const {
    return HermitianMatrix(mat_.topLeftCorner(k, k));
  }

 private:
  Eigen::MatrixXcd mat_;
};

// Dense unitary matrix; construction checks U U* = I up to kUnitaryTol in
// max-abs norm.
class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(Eigen::MatrixXcd m) : mat_(std::move(m)) {
    if (mat_.rows() != mat_.cols() || mat_.rows() < 1) {
      throw DomainError("UnitaryMatrix: matrix must be square, n >= 1");
    }
    Eigen::MatrixXcd g = mat_ * mat_.adjoint();
    g -= Eigen::MatrixXcd::Identity(mat_.rows(), mat_.cols());
    if (g.cwiseAbs().maxCoeff() > kUnitaryTol) {
      throw StructuralError("UnitaryMatrix: U U* deviates from identity");
    }
  }

  static UnitaryMatrix identity(int n) {
    return UnitaryMatrix(Eigen::MatrixXcd::Identity(n, n));
  }

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Eigen::MatrixXcd& mat() const { return mat_; }

  HermitianMatrix conjugate(const HermitianMatrix& h) const {
    return HermitianMatrix(mat_ * h.mat() * mat_.adjoint());
  }

 private:
  Eigen::MatrixXcd mat_;
};

// Eigenvalues sorted non-increasing, eigenvectors as matching unitary
// columns: input = vectors * diag(values) * vectors^*.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  UnitaryMatrix eigenvectors;
};

namespace detail {

// Column-phase convention: the first component of each eigenvector whose
// magnitude is non-negligible is made real positive, which makes the
// decomposition deterministic for a given input.
inline void fix_column_phases(Eigen::MatrixXcd& v) {
  const int n = static_cast<int>(v.rows());
  for (int j = 0; j < n; ++j) {
    int idx = 0;
    for (int i = 0; i < n; ++i) {
      if (std::abs(v(i, j)) > 1e-12) {
        idx = i;
        break;
      }
    }
    std::complex<double> p = v(idx, j);
    double ap = std::abs(p);
    if (ap > 0.0) v.col(j) *= std::conj(p) / ap;
  }
}

}  // namespace detail

// Full eigendecomposition of a Hermitian matrix, eigenvalues sorted
// non-increasing, with the phase convention above.
inline SpectralDecomposition hermitian_eigendecompose(
    const HermitianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.mat());
  if (solver.info() != Eigen::Success) {
    throw StructuralError("hermitian_eigendecompose: solver failed");
  }
  const int n = h.dim();
  Eigen::VectorXd vals(n);
  Eigen::MatrixXcd vecs(n, n);
  for (int i = 0; i < n; ++i) {
    vals[i] = solver.eigenvalues()[n - 1 - i];
    vecs.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  detail::fix_column_phases(vecs);
  return SpectralDecomposition{std::move(vals), UnitaryMatrix(std::move(vecs))};
}

// Eigenvalues only (sorted non-increasing).
inline Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m,
                                                         Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw StructuralError("hermitian_eigenvalues: solver failed");
  }
  return solver.eigenvalues().reverse();
}

// Haar-distributed random unitary: QR of a complex Gaussian matrix with the
// R-diagonal phase correction.
inline UnitaryMatrix sample_haar_unitary(int n, Rng& rng) {
  if (n < 1) throw DomainError("sample_haar_unitary: n must be >= 1");
  Eigen::MatrixXcd z(n, n);
  for (int j = 0; j < n; ++j) z.col(j) = complex_gaussian_vector(n, rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    std::complex<double> d = r(j, j);
    double ad = std::abs(d);
    q.col(j) *= (ad > 0.0) ? d / ad : 1.0;
  }
  return UnitaryMatrix(std::move(q));
}

}  // namespace hciz
