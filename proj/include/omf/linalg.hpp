#pragma once

// Small dense matrices and the cyclic Jacobi eigensolver.

#include <complex>
#include <cstddef>
#include <vector>

namespace omf {

using cplx = std::complex<double>;

/// Dense row-major matrix.
template <class S>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = S(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  S& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const S& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  const std::vector<S>& data() const { return a_; }

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<S> a_;
};

using Matrix = DenseMatrix<double>;
using ComplexMatrix = DenseMatrix<cplx>;

Matrix operator*(const Matrix& a, const Matrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
Matrix transpose(const Matrix& a);
ComplexMatrix adjoint(const ComplexMatrix& a);
double frobenius_norm(const Matrix& a);
double frobenius_norm(const ComplexMatrix& a);

/// Self-adjoint matrix stored as its packed upper triangle, so symmetry is
/// exact.  Diagonal entries of the complex variant are kept real.
template <class S>
class PackedSelfAdjoint {
 public:
  PackedSelfAdjoint() = default;
  explicit PackedSelfAdjoint(std::size_t n) : n_(n), a_(n * (n + 1) / 2) {}

  /// Takes the upper triangle of a square dense matrix.
  static PackedSelfAdjoint from_upper(const DenseMatrix<S>& m);
  /// Averages m and m* (for results of floating-point products).
  static PackedSelfAdjoint from_dense(const DenseMatrix<S>& m);
  static PackedSelfAdjoint diagonal(const std::vector<double>& d);

  std::size_t dim() const { return n_; }
  S get(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, S v);
  DenseMatrix<S> dense() const;
  double frobenius_norm() const;
  S trace() const;

  bool operator==(const PackedSelfAdjoint&) const = default;

 private:
  std::size_t index(std::size_t i, std::size_t j) const { return i * n_ - i * (i + 1) / 2 + j; }
  std::size_t n_ = 0;
  std::vector<S> a_;
};

using SymmetricMatrix = PackedSelfAdjoint<double>;
using HermitianMatrix = PackedSelfAdjoint<cplx>;

SymmetricMatrix operator-(const SymmetricMatrix& a, const SymmetricMatrix& b);
HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b);

/// Eigen-decomposition with ascending eigenvalues; vectors are columns.
struct SymmetricEigen {
  std::vector<double> values;
  Matrix vectors;
};
struct HermitianEigen {
  std::vector<double> values;
  ComplexMatrix vectors;
};

struct JacobiOptions {
  double rel_tol = 1e-13;  // off-diagonal Frobenius mass relative to ||A||_F
  int max_sweeps = 100;
};

/// Cyclic Jacobi with threshold; throws NumericalError past the sweep cap.
SymmetricEigen eigh(const SymmetricMatrix& a, const JacobiOptions& opt = {});
/// Hermitian case via the real embedding [[X, -Y], [Y, X]].
HermitianEigen eigh(const HermitianMatrix& a, const JacobiOptions& opt = {});

double min_eigenvalue(const SymmetricMatrix& a);
double min_eigenvalue(const HermitianMatrix& a);

/// Real embedding [[Re H, -Im H], [Im H, Re H]] and its inverse (reads the
/// left block column).
SymmetricMatrix real_embedding(const HermitianMatrix& h);
HermitianMatrix from_real_embedding(const SymmetricMatrix& m);

/// Hermitian, positive semidefinite (eigenvalues >= -1e-12), unit trace
/// within 1e-12.
class DensityMatrix {
 public:
  explicit DensityMatrix(HermitianMatrix rho);

  const HermitianMatrix& matrix() const { return rho_; }
  std::size_t dim() const { return rho_.dim(); }

  static constexpr double psd_tol = 1e-12;
  static constexpr double trace_tol = 1e-12;

 private:
  HermitianMatrix rho_;
};

}  // namespace omf
