#pragma once

// Morozova-Chentsov functions c(x, y) = 1 / (y f(x/y)) and the monotone
// metric forms they induce on strictly positive density matrices.

#include <vector>

#include "omf/eval.hpp"
#include "omf/expr.hpp"
#include "omf/linalg.hpp"
#include "omf/report.hpp"

namespace omf {

/// 1 / (y e(x/y)) for x, y > 0.
double mc_function(const FunctionExpr& e, double x, double y, const EvalConfig& cfg = {});

struct MetricOptions {
  double min_eigenvalue = 1e-3;  // strictly positive states only
  double traceless_tol = 1e-10;
  double normalization_tol = 1e-10;
  /// Use e / e(1) when e(1) != 1 instead of rejecting e.
  bool normalize = false;
  GridSpec grid{};  // for the symmetry check of e
};

class MetricContext {
 public:
  /// Validates e (h(t) = t h(1/t) by symmetry_test, e(1) = 1) and
  /// diagonalizes rho.
  static MetricContext create(const FunctionExpr& e, const DensityMatrix& rho,
                              const MetricOptions& opt = {});

  const FunctionExpr& function() const { return e_; }
  const std::vector<double>& eigenvalues() const { return eig_.values; }
  const ComplexMatrix& eigenvectors() const { return eig_.vectors; }
  double scale() const { return scale_; }
  std::size_t dim() const { return eig_.values.size(); }
  const VerificationReport& symmetry_report() const { return symmetry_; }
  const MetricOptions& options() const { return opt_; }

  /// c(lambda_i, lambda_j), already normalized.
  double kernel(std::size_t i, std::size_t j) const { return kernel_[i * dim() + j]; }

 private:
  MetricContext() = default;

  FunctionExpr e_ = make_identity();
  HermitianEigen eig_;
  double scale_ = 1.0;
  std::vector<double> kernel_;
  VerificationReport symmetry_;
  MetricOptions opt_;
};

/// K(A, B) = sum_ij conj(A^_ij) B^_ij c(lambda_i, lambda_j), A^ = U* A U.
double metric_form(const MetricContext& ctx, const HermitianMatrix& a, const HermitianMatrix& b);

}  // namespace omf
