#pragma once

#include <complex>
#include <span>
#include <vector>

#include "omf/config.hpp"
#include "omf/expr.hpp"
#include "omf/linalg.hpp"

namespace omf {

/// e(t) for t in e's domain; removable singularities evaluate to their limit.
double eval_real(const FunctionExpr& e, double t, const EvalConfig& cfg = {});

/// Analytic continuation to Im z > 0 with principal branches.
std::complex<double> eval_complex(const FunctionExpr& e, std::complex<double> z,
                                  const EvalConfig& cfg = {});

/// e'(t) by complex step, Im e(t + ih)/h with h = complex_step * max(1, |t|).
double eval_derivative(const FunctionExpr& e, double t, const EvalConfig& cfg = {});

/// Divided difference (e(x) - e(y))/(x - y), e'(x) when x == y, propagated
/// through the tree without subtracting nearby function values.
double eval_divided(const FunctionExpr& e, double x, double y, const EvalConfig& cfg = {});

/// Taylor coefficients e^(k)(t)/k!, k = 0..8, at an interior point.
std::vector<double> eval_taylor(const FunctionExpr& e, double t, const EvalConfig& cfg = {});

/// f(A) = U diag(f(lambda)) U*.
SymmetricMatrix eval_matrix(const FunctionExpr& e, const SymmetricMatrix& a,
                            const EvalConfig& cfg = {});
HermitianMatrix eval_matrix(const FunctionExpr& e, const HermitianMatrix& a,
                            const EvalConfig& cfg = {});

/// e(t) for every t, in order.
std::vector<double> eval_real_batch(const FunctionExpr& e, std::span<const double> ts,
                                    const EvalConfig& cfg = {},
                                    ExecPolicy policy = ExecPolicy::parallel);

/// Removable singularities of e on (0, inf), ascending, deduplicated.
std::vector<double> singular_points(const FunctionExpr& e);

/// e's value at t = 0 and right derivative there (+inf allowed, NaN when
/// unknown), obtained structurally.
struct OriginBehavior {
  double value;
  double slope;
};
OriginBehavior origin_behavior(const FunctionExpr& e);

}  // namespace omf
