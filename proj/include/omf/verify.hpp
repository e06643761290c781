#pragma once

// Numerical certification and refutation of operator monotonicity.
//
// Every test is deterministic given its GridSpec: random draws come from
// per-sample streams keyed by (seed, test, sample index), and worst cases
// are reduced in index order, so serial and parallel runs agree exactly.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "omf/expr.hpp"
#include "omf/linalg.hpp"
#include "omf/report.hpp"

namespace omf {

/// A point of the upper half-plane with the image e(z) and arg e(z).
struct ComplexSample {
  std::complex<double> z;
  std::complex<double> w;
  double arg = 0.0;
};

/// Log-spaced real grid on [t_min, t_max].
std::vector<double> real_grid(const GridSpec& spec);
/// Moduli log-spaced on [r_min, r_max] times arguments pi (j + 1/2) / N.
std::vector<std::complex<double>> half_plane_grid(const GridSpec& spec);
/// e evaluated on the half-plane grid; failures are left out.
std::vector<ComplexSample> sample_half_plane(const FunctionExpr& e, const GridSpec& spec);

/// L_ij = e[x_i, x_j], L_ii = e'(x_i).
Matrix loewner_matrix(const FunctionExpr& e, std::span<const double> points,
                      const EvalConfig& cfg = {});

/// min eigenvalue of the Loewner matrix over random point sets,
/// normalized by max(||L||_F, 1e-6 max_i |f(x_i)|/x_i); pass iff >= -tol.
VerificationReport loewner_test(const FunctionExpr& e, const GridSpec& spec = {});
/// 0 < arg e(z) < pi on the half-plane grid.
VerificationReport pick_test(const FunctionExpr& e, const GridSpec& spec = {});
/// 0 < arg e(z) <= arg z on the half-plane grid.
VerificationReport arg_dominance_test(const FunctionExpr& e, const GridSpec& spec = {});
/// f(A) <= f(B) for random A <= B.
VerificationReport matrix_monotone_test(const FunctionExpr& e, const GridSpec& spec = {});
/// |e(t) - t e(1/t)| <= symmetry_tol (1 + |e(t)|) on the real grid.
VerificationReport symmetry_test(const FunctionExpr& e, const GridSpec& spec = {});
/// arg z < arg(z - l) < (pi + (n-1) arg z)/n for 0 < l <= |z|/(n-1), plus
/// the sharpness of the bound on l.
VerificationReport lemma3_check(int n, std::size_t theta_count, std::size_t l_count);
/// Conjunction of the Loewner, Pick and matrix tests, plus the functional
/// equation when the expression claims it.
VerificationReport certify(const FunctionExpr& e, const GridSpec& spec = {});

/// Independent random stream for sample `index` of test `tag`.
std::uint64_t sample_seed(std::uint64_t seed, std::string_view tag, std::uint64_t index);

}  // namespace omf
