#pragma once

// Seeded generators and small helpers shared by the tests.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "omf/expr.hpp"
#include "omf/linalg.hpp"

namespace omf::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline double log_uniform(Rng& g, double lo, double hi) {
  return std::exp(uniform(g, std::log(lo), std::log(hi)));
}

inline int uniform_int(Rng& g, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(g);
}

inline double normal(Rng& g) { return std::normal_distribution<double>(0.0, 1.0)(g); }

inline std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i)
    t[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1));
  return t;
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

/// f0 in [0,2], beta in [0,2], 0..5 atoms with lambda in [1e-3,1e3] and
/// weight in [1e-2,10], both log-uniform.
inline PickRepresentation random_pick(Rng& g) {
  PickRepresentation rep;
  rep.f0 = uniform(g, 0.0, 2.0);
  rep.beta = uniform(g, 0.0, 2.0);
  const int atoms = uniform_int(g, 0, 5);
  for (int k = 0; k < atoms; ++k)
    rep.atoms.push_back({log_uniform(g, 1e-3, 1e3), log_uniform(g, 1e-2, 10.0)});
  if (rep.atoms.empty() && rep.beta == 0.0 && rep.f0 == 0.0) rep.beta = 1.0;
  return rep;
}

/// Direct formula f0 + beta t + sum w lambda t / (t + lambda).
inline double pick_oracle(const PickRepresentation& rep, double t) {
  double v = rep.f0 + rep.beta * t;
  for (const auto& a : rep.atoms) v += a.weight * a.lambda * t / (t + a.lambda);
  return v;
}

/// Haar-ish orthogonal matrix by Gram-Schmidt on a Gaussian matrix.
inline Matrix random_orthogonal(Rng& g, std::size_t n) {
  Matrix q(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> v(n);
    for (auto& x : v) x = normal(g);
    for (std::size_t k = 0; k < j; ++k) {
      double d = 0.0;
      for (std::size_t i = 0; i < n; ++i) d += q(i, k) * v[i];
      for (std::size_t i = 0; i < n; ++i) v[i] -= d * q(i, k);
    }
    double nrm = 0.0;
    for (double x : v) nrm += x * x;
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i < n; ++i) q(i, j) = v[i] / nrm;
  }
  return q;
}

inline ComplexMatrix random_unitary(Rng& g, std::size_t n) {
  ComplexMatrix q(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<cplx> v(n);
    for (auto& x : v) x = {normal(g), normal(g)};
    for (std::size_t k = 0; k < j; ++k) {
      cplx d = 0.0;
      for (std::size_t i = 0; i < n; ++i) d += std::conj(q(i, k)) * v[i];
      for (std::size_t i = 0; i < n; ++i) v[i] -= d * q(i, k);
    }
    double nrm = 0.0;
    for (const auto& x : v) nrm += std::norm(x);
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i < n; ++i) q(i, j) = v[i] / nrm;
  }
  return q;
}

inline ComplexMatrix to_complex(const Matrix& m) {
  ComplexMatrix c(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) c(i, j) = m(i, j);
  return c;
}

/// Q diag(spectrum) Q^T.
inline SymmetricMatrix conjugate_diagonal(const Matrix& q, const std::vector<double>& spectrum) {
  const std::size_t n = spectrum.size();
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) d(i, i) = spectrum[i];
  return SymmetricMatrix::from_dense(q * d * transpose(q));
}

inline HermitianMatrix conjugate_diagonal(const ComplexMatrix& u, const std::vector<double>& spectrum) {
  const std::size_t n = spectrum.size();
  ComplexMatrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) d(i, i) = spectrum[i];
  return HermitianMatrix::from_dense(u * d * adjoint(u));
}

inline HermitianMatrix conjugate(const ComplexMatrix& u, const HermitianMatrix& a) {
  return HermitianMatrix::from_dense(u * a.dense() * adjoint(u));
}

inline SymmetricMatrix random_symmetric(Rng& g, std::size_t n) {
  SymmetricMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a.set(i, j, normal(g));
  return a;
}

inline HermitianMatrix random_hermitian(Rng& g, std::size_t n) {
  HermitianMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a.set(i, j, i == j ? cplx(normal(g), 0.0) : cplx(normal(g), normal(g)));
  return a;
}

inline HermitianMatrix random_traceless(Rng& g, std::size_t n) {
  HermitianMatrix a = random_hermitian(g, n);
  const double shift = a.trace().real() / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) a.set(i, i, a.get(i, i) - shift);
  return a;
}

/// Spectrum with entries >= floor summing to one.
inline std::vector<double> random_probabilities(Rng& g, std::size_t n, double floor) {
  std::vector<double> p(n);
  double s = 0.0;
  for (auto& x : p) s += (x = uniform(g, 0.0, 1.0));
  for (auto& x : p) x = floor + (1.0 - n * floor) * x / s;
  return p;
}

inline DensityMatrix random_state(Rng& g, std::size_t n, double floor = 0.02) {
  return DensityMatrix(conjugate_diagonal(random_unitary(g, n), random_probabilities(g, n, floor)));
}

}  // namespace omf::testing
