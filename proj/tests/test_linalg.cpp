#include <cmath>

#include "doctest.h"
#include "omf/errors.hpp"
#include "omf/linalg.hpp"
#include "support.hpp"

#ifdef OMF_HAVE_EIGEN
#include <Eigen/Dense>
#endif

using namespace omf;
using namespace omf::testing;

namespace {

double max_abs_diff(const Matrix& a, const Matrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

}  // namespace

TEST_CASE("packed storage keeps exact symmetry") {
  SymmetricMatrix a(3);
  a.set(0, 2, 5.0);
  CHECK(a.get(2, 0) == 5.0);
  a.set(2, 1, -1.5);
  CHECK(a.get(1, 2) == -1.5);

  HermitianMatrix h(2);
  h.set(0, 1, cplx(1.0, 2.0));
  CHECK(h.get(1, 0) == cplx(1.0, -2.0));
  h.set(1, 1, cplx(3.0, 0.5));
  CHECK(h.get(1, 1).imag() == 0.0);
}

TEST_CASE("eigh of a 2x2 by hand") {
  SymmetricMatrix a(2);
  a.set(0, 0, 2.0);
  a.set(0, 1, 1.0);
  a.set(1, 1, 2.0);
  const auto e = eigh(a);
  CHECK(e.values[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(e.values[1] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(std::abs(std::abs(e.vectors(0, 1)) - std::sqrt(0.5)) < 1e-14);
}

TEST_CASE("eigh reconstructs random symmetric matrices") {
  Rng g(1);
  for (std::size_t n = 1; n <= 12; ++n) {
    const SymmetricMatrix a = random_symmetric(g, n);
    const auto e = eigh(a);
    CHECK(std::is_sorted(e.values.begin(), e.values.end()));
    Matrix d(n, n);
    for (std::size_t i = 0; i < n; ++i) d(i, i) = e.values[i];
    const Matrix back = e.vectors * d * transpose(e.vectors);
    CHECK(max_abs_diff(back, a.dense()) <= 1e-12 * (1.0 + a.frobenius_norm()));
    CHECK(max_abs_diff(transpose(e.vectors) * e.vectors, Matrix::identity(n)) <= 1e-12);
  }
}

TEST_CASE("eigh reconstructs random Hermitian matrices") {
  Rng g(2);
  for (std::size_t n = 1; n <= 8; ++n) {
    const HermitianMatrix a = random_hermitian(g, n);
    const auto e = eigh(a);
    CHECK(e.values.size() == n);
    ComplexMatrix d(n, n);
    for (std::size_t i = 0; i < n; ++i) d(i, i) = e.values[i];
    const ComplexMatrix back = e.vectors * d * adjoint(e.vectors);
    CHECK(max_abs_diff(back, a.dense()) <= 1e-11 * (1.0 + a.frobenius_norm()));
    CHECK(max_abs_diff(adjoint(e.vectors) * e.vectors, ComplexMatrix::identity(n)) <= 1e-11);
  }
}

TEST_CASE("Hermitian eigh handles repeated eigenvalues") {
  Rng g(3);
  const ComplexMatrix u = random_unitary(g, 4);
  const HermitianMatrix a = conjugate_diagonal(u, {1.0, 1.0, 2.0, 2.0});
  const auto e = eigh(a);
  CHECK(e.values[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.values[3] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(max_abs_diff(adjoint(e.vectors) * e.vectors, ComplexMatrix::identity(4)) <= 1e-11);
}

#ifdef OMF_HAVE_EIGEN
TEST_CASE("eigenvalues agree with Eigen") {
  Rng g(4);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = static_cast<std::size_t>(uniform_int(g, 1, 16));
    const SymmetricMatrix a = random_symmetric(g, n);
    Eigen::MatrixXd m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = a.get(i, j);
    const Eigen::VectorXd want = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues();
    const auto got = eigh(a).values;
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(got[i] - want[i]) <= 1e-12 * (1.0 + m.norm()));
  }
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = static_cast<std::size_t>(uniform_int(g, 1, 8));
    const HermitianMatrix a = random_hermitian(g, n);
    Eigen::MatrixXcd m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = a.get(i, j);
    const Eigen::VectorXd want = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(m).eigenvalues();
    const auto got = eigh(a).values;
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(got[i] - want[i]) <= 1e-11 * (1.0 + m.norm()));
  }
}
#endif

TEST_CASE("sweep cap raises NumericalError") {
  Rng g(5);
  const SymmetricMatrix a = random_symmetric(g, 8);
  CHECK_THROWS_AS(eigh(a, JacobiOptions{1e-13, 1}), NumericalError);
}

TEST_CASE("real embedding round trip") {
  Rng g(6);
  const HermitianMatrix h = random_hermitian(g, 5);
  const SymmetricMatrix m = real_embedding(h);
  CHECK(m.dim() == 10);
  CHECK(from_real_embedding(m) == h);
}

TEST_CASE("min eigenvalue") {
  CHECK(min_eigenvalue(SymmetricMatrix::diagonal({3.0, -2.0, 1.0})) == doctest::Approx(-2.0));
  CHECK(min_eigenvalue(HermitianMatrix::diagonal({0.5, 4.0})) == doctest::Approx(0.5));
}

TEST_CASE("density matrix validation") {
  CHECK_NOTHROW(DensityMatrix(HermitianMatrix::diagonal({0.25, 0.75})));
  CHECK_THROWS_AS(DensityMatrix(HermitianMatrix::diagonal({0.5, 0.6})), DomainError);
  CHECK_THROWS_AS(DensityMatrix(HermitianMatrix::diagonal({1.5, -0.5})), DomainError);
  Rng g(7);
  const DensityMatrix rho = random_state(g, 4);
  CHECK(std::abs(rho.matrix().trace().real() - 1.0) <= 1e-12);
}
