#include "omf/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <type_traits>

#include "omf/errors.hpp"

namespace omf {

namespace {

template <class S>
DenseMatrix<S> multiply(const DenseMatrix<S>& a, const DenseMatrix<S>& b) {
  if (a.cols() != b.rows()) throw Error("matrix product: dimension mismatch");
  DenseMatrix<S> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const S aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

template <class S>
double fro(const DenseMatrix<S>& a) {
  double s = 0.0;
  for (const S& v : a.data()) s += std::norm(v);
  return std::sqrt(s);
}

double conj_if(double v) { return v; }
cplx conj_if(cplx v) { return std::conj(v); }
double real_diag(double v) { return v; }
cplx real_diag(cplx v) { return {v.real(), 0.0}; }

}  // namespace

Matrix operator*(const Matrix& a, const Matrix& b) { return multiply(a, b); }
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return multiply(a, b); }

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = std::conj(a(i, j));
  return t;
}

double frobenius_norm(const Matrix& a) { return fro(a); }
double frobenius_norm(const ComplexMatrix& a) { return fro(a); }

// --- packed storage ----------------------------------------------------------

template <class S>
PackedSelfAdjoint<S> PackedSelfAdjoint<S>::from_upper(const DenseMatrix<S>& m) {
  if (m.rows() != m.cols()) throw Error("self-adjoint matrix must be square");
  PackedSelfAdjoint p(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j) p.set(i, j, m(i, j));
  return p;
}

template <class S>
PackedSelfAdjoint<S> PackedSelfAdjoint<S>::from_dense(const DenseMatrix<S>& m) {
  if (m.rows() != m.cols()) throw Error("self-adjoint matrix must be square");
  PackedSelfAdjoint p(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j) p.set(i, j, 0.5 * (m(i, j) + conj_if(m(j, i))));
  return p;
}

template <class S>
PackedSelfAdjoint<S> PackedSelfAdjoint<S>::diagonal(const std::vector<double>& d) {
  PackedSelfAdjoint p(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) p.set(i, i, S(d[i]));
  return p;
}

template <class S>
S PackedSelfAdjoint<S>::get(std::size_t i, std::size_t j) const {
  if (i <= j) return a_[index(i, j)];
  return conj_if(a_[index(j, i)]);
}

template <class S>
void PackedSelfAdjoint<S>::set(std::size_t i, std::size_t j, S v) {
  if (i == j) {
    a_[index(i, i)] = real_diag(v);
  } else if (i < j) {
    a_[index(i, j)] = v;
  } else {
    a_[index(j, i)] = conj_if(v);
  }
}

template <class S>
DenseMatrix<S> PackedSelfAdjoint<S>::dense() const {
  DenseMatrix<S> m(n_, n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) m(i, j) = get(i, j);
  return m;
}

template <class S>
double PackedSelfAdjoint<S>::frobenius_norm() const {
  double s = 0.0;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i; j < n_; ++j) s += (i == j ? 1.0 : 2.0) * std::norm(a_[index(i, j)]);
  return std::sqrt(s);
}

template <class S>
S PackedSelfAdjoint<S>::trace() const {
  S t{};
  for (std::size_t i = 0; i < n_; ++i) t += a_[index(i, i)];
  return t;
}

template class PackedSelfAdjoint<double>;
template class PackedSelfAdjoint<cplx>;

template <class S>
static PackedSelfAdjoint<S> subtract(const PackedSelfAdjoint<S>& a, const PackedSelfAdjoint<S>& b) {
  if (a.dim() != b.dim()) throw Error("matrix difference: dimension mismatch");
  PackedSelfAdjoint<S> c(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = i; j < a.dim(); ++j) c.set(i, j, a.get(i, j) - b.get(i, j));
  return c;
}

SymmetricMatrix operator-(const SymmetricMatrix& a, const SymmetricMatrix& b) {
  return subtract(a, b);
}
HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
  return subtract(a, b);
}

// --- Jacobi ------------------------------------------------------------------

SymmetricEigen eigh(const SymmetricMatrix& sym, const JacobiOptions& opt) {
  const std::size_t n = sym.dim();
  Matrix a = sym.dense();
  Matrix v = Matrix::identity(n);
  const double norm = sym.frobenius_norm();

  auto off_mass = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  int sweep = 0;
  for (;; ++sweep) {
    const double off = off_mass();
    if (off <= opt.rel_tol * norm || off == 0.0) break;
    if (sweep >= opt.max_sweeps)
      throw NumericalError("Jacobi eigensolver did not converge in " +
                           std::to_string(opt.max_sweeps) + " sweeps");
    // Skip rotations on entries already small relative to the remaining
    // off-diagonal mass during the first sweeps.
    const double threshold = sweep < 3 ? 0.2 * off / static_cast<double>(n * n) : 0.0;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= threshold || apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::hypot(1.0, theta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a(r, p), arq = a(r, q);
          a(r, p) = a(p, r) = arp - s * (arq + tau * arp);
          a(r, q) = a(q, r) = arq + s * (arp - tau * arq);
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double vrp = v(r, p), vrq = v(r, q);
          v(r, p) = vrp - s * (vrq + tau * vrp);
          v(r, q) = vrq + s * (vrp - tau * vrq);
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  SymmetricEigen out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

SymmetricMatrix real_embedding(const HermitianMatrix& h) {
  const std::size_t d = h.dim();
  SymmetricMatrix m(2 * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      const cplx z = h.get(i, j);
      m.set(i, j, z.real());
      m.set(d + i, d + j, z.real());
      // lower-left block Y, upper-right block -Y
      m.set(i, d + j, -z.imag());
      m.set(j, d + i, z.imag());
    }
  return m;
}

HermitianMatrix from_real_embedding(const SymmetricMatrix& m) {
  const std::size_t d = m.dim() / 2;
  HermitianMatrix h(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) h.set(i, j, {m.get(i, j), m.get(d + i, j)});
  return h;
}

HermitianEigen eigh(const HermitianMatrix& h, const JacobiOptions& opt) {
  const std::size_t d = h.dim();
  const SymmetricEigen e = eigh(real_embedding(h), opt);
  const ComplexMatrix hd = h.dense();

  // Each eigenvalue appears twice; the pair [u; v], [-v; u] maps to w and i w.
  // Complex Gram-Schmidt in ascending order keeps one vector per pair.
  HermitianEigen out;
  out.vectors = ComplexMatrix(d, d);
  std::size_t found = 0;
  for (std::size_t k = 0; k < 2 * d && found < d; ++k) {
    std::vector<cplx> w(d);
    for (std::size_t r = 0; r < d; ++r) w[r] = {e.vectors(r, k), e.vectors(d + r, k)};
    for (std::size_t c = 0; c < found; ++c) {
      cplx dot{};
      for (std::size_t r = 0; r < d; ++r) dot += std::conj(out.vectors(r, c)) * w[r];
      for (std::size_t r = 0; r < d; ++r) w[r] -= dot * out.vectors(r, c);
    }
    double nrm = 0.0;
    for (const cplx& z : w) nrm += std::norm(z);
    nrm = std::sqrt(nrm);
    if (nrm < 0.5) continue;
    for (std::size_t r = 0; r < d; ++r) out.vectors(r, found) = w[r] / nrm;
    ++found;
  }
  if (found < d) throw NumericalError("Hermitian eigenvector extraction failed");

  out.values.resize(d);
  for (std::size_t c = 0; c < d; ++c) {
    cplx rq{};
    for (std::size_t i = 0; i < d; ++i) {
      cplx hw{};
      for (std::size_t j = 0; j < d; ++j) hw += hd(i, j) * out.vectors(j, c);
      rq += std::conj(out.vectors(i, c)) * hw;
    }
    out.values[c] = rq.real();
  }
  return out;
}

double min_eigenvalue(const SymmetricMatrix& a) {
  if (a.dim() == 0) return 0.0;
  return eigh(a).values.front();
}

double min_eigenvalue(const HermitianMatrix& a) {
  if (a.dim() == 0) return 0.0;
  return eigh(real_embedding(a)).values.front();
}

DensityMatrix::DensityMatrix(HermitianMatrix rho) : rho_(std::move(rho)) {
  if (rho_.dim() == 0) throw DomainError("density matrix must be non-empty");
  const double tr = rho_.trace().real();
  if (std::abs(tr - 1.0) > trace_tol)
    throw DomainError("density matrix trace is " + std::to_string(tr) + ", expected 1");
  const double lo = min_eigenvalue(rho_);
  if (lo < -psd_tol)
    throw DomainError("density matrix is not positive semidefinite (min eigenvalue " +
                      std::to_string(lo) + ")");
}

}  // namespace omf
