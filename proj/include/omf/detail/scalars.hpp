#pragma once

// Scalar types the evaluator is instantiated with besides double and
// std::complex<double>:
//
//   Jet          truncated Taylor series in (t - t0), real coefficients.
//   DividedPair  a function evaluated at two abscissae together with the
//                divided difference between them, propagated without
//                forming the cancelling difference f(x) - f(y).

#include <array>
#include <cmath>
#include <cstddef>

namespace omf::detail {

inline constexpr std::size_t jet_order = 8;

struct Jet {
  std::array<double, jet_order + 1> c{};

  static Jet constant(double v) {
    Jet j;
    j.c[0] = v;
    return j;
  }
  static Jet variable(double t0) {
    Jet j;
    j.c[0] = t0;
    j.c[1] = 1.0;
    return j;
  }
  double value() const { return c[0]; }
};

inline Jet operator+(Jet a, const Jet& b) {
  for (std::size_t k = 0; k <= jet_order; ++k) a.c[k] += b.c[k];
  return a;
}
inline Jet operator-(Jet a, const Jet& b) {
  for (std::size_t k = 0; k <= jet_order; ++k) a.c[k] -= b.c[k];
  return a;
}
inline Jet operator-(Jet a) {
  for (auto& v : a.c) v = -v;
  return a;
}
inline Jet operator+(Jet a, double s) {
  a.c[0] += s;
  return a;
}
inline Jet operator-(Jet a, double s) {
  a.c[0] -= s;
  return a;
}
inline Jet operator-(double s, const Jet& a) { return (-a) + s; }
inline Jet operator+(double s, const Jet& a) { return a + s; }
inline Jet operator*(Jet a, double s) {
  for (auto& v : a.c) v *= s;
  return a;
}
inline Jet operator*(double s, const Jet& a) { return a * s; }

inline Jet operator*(const Jet& a, const Jet& b) {
  Jet r;
  for (std::size_t k = 0; k <= jet_order; ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j <= k; ++j) s += a.c[j] * b.c[k - j];
    r.c[k] = s;
  }
  return r;
}

inline Jet operator/(const Jet& a, const Jet& b) {
  Jet q;
  for (std::size_t k = 0; k <= jet_order; ++k) {
    double s = a.c[k];
    for (std::size_t j = 1; j <= k; ++j) s -= b.c[j] * q.c[k - j];
    q.c[k] = s / b.c[0];
  }
  return q;
}
inline Jet operator/(const Jet& a, double s) { return a * (1.0 / s); }
inline Jet operator/(double s, const Jet& a) { return Jet::constant(s) / a; }

inline Jet log(const Jet& a) {
  Jet l;
  l.c[0] = std::log(a.c[0]);
  for (std::size_t k = 1; k <= jet_order; ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j < k; ++j) s += static_cast<double>(j) * l.c[j] * a.c[k - j];
    l.c[k] = (a.c[k] - s / static_cast<double>(k)) / a.c[0];
  }
  return l;
}

inline Jet pow(const Jet& a, double p) {
  Jet b;
  b.c[0] = std::pow(a.c[0], p);
  for (std::size_t k = 1; k <= jet_order; ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j <= k; ++j)
      s += (p * static_cast<double>(j) - static_cast<double>(k - j)) * a.c[j] * b.c[k - j];
    b.c[k] = s / (static_cast<double>(k) * a.c[0]);
  }
  return b;
}

inline bool isfinite(const Jet& a) {
  for (double v : a.c)
    if (!std::isfinite(v)) return false;
  return true;
}

// ---------------------------------------------------------------------------

struct DividedPair {
  double first = 0.0;   // f(x)
  double second = 0.0;  // f(y)
  double diff = 0.0;    // f[x, y]; f'(x) when x == y
  // Sum of the magnitudes that went into diff; rounding error in diff is a
  // small multiple of eps * mag.
  double mag = 0.0;

  static DividedPair constant(double v) { return {v, v, 0.0, 0.0}; }
  static DividedPair variable(double x, double y) { return {x, y, 1.0, 1.0}; }
};

inline DividedPair operator+(const DividedPair& a, const DividedPair& b) {
  return {a.first + b.first, a.second + b.second, a.diff + b.diff, a.mag + b.mag};
}
inline DividedPair operator-(const DividedPair& a, const DividedPair& b) {
  return {a.first - b.first, a.second - b.second, a.diff - b.diff, a.mag + b.mag};
}
inline DividedPair operator-(const DividedPair& a) { return {-a.first, -a.second, -a.diff, a.mag}; }
inline DividedPair operator+(const DividedPair& a, double s) {
  return {a.first + s, a.second + s, a.diff, a.mag};
}
inline DividedPair operator+(double s, const DividedPair& a) { return a + s; }
inline DividedPair operator-(const DividedPair& a, double s) {
  return {a.first - s, a.second - s, a.diff, a.mag};
}
inline DividedPair operator-(double s, const DividedPair& a) { return (-a) + s; }
inline DividedPair operator*(const DividedPair& a, double s) {
  return {a.first * s, a.second * s, a.diff * s, a.mag * std::abs(s)};
}
inline DividedPair operator*(double s, const DividedPair& a) { return a * s; }

inline DividedPair operator*(const DividedPair& a, const DividedPair& b) {
  return {a.first * b.first, a.second * b.second, a.diff * b.first + a.second * b.diff,
          a.mag * std::abs(b.first) + std::abs(a.second) * b.mag};
}
inline DividedPair operator/(const DividedPair& a, const DividedPair& b) {
  const double den = b.first * b.second;
  return {a.first / b.first, a.second / b.second, (a.diff * b.second - a.second * b.diff) / den,
          (a.mag * std::abs(b.second) + std::abs(a.second) * b.mag) / std::abs(den)};
}
inline DividedPair operator/(const DividedPair& a, double s) { return a * (1.0 / s); }
inline DividedPair operator/(double s, const DividedPair& a) {
  return DividedPair::constant(s) / a;
}

/// Divided difference of u -> u^p between u and v (both > 0).
inline double pow_divided(double u, double v, double p) {
  if (u == v) return p * std::pow(u, p - 1.0);
  if (v == 0.0 || u == 0.0) return (std::pow(u, p) - std::pow(v, p)) / (u - v);
  return std::pow(v, p) * std::expm1(p * std::log1p((u - v) / v)) / (u - v);
}

/// Divided difference of log between u and v (both > 0).
inline double log_divided(double u, double v) {
  if (u == v) return 1.0 / u;
  return std::log1p((u - v) / v) / (u - v);
}

inline DividedPair pow(const DividedPair& a, double p) {
  const double g = pow_divided(a.first, a.second, p);
  return {std::pow(a.first, p), std::pow(a.second, p), g * a.diff, std::abs(g) * a.mag};
}

inline DividedPair log(const DividedPair& a) {
  const double g = log_divided(a.first, a.second);
  return {std::log(a.first), std::log(a.second), g * a.diff, std::abs(g) * a.mag};
}

inline bool isfinite(const DividedPair& a) {
  return std::isfinite(a.first) && std::isfinite(a.second) && std::isfinite(a.diff);
}

}  // namespace omf::detail
