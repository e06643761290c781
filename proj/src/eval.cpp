#include "omf/eval.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <type_traits>

#include "omf/detail/format.hpp"
#include "omf/detail/scalars.hpp"
#include "omf/errors.hpp"
#include "omf/parallel.hpp"

namespace omf {

namespace {

using detail::DividedPair;
using detail::Jet;
using detail::jet_order;

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

struct Ctx {
  EvalConfig cfg;
};

template <class T>
inline constexpr bool is_jet = std::is_same_v<T, Jet>;
template <class T>
inline constexpr bool is_pair = std::is_same_v<T, DividedPair>;
template <class T>
inline constexpr bool is_complex = std::is_same_v<T, cplx>;

template <class T>
T konst(double v) {
  if constexpr (is_jet<T>) {
    return Jet::constant(v);
  } else if constexpr (is_pair<T>) {
    return DividedPair::constant(v);
  } else {
    return T(v);
  }
}

/// Principal power; 0^p follows the real limit from the right.
template <class T>
T power(const T& y, double p) {
  if (p == 0.0) return konst<T>(1.0);
  if (p == 1.0) return y;
  if constexpr (std::is_same_v<T, double>) {
    if (y == 0.0) return p > 0 ? 0.0 : inf;
    if (p == 0.5) return std::sqrt(y);
    return std::pow(y, p);
  } else if constexpr (is_complex<T>) {
    if (y == cplx{}) return p > 0 ? cplx{} : cplx{inf, 0.0};
    if (p == 0.5) return std::sqrt(y);
    return std::exp(p * std::log(y));
  } else {
    return detail::pow(y, p);
  }
}

template <class T>
T logarithm(const T& y) {
  if constexpr (std::is_same_v<T, double> || is_complex<T>) {
    return std::log(y);
  } else {
    return detail::log(y);
  }
}

template <class T>
T horner(const T& u, const Jet& c) {
  T s = konst<T>(c.c[jet_order]);
  for (std::size_t k = jet_order - 1; k >= 1; --k) s = s * u + c.c[k];
  return s;
}

template <class T>
T eval_node(const FunctionExpr& e, const T& x, const Ctx& ctx);

OriginBehavior sharp_origin(const FunctionExpr& f);

template <class Phi>
Jet taylor_at(const Phi& phi, double a) {
  Jet c = phi(Jet::variable(a));
  if (!detail::isfinite(c))
    throw DomainError("Taylor expansion at the removable singularity " +
                      detail::format_number(a) + " is not finite");
  return c;
}

/// (phi(x) - phi(a)) / (x - a), continuous through x = a.
template <class T, class Phi, class Origin>
T divided(const T& x, double a, const Phi& phi, const Origin& origin, const Ctx& ctx) {
  if (a == 0.0) {
    if constexpr (std::is_same_v<T, double>) {
      if (x == 0.0) {
        const double s = origin().slope;
        if (std::isnan(s)) throw DomainError("limit at the origin is not determinable");
        return s;
      }
    }
    const double phi0 = origin().value;
    return (phi(x) - phi0) / x;
  }
  const double r = ctx.cfg.singular_radius * a;
  if constexpr (is_pair<T>) {
    const bool n1 = std::abs(x.first - a) <= r;
    const bool n2 = std::abs(x.second - a) <= r;
    if (n1 && n2) return horner(x - a, taylor_at(phi, a));
    if (!n1 && !n2) return (phi(x) - phi(a)) / (x - a);
    const double g1 = divided(x.first, a, phi, origin, ctx);
    const double g2 = divided(x.second, a, phi, origin, ctx);
    const double gd = (g1 - g2) / (x.first - x.second);
    return {g1, g2, gd * x.diff,
            (std::abs(g1) + std::abs(g2)) / std::abs(x.first - x.second) * x.mag};
  } else {
    double dist;
    if constexpr (is_jet<T>) {
      dist = std::abs(x.c[0] - a);
    } else {
      dist = std::abs(x - a);
    }
    if (dist <= r) return horner(x - a, taylor_at(phi, a));
    return (phi(x) - phi(a)) / (x - a);
  }
}

// --- building blocks for the divided-difference factors ----------------------

auto child_fn(const FunctionExpr& f, const Ctx& ctx) {
  return [&f, &ctx](const auto& y) { return eval_node(f, y, ctx); };
}

auto child_origin(const FunctionExpr& f) {
  return [&f] { return origin_behavior(f); };
}

template <class T>
T sharp_value(const FunctionExpr& f, const T& y, const Ctx& ctx) {
  if constexpr (std::is_same_v<T, double>) {
    if (y == 0.0) {
      const double v = sharp_origin(f).value;
      if (std::isnan(v)) throw DomainError("t / f(t) has no determinable value at the origin");
      return v;
    }
  }
  return y / eval_node(f, y, ctx);
}

/// (x - a) / (f(x) - f(a))
template <class T>
T inverse_factor(const FunctionExpr& f, const T& x, double a, const Ctx& ctx) {
  return 1.0 / divided(x, a, child_fn(f, ctx), child_origin(f), ctx);
}

/// (x - b) / (f#(x) - f#(b))
template <class T>
T inverse_sharp_factor(const FunctionExpr& f, const T& x, double b, const Ctx& ctx) {
  auto phi = [&f, &ctx](const auto& y) { return sharp_value(f, y, ctx); };
  return 1.0 / divided(x, b, phi, [&f] { return sharp_origin(f); }, ctx);
}

/// g(x)(x - b) / (x g(x) - b g(b)); identically 1 when b = 0.
template <class T>
T quotient_factor(const FunctionExpr& g, const T& x, double b, const Ctx& ctx) {
  if (b == 0.0) return konst<T>(1.0);
  auto phi = [&g, &ctx](const auto& y) { return y * eval_node(g, y, ctx); };
  return eval_node(g, x, ctx) /
         divided(x, b, phi, [&g] { return OriginBehavior{0.0, origin_behavior(g).value}; }, ctx);
}

/// (x - a) / (x^p - a^p)
template <class T>
T inverse_power_factor(const T& x, double p, double a, const Ctx& ctx) {
  auto phi = [p](const auto& y) { return power(y, p); };
  auto origin = [p] {
    return OriginBehavior{p > 0 ? 0.0 : 1.0, p == 1.0 ? 1.0 : (p < 1.0 ? inf : 0.0)};
  };
  return 1.0 / divided(x, a, phi, origin, ctx);
}

/// (x^p - 1) / (x - 1)
template <class T>
T power_quotient(const T& x, double p, const Ctx& ctx) {
  auto phi = [p](const auto& y) { return power(y, p); };
  return divided(x, 1.0, phi, [] { return OriginBehavior{0.0, 0.0}; }, ctx);
}

/// (x - 1) / log x
template <class T>
T log_mean(const T& x, const Ctx& ctx) {
  if constexpr (std::is_same_v<T, double>) {
    if (x == 0.0) return 0.0;
  }
  auto phi = [](const auto& y) { return logarithm(y); };
  return 1.0 / divided(x, 1.0, phi, [] { return OriginBehavior{nan, nan}; }, ctx);
}

double principal_arg_2pi(cplx w) {
  const double a = std::arg(w);
  return a < 0 ? a + 2.0 * std::numbers::pi : a;
}

template <class T>
T sqrt_product(const node::SqrtProduct& sp, const T& x, const Ctx& ctx) {
  T h = power(x, 0.5 * sp.gamma);
  for (std::size_t i = 0; i < sp.r.size(); ++i) {
    const double r = sp.r[i], s = sp.s[i];
    const T q = (r / s) * power_quotient(x, s, ctx) / power_quotient(x, r, ctx);
    if constexpr (is_complex<T>) {
      // Continuous branch of sqrt(q) on the upper half-plane: arg(z^s - 1)
      // runs through (0, 2 pi) there, so the argument of q is the difference
      // of the two lifted arguments.  Near z = 1, q is close to 1 and the
      // principal root is already the right one.
      if (std::abs(x - 1.0) <= ctx.cfg.singular_radius) {
        h *= std::sqrt(q);
      } else {
        // The lifted difference only picks the sheet; arg q itself is
        // accurate where both lifted arguments sit close to pi.
        const double lifted = principal_arg_2pi(power(x, s) - 1.0) -
                              principal_arg_2pi(power(x, r) - 1.0);
        const double fine = std::arg(q);
        const double theta = fine + 2.0 * std::numbers::pi * std::round((lifted - fine) / (2.0 * std::numbers::pi));
        h *= std::polar(std::sqrt(std::abs(q)), 0.5 * theta);
      }
    } else {
      h = h * power(q, 0.5);
    }
  }
  return h;
}

template <class T>
T petz_hasegawa(double a, const T& x, const Ctx& ctx) {
  if (a == 0.0 || a == 1.0) return log_mean(x, ctx);
  if (a > 0.0 && a < 1.0)
    return a * (1.0 - a) * inverse_power_factor(x, a, 1.0, ctx) *
           inverse_power_factor(x, 1.0 - a, 1.0, ctx);
  if (a < 0.0)
    return a * (a - 1.0) * power(x, -a) * inverse_power_factor(x, -a, 1.0, ctx) *
           inverse_power_factor(x, 1.0 - a, 1.0, ctx);
  return a * (a - 1.0) * power(x, a - 1.0) * inverse_power_factor(x, a - 1.0, 1.0, ctx) *
         inverse_power_factor(x, a, 1.0, ctx);
}

template <class T>
T eval_node(const FunctionExpr& e, const T& x, const Ctx& ctx) {
  switch (e.kind()) {
    case Kind::identity:
      return x;
    case Kind::constant:
      return konst<T>(e.as<node::Constant>().c);
    case Kind::affine: {
      const auto& n = e.as<node::Affine>();
      return n.alpha + n.beta * x;
    }
    case Kind::power:
      return power(x, e.as<node::Power>().p);
    case Kind::log_mean:
      return log_mean(x, ctx);
    case Kind::pick: {
      const auto& rep = e.as<node::Pick>().rep;
      T s = rep.f0 + rep.beta * x;
      for (const auto& atom : rep.atoms) s = s + atom.weight * atom.lambda * x / (x + atom.lambda);
      return s;
    }
    case Kind::sum: {
      T s = konst<T>(0.0);
      for (const auto& c : e.children()) s = s + eval_node(c, x, ctx);
      return s;
    }
    case Kind::sharp:
    case Kind::sharp_quotient:
      return sharp_value(e.child(0), x, ctx);
    case Kind::g1:
      return inverse_factor(e.child(0), x, e.as<node::G1>().a, ctx);
    case Kind::g2:
      return quotient_factor(e.child(0), x, e.as<node::G2>().a, ctx);
    case Kind::theorem1: {
      const auto& n = e.as<node::Theorem1>();
      return inverse_factor(e.child(0), x, n.a, ctx) *
             inverse_sharp_factor(e.child(0), x, n.b, ctx);
    }
    case Kind::corollary5: {
      const double a = e.as<node::Corollary5>().a;
      return inverse_factor(e.child(0), x, a, ctx) *
             inverse_sharp_factor(e.child(0), x, 1.0 / a, ctx);
    }
    case Kind::theorem4: {
      const auto& n = e.as<node::Theorem4>();
      T h = inverse_factor(e.child(0), x, n.a, ctx);
      if (n.variant == 1) return h * inverse_factor(e.child(1), x, n.b[0], ctx);
      for (std::size_t i = 0; i < n.b.size(); ++i)
        h = h * quotient_factor(e.child(i + 1), x, n.b[i], ctx);
      return h;
    }
    case Kind::theorem7: {
      const auto& n = e.as<node::Theorem7>();
      T h = konst<T>(1.0);
      for (std::size_t i = 0; i < n.m; ++i) h = h * inverse_factor(e.child(i), x, n.a[i], ctx);
      for (std::size_t j = 0; j < n.b.size(); ++j)
        h = h * quotient_factor(e.child(n.m + j), x, n.b[j], ctx);
      return h;
    }
    case Kind::petz_hasegawa:
      return petz_hasegawa(e.as<node::PetzHasegawa>().a, x, ctx);
    case Kind::power_product: {
      const auto& n = e.as<node::PowerProduct>();
      T h = konst<T>(1.0);
      for (std::size_t i = 0; i < n.p.size(); ++i)
        h = h * inverse_power_factor(x, n.p[i], n.a[i], ctx);
      for (std::size_t j = 0; j < n.q.size(); ++j) {
        if (n.b[j] == 0.0) continue;
        h = h * power(x, n.q[j]) * inverse_power_factor(x, 1.0 + n.q[j], n.b[j], ctx);
      }
      return h;
    }
    case Kind::sqrt_product:
      return sqrt_product(e.as<node::SqrtProduct>(), x, ctx);
    case Kind::geom_interp: {
      const auto& n = e.as<node::GeomInterp>();
      const double e1 = n.reading == ExponentReading::printed ? 1.0 / n.p : n.p;
      return power(eval_node(e.child(0), x, ctx), e1) *
             power(eval_node(e.child(1), x, ctx), 1.0 - e1);
    }
    case Kind::power_subst:
      return eval_node(e.child(0), power(x, e.as<node::PowerSubst>().p), ctx);
    case Kind::raw_power:
      return power(x, e.as<node::RawPower>().p);
    case Kind::polynomial: {
      const auto& c = e.as<node::Polynomial>().coeffs;
      T s = konst<T>(0.0);
      for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * x + *it;
      return s;
    }
    case Kind::product_power: {
      const auto& n = e.as<node::ProductPower>();
      T h = power(x, n.t_exponent);
      for (std::size_t i = 0; i < n.exponents.size(); ++i)
        h = h * power(eval_node(e.child(i), x, ctx), n.exponents[i]);
      return h;
    }
  }
  throw Error("unhandled expression kind");
}

OriginBehavior sharp_origin(const FunctionExpr& f) {
  const OriginBehavior o = origin_behavior(f);
  if (std::isnan(o.value)) return {nan, nan};
  if (o.value > 0) return {0.0, 1.0 / o.value};
  const double value = std::isinf(o.slope) ? 0.0 : 1.0 / o.slope;
  switch (f.kind()) {
    case Kind::identity:
      return {1.0, 0.0};
    case Kind::power:
    case Kind::raw_power: {
      const double p = f.is<node::Power>() ? f.as<node::Power>().p : f.as<node::RawPower>().p;
      const double q = 1.0 - p;
      if (q == 0.0) return {1.0, 0.0};
      return {q > 0 ? 0.0 : inf, q == 1.0 ? 1.0 : (q < 1.0 ? inf : 0.0)};
    }
    case Kind::pick: {
      const auto& rep = f.as<node::Pick>().rep;
      double d0 = rep.beta, curvature = 0.0;
      for (const auto& atom : rep.atoms) {
        d0 += atom.weight;
        curvature += atom.weight / atom.lambda;
      }
      return {1.0 / d0, curvature / (d0 * d0)};
    }
    case Kind::log_mean:
      return {0.0, inf};
    default:
      return {value, nan};
  }
}

void collect_singular(const FunctionExpr& e, std::vector<double>& out) {
  switch (e.kind()) {
    case Kind::log_mean:
      out.push_back(1.0);
      break;
    case Kind::g1:
      out.push_back(e.as<node::G1>().a);
      break;
    case Kind::g2:
      out.push_back(e.as<node::G2>().a);
      break;
    case Kind::theorem1:
      out.push_back(e.as<node::Theorem1>().a);
      out.push_back(e.as<node::Theorem1>().b);
      break;
    case Kind::theorem4: {
      const auto& n = e.as<node::Theorem4>();
      out.push_back(n.a);
      out.insert(out.end(), n.b.begin(), n.b.end());
      break;
    }
    case Kind::theorem7: {
      const auto& n = e.as<node::Theorem7>();
      out.insert(out.end(), n.a.begin(), n.a.end());
      out.insert(out.end(), n.b.begin(), n.b.end());
      break;
    }
    case Kind::petz_hasegawa:
    case Kind::sqrt_product:
      out.push_back(1.0);
      break;
    case Kind::corollary5:
      out.push_back(e.as<node::Corollary5>().a);
      out.push_back(1.0 / e.as<node::Corollary5>().a);
      break;
    case Kind::power_product: {
      const auto& n = e.as<node::PowerProduct>();
      out.insert(out.end(), n.a.begin(), n.a.end());
      out.insert(out.end(), n.b.begin(), n.b.end());
      break;
    }
    case Kind::power_subst: {
      std::vector<double> inner;
      collect_singular(e.child(0), inner);
      const double p = e.as<node::PowerSubst>().p;
      for (double s : inner) out.push_back(std::pow(s, 1.0 / p));
      return;
    }
    default:
      break;
  }
  for (const auto& c : e.children()) collect_singular(c, out);
}

double checked(double v, const char* what, double t) {
  if (!std::isfinite(v))
    throw DomainError(std::string(what) + " is not evaluable at t = " + detail::format_number(t));
  return v;
}

void check_real_domain(const FunctionExpr& e, double t) {
  if (std::isnan(t)) throw DomainError("evaluation point is NaN");
  if (t < 0.0 || (t == 0.0 && e.domain() == Domain::open_half_line))
    throw DomainError("t = " + detail::format_number(t) + " is outside the domain " +
                      (e.domain() == Domain::open_half_line ? "(0, inf)" : "[0, inf)"));
}

std::vector<double> spectral_values(const FunctionExpr& e, const std::vector<double>& lambda,
                                    double scale, const EvalConfig& cfg) {
  const double tol = 1e-12 * scale;
  std::vector<double> out(lambda.size());
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    double l = lambda[i];
    if (l < 0.0 && l >= -tol && e.domain() == Domain::closed_half_line) l = 0.0;
    if (l < 0.0 || (l <= 0.0 && e.domain() == Domain::open_half_line))
      throw DomainError("matrix spectrum leaves the domain (eigenvalue " +
                        detail::format_number(lambda[i]) + ")");
    out[i] = eval_real(e, l, cfg);
  }
  return out;
}

}  // namespace

// --- public ------------------------------------------------------------------

OriginBehavior origin_behavior(const FunctionExpr& e) {
  switch (e.kind()) {
    case Kind::identity:
      return {0.0, 1.0};
    case Kind::constant:
      return {e.as<node::Constant>().c, 0.0};
    case Kind::affine:
      return {e.as<node::Affine>().alpha, e.as<node::Affine>().beta};
    case Kind::power:
    case Kind::raw_power: {
      const double p = e.is<node::Power>() ? e.as<node::Power>().p : e.as<node::RawPower>().p;
      if (p == 0.0) return {1.0, 0.0};
      return {p > 0 ? 0.0 : inf, p == 1.0 ? 1.0 : (p < 1.0 ? inf : 0.0)};
    }
    case Kind::log_mean:
      return {0.0, inf};
    case Kind::pick: {
      const auto& rep = e.as<node::Pick>().rep;
      double slope = rep.beta;
      for (const auto& atom : rep.atoms) slope += atom.weight;
      return {rep.f0, slope};
    }
    case Kind::sum: {
      OriginBehavior s{0.0, 0.0};
      for (const auto& c : e.children()) {
        const auto o = origin_behavior(c);
        s.value += o.value;
        s.slope += o.slope;
      }
      return s;
    }
    case Kind::polynomial: {
      const auto& c = e.as<node::Polynomial>().coeffs;
      return {c.empty() ? 0.0 : c[0], c.size() > 1 ? c[1] : 0.0};
    }
    case Kind::sharp:
    case Kind::sharp_quotient:
      return sharp_origin(e.child(0));
    case Kind::power_subst: {
      const auto o = origin_behavior(e.child(0));
      return {o.value, o.slope > 0 ? inf : nan};
    }
    default:
      break;
  }
  if (e.domain() == Domain::open_half_line) return {nan, nan};
  double v = nan;
  try {
    v = eval_node(e, 0.0, Ctx{});
  } catch (const DomainError&) {
  }
  return {v, nan};
}

double eval_real(const FunctionExpr& e, double t, const EvalConfig& cfg) {
  check_real_domain(e, t);
  return checked(eval_node(e, t, Ctx{cfg}), "expression", t);
}

std::complex<double> eval_complex(const FunctionExpr& e, std::complex<double> z,
                                  const EvalConfig& cfg) {
  if (!(z.imag() > 0.0))
    throw DomainError("complex evaluation requires Im z > 0, got " +
                      detail::format_number(z.real()) + (z.imag() < 0 ? " - " : " + ") +
                      detail::format_number(std::abs(z.imag())) + "i");
  const cplx w = eval_node(e, z, Ctx{cfg});
  if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
    throw DomainError("expression is not evaluable at z = " + detail::format_number(z.real()) +
                      " + " + detail::format_number(z.imag()) + "i");
  return w;
}

double eval_derivative(const FunctionExpr& e, double t, const EvalConfig& cfg) {
  if (!(t > 0.0))
    throw DomainError("derivative requires an interior point, got t = " + detail::format_number(t));
  const double h = cfg.complex_step * std::max(1.0, std::abs(t));
  const cplx w = eval_node(e, cplx{t, h}, Ctx{cfg});
  return checked(w.imag() / h, "derivative", t);
}

double eval_divided(const FunctionExpr& e, double x, double y, const EvalConfig& cfg) {
  check_real_domain(e, x);
  check_real_domain(e, y);
  if (x == y) return eval_derivative(e, x, cfg);
  const DividedPair r = eval_node(e, DividedPair::variable(x, y), Ctx{cfg});
  // Far apart points can make the propagated product rule cancel badly;
  // then the plain quotient of the two values is the better conditioned one.
  const double direct_mag = (std::abs(r.first) + std::abs(r.second)) / std::abs(x - y);
  if (direct_mag < r.mag) return checked((r.first - r.second) / (x - y), "divided difference", x);
  return checked(r.diff, "divided difference", x);
}

std::vector<double> eval_taylor(const FunctionExpr& e, double t, const EvalConfig& cfg) {
  if (!(t > 0.0))
    throw DomainError("Taylor expansion requires an interior point, got t = " +
                      detail::format_number(t));
  const Jet j = eval_node(e, Jet::variable(t), Ctx{cfg});
  if (!detail::isfinite(j)) throw DomainError("Taylor expansion is not finite at t = " +
                                              detail::format_number(t));
  return {j.c.begin(), j.c.end()};
}

SymmetricMatrix eval_matrix(const FunctionExpr& e, const SymmetricMatrix& a,
                            const EvalConfig& cfg) {
  const std::size_t n = a.dim();
  const SymmetricEigen eig = eigh(a);
  const std::vector<double> fl = spectral_values(e, eig.values, a.frobenius_norm(), cfg);
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += eig.vectors(i, k) * fl[k] * eig.vectors(j, k);
      out(i, j) = s;
    }
  return SymmetricMatrix::from_upper(out);
}

HermitianMatrix eval_matrix(const FunctionExpr& e, const HermitianMatrix& a,
                            const EvalConfig& cfg) {
  return from_real_embedding(eval_matrix(e, real_embedding(a), cfg));
}

std::vector<double> eval_real_batch(const FunctionExpr& e, std::span<const double> ts,
                                    const EvalConfig& cfg, ExecPolicy policy) {
  std::vector<double> out(ts.size());
  parallel_for(ts.size(), policy, [&](std::size_t i) { out[i] = eval_real(e, ts[i], cfg); });
  return out;
}

std::vector<double> singular_points(const FunctionExpr& e) {
  std::vector<double> pts;
  collect_singular(e, pts);
  std::erase_if(pts, [](double s) { return !(s > 0.0); });
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace omf
