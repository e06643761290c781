#include "omf/expr.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <string>

#include "omf/detail/format.hpp"
#include "omf/eval.hpp"
#include "omf/verify.hpp"

namespace omf {

using detail::format_number;

namespace {

constexpr double probe_points[] = {0.25, 0.5, 1.0, 2.0, 4.0};

void require(bool ok, const std::string& what) {
  if (!ok) throw ConstructionError(what);
}

void require_finite(double v, const char* name) {
  require(std::isfinite(v), std::string(name) + " must be finite");
}

void require_nonnegative(double v, const char* name) {
  require_finite(v, name);
  require(v >= 0.0, std::string(name) + " must be >= 0, got " + format_number(v));
}

void require_positive(double v, const char* name) {
  require_finite(v, name);
  require(v > 0.0, std::string(name) + " must be > 0, got " + format_number(v));
}

void require_all_nonnegative(const std::vector<double>& vs, const char* name) {
  for (double v : vs) require_nonnegative(v, name);
}

FunctionExpr build(Payload payload, std::vector<FunctionExpr> children, Provenance prov,
                   Domain domain = Domain::closed_half_line) {
  for (const auto& c : children) {
    if (c.domain() == Domain::open_half_line) domain = Domain::open_half_line;
    if (!c.provenance().certified) prov.certified = false;
    if (c.provenance().unchecked) prov.unchecked = true;
  }
  return FunctionExpr::from_node(
      detail::Node{std::move(payload), std::move(children), domain, std::move(prov)});
}

Provenance licensed(std::string license, bool symmetric = false) {
  Provenance p;
  p.license = std::move(license);
  p.symmetric = symmetric;
  return p;
}

bool constant_on_probe(auto&& fn) {
  const double ref = fn(1.0);
  for (double t : probe_points)
    if (std::abs(fn(t) - ref) > 1e-12 * (1.0 + std::abs(ref))) return false;
  return true;
}

/// h(t) = t h(1/t) on a fixed probe grid.
bool probe_symmetric(const FunctionExpr& f) {
  for (int k = -8; k <= 8; ++k) {
    const double t = std::pow(10.0, 0.25 * k);
    const double a = eval_real(f, t), b = t * eval_real(f, 1.0 / t);
    if (std::abs(a - b) > 1e-10 * (1.0 + std::abs(a))) return false;
  }
  return true;
}

/// f(1/t) f(t) = 1 on a fixed probe grid.
bool probe_reciprocal(const FunctionExpr& f) {
  for (int k = -8; k <= 8; ++k) {
    const double t = std::pow(10.0, 0.25 * k);
    if (std::abs(eval_real(f, t) * eval_real(f, 1.0 / t) - 1.0) > 1e-10) return false;
  }
  return true;
}

void require_nonconstant(const FunctionExpr& f, const char* who, const char* role) {
  if (is_numerically_constant(f))
    throw ConstructionError(std::string(who) + ": " + role + " must not be constant");
}

void require_sharp_nonconstant(const FunctionExpr& f, const char* who) {
  if (is_sharp_numerically_constant(f))
    throw ConstructionError(std::string(who) + ": f# = t/f(t) must not be constant");
}

void run_loewner_gate(const FunctionExpr& hypothesis, const GateOptions& gate,
                      const std::string& what, Provenance& prov) {
  if (gate.unchecked) {
    prov.certified = false;
    prov.unchecked = true;
    prov.notes.push_back(what + ": Loewner gate skipped (unchecked)");
    return;
  }
  VerificationReport r = loewner_test(hypothesis, gate.grid);
  r.test = "gate:" + r.test;
  if (!r.passed())
    throw GateError(what + " failed the Loewner gate (" + to_string(r.verdict) + ", margin " +
                        format_number(r.margin) + ")",
                    r);
  prov.gates.push_back(std::move(r));
}

void require_symmetric(const FunctionExpr& h, const GateOptions& gate, const char* who,
                       const char* role, Provenance& prov) {
  VerificationReport r = symmetry_test(h, gate.grid);
  r.test = "gate:" + r.test;
  if (!r.passed())
    throw GateError(std::string(who) + ": " + role + " does not satisfy h(t) = t h(1/t) (margin " +
                        format_number(r.margin) + ")",
                    r);
  prov.gates.push_back(std::move(r));
}

bool is_zero_function(const FunctionExpr& f) {
  return constant_on_probe([&](double t) { return eval_real(f, t); }) && eval_real(f, 1.0) == 0.0;
}

}  // namespace

std::string_view kind_name(Kind k) {
  switch (k) {
    case Kind::identity: return "identity";
    case Kind::constant: return "const";
    case Kind::affine: return "affine";
    case Kind::power: return "power";
    case Kind::log_mean: return "logmean";
    case Kind::pick: return "pick";
    case Kind::sum: return "sum";
    case Kind::sharp: return "sharp";
    case Kind::g1: return "g1";
    case Kind::g2: return "g2";
    case Kind::theorem1: return "theorem1";
    case Kind::theorem4: return "theorem4";
    case Kind::theorem7: return "theorem7";
    case Kind::petz_hasegawa: return "petz-hasegawa";
    case Kind::corollary5: return "corollary5";
    case Kind::power_product: return "power-product";
    case Kind::sqrt_product: return "sqrt-product";
    case Kind::geom_interp: return "geom-interp";
    case Kind::sharp_quotient: return "sharp-quotient";
    case Kind::power_subst: return "power-subst";
    case Kind::raw_power: return "raw-power";
    case Kind::polynomial: return "poly";
    case Kind::product_power: return "product-power";
  }
  return "?";
}

bool is_test_only(Kind k) {
  return k == Kind::raw_power || k == Kind::polynomial || k == Kind::product_power;
}

bool operator==(const FunctionExpr& x, const FunctionExpr& y) {
  if (x.node_ == y.node_) return true;
  if (x.node_->payload != y.node_->payload) return false;
  return std::equal(x.node_->children.begin(), x.node_->children.end(),
                    y.node_->children.begin(), y.node_->children.end());
}

FunctionExpr FunctionExpr::from_node(detail::Node n) {
  return FunctionExpr(std::make_shared<const detail::Node>(std::move(n)));
}

bool is_numerically_constant(const FunctionExpr& f) {
  return constant_on_probe([&](double t) { return eval_real(f, t); });
}

bool is_sharp_numerically_constant(const FunctionExpr& f) {
  return constant_on_probe([&](double t) { return t / eval_real(f, t); });
}

// --- basic functions -----------------------------------------------------------

FunctionExpr make_identity() { return build(node::Identity{}, {}, licensed("identity")); }

FunctionExpr make_constant(double c) {
  require_positive(c, "const: c");
  return build(node::Constant{c}, {}, licensed("positive constant"));
}

FunctionExpr make_affine(double alpha, double beta) {
  require_nonnegative(alpha, "affine: alpha");
  require_nonnegative(beta, "affine: beta");
  require(alpha + beta > 0.0, "affine: alpha + beta must be > 0");
  return build(node::Affine{alpha, beta}, {}, licensed("affine alpha + beta t", alpha == beta));
}

FunctionExpr make_power(double p) {
  require_finite(p, "power: p");
  require(p >= 0.0 && p <= 1.0, "power: p must lie in [0, 1], got " + format_number(p));
  if (p == 0.0) return make_constant(1.0);
  if (p == 1.0) return make_identity();
  return build(node::Power{p}, {}, licensed("t^p, 0 <= p <= 1", p == 0.5));
}

FunctionExpr make_log_mean() {
  return build(node::LogMean{}, {}, licensed("logarithmic mean (t-1)/log t", true));
}

FunctionExpr make_pick_integral(const PickRepresentation& rep) {
  require_nonnegative(rep.f0, "pick: f0");
  require_nonnegative(rep.beta, "pick: beta");
  for (const auto& atom : rep.atoms) {
    require_positive(atom.lambda, "pick: atom lambda");
    require_positive(atom.weight, "pick: atom weight");
  }
  return build(node::Pick{rep}, {}, licensed("integral representation with atomic measure"));
}

FunctionExpr make_sum(std::vector<FunctionExpr> terms) {
  require(!terms.empty(), "sum: at least one term is required");
  const bool symmetric = std::all_of(terms.begin(), terms.end(), [](const FunctionExpr& t) {
    return t.provenance().symmetric;
  });
  return build(node::Sum{}, std::move(terms), licensed("sum of operator monotone functions", symmetric));
}

// --- transforms ------------------------------------------------------------------

FunctionExpr make_sharp(const FunctionExpr& f) {
  if (f.kind() == Kind::sharp) return f.child(0);
  require(!is_zero_function(f), "sharp: f must not be the zero function");
  return build(node::Sharp{}, {f}, licensed("sharp transform t/f(t)", f.provenance().symmetric));
}

FunctionExpr make_prop2_g1(const FunctionExpr& f, double a) {
  require_positive(a, "g1: a");
  require_nonconstant(f, "g1", "f");
  return build(node::G1{a}, {f}, licensed("g1 = (t-a)/(f(t)-f(a))"));
}

FunctionExpr make_prop2_g2(const FunctionExpr& f, double a) {
  require_positive(a, "g2: a");
  return build(node::G2{a}, {f}, licensed("g2 = f(t)(t-a)/(t f(t) - a f(a))"));
}

FunctionExpr make_theorem1_h(const FunctionExpr& f, double a, double b) {
  require_nonnegative(a, "theorem1: a");
  require_nonnegative(b, "theorem1: b");
  require_nonconstant(f, "theorem1", "f");
  require_sharp_nonconstant(f, "theorem1");
  return build(node::Theorem1{a, b}, {f},
               licensed("theorem1: (t-a)(t-b)/((f(t)-f(a))(f#(t)-f#(b)))"));
}

FunctionExpr make_theorem4(const FunctionExpr& f, const std::vector<FunctionExpr>& gs, double a,
                           const std::vector<double>& bs, int variant, const GateOptions& gate) {
  require(variant == 1 || variant == 2, "theorem4: variant must be 1 or 2");
  require_nonnegative(a, "theorem4: a");
  require_all_nonnegative(bs, "theorem4: b");
  require(!gs.empty(), "theorem4: at least one g is required");
  require(gs.size() == bs.size(), "theorem4: g and b lists must have equal length");
  require_nonconstant(f, "theorem4", "f");

  Provenance prov = licensed(variant == 1 ? "theorem4(1): f g / t operator monotone"
                                          : "theorem4(2): f / prod g_i operator monotone");
  std::vector<FunctionExpr> children{f};
  children.insert(children.end(), gs.begin(), gs.end());
  if (variant == 1) {
    require(gs.size() == 1, "theorem4: variant 1 takes exactly one g");
    require_nonconstant(gs[0], "theorem4", "g");
    run_loewner_gate(make_product_power({f, gs[0]}, {1.0, 1.0}, -1.0), gate,
                     "theorem4 hypothesis f(t)g(t)/t", prov);
  } else {
    std::vector<double> exps(gs.size() + 1, -1.0);
    exps[0] = 1.0;
    run_loewner_gate(make_product_power(children, exps, 0.0), gate,
                     "theorem4 hypothesis f(t)/prod g_i(t)", prov);
  }
  return build(node::Theorem4{variant, a, bs, gate.unchecked}, std::move(children),
               std::move(prov));
}

FunctionExpr make_theorem7(const std::vector<FunctionExpr>& fs, const std::vector<FunctionExpr>& gs,
                           const std::vector<double>& as, const std::vector<double>& bs,
                           ProductCondition condition, const GateOptions& gate) {
  require(!fs.empty(), "theorem7: f list must not be empty");
  require(!gs.empty(), "theorem7: g list must not be empty");
  require(fs.size() == as.size(), "theorem7: f and a lists must have equal length");
  require(gs.size() == bs.size(), "theorem7: g and b lists must have equal length");
  require_all_nonnegative(as, "theorem7: a");
  require_all_nonnegative(bs, "theorem7: b");
  for (const auto& f : fs) require_nonconstant(f, "theorem7", "every f_i");

  const std::size_t m = fs.size();
  std::vector<FunctionExpr> children(fs);
  children.insert(children.end(), gs.begin(), gs.end());
  std::vector<double> exps(children.size(), -1.0);
  std::fill(exps.begin(), exps.begin() + static_cast<std::ptrdiff_t>(m), 1.0);
  const double t_exp = 1.0 - static_cast<double>(m);
  const FunctionExpr big_f = make_product_power(children, exps, t_exp);

  Provenance prov = licensed("theorem7: F = prod f_i / (t^(m-1) prod g_j) operator monotone");
  run_loewner_gate(big_f, gate, "theorem7 hypothesis F", prov);

  if (condition == ProductCondition::boundary_nonvanishing) {
    prov.unchecked = true;
    prov.notes.push_back(
        "theorem7: continuity and nonvanishing of f_i(t)-f_i(a_i), t g_j(t)-b_j g_j(b_j) on "
        "(-inf, 0) not checked numerically (unchecked)");
  } else if (gate.unchecked) {
    prov.notes.push_back("theorem7: argument bound skipped (unchecked)");
  } else {
    // Argument of F continued along the half-plane: each factor's principal
    // argument is continuous there.
    VerificationReport r;
    r.test = "gate:theorem7-arg-bound";
    r.seed = gate.grid.seed;
    r.tolerances["alpha_floor"] = gate.grid.alpha_floor;
    double alpha = std::numeric_limits<double>::infinity();
    std::complex<double> worst{};
    for (const auto& z : half_plane_grid(gate.grid)) {
      double arg_f = t_exp * std::arg(z);
      try {
        for (std::size_t i = 0; i < children.size(); ++i)
          arg_f += exps[i] * std::arg(eval_complex(children[i], z, gate.grid.eval));
      } catch (const DomainError&) {
        ++r.inconclusive;
        continue;
      }
      ++r.samples;
      const double ratio = arg_f / std::arg(z);
      if (ratio < alpha) {
        alpha = ratio;
        worst = z;
      }
    }
    r.margin = alpha - gate.grid.alpha_floor;
    r.witness = Witness{{{"z", {worst.real(), worst.imag()}}, {"alpha", {alpha}}}};
    r.verdict = r.margin >= 0.0 ? Verdict::pass : Verdict::fail;
    if (r.samples == 0) r.verdict = Verdict::inconclusive;
    r.notes.push_back("empirical inf arg F(z)/arg z = " + format_number(alpha));
    if (!r.passed())
      throw GateError("theorem7 condition alpha arg z <= arg F(z) failed (alpha = " +
                          format_number(alpha) + ")",
                      r);
    prov.gates.push_back(std::move(r));
  }
  return build(node::Theorem7{m, as, bs, condition, gate.unchecked}, std::move(children),
               std::move(prov));
}

FunctionExpr make_petz_hasegawa(double a) {
  require_finite(a, "petz-hasegawa: a");
  require(a > -1.0 && a < 2.0, "petz-hasegawa: a must lie in (-1, 2), got " + format_number(a));
  return build(node::PetzHasegawa{a}, {}, licensed("Petz-Hasegawa family f_a", true));
}

FunctionExpr make_corollary5(const FunctionExpr& f, double a) {
  require_positive(a, "corollary5: a");
  require_nonconstant(f, "corollary5", "f");
  require_sharp_nonconstant(f, "corollary5");
  Provenance prov =
      licensed("corollary5: (t-a)(t-1/a)/((f(t)-f(a))(f#(t)-f#(1/a))) on (0, inf)");
  if (probe_symmetric(f)) {
    prov.symmetric = true;
    prov.notes.push_back("corollary5: f(t) = t f(1/t) on the probe grid, h satisfies (*)");
  } else if (a == 1.0 && probe_reciprocal(f)) {
    prov.symmetric = true;
    prov.notes.push_back("corollary5: a = 1 and f(1/t) f(t) = 1 on the probe grid, h satisfies (*)");
  }
  return build(node::Corollary5{a}, {f}, std::move(prov), Domain::open_half_line);
}

FunctionExpr make_power_product(const std::vector<double>& ps, const std::vector<double>& qs,
                                const std::vector<double>& as, const std::vector<double>& bs) {
  require(!ps.empty(), "power-product: p list must not be empty");
  require(!qs.empty(), "power-product: q list must not be empty");
  require(ps.size() == as.size(), "power-product: p and a lists must have equal length");
  require(qs.size() == bs.size(), "power-product: q and b lists must have equal length");
  for (double p : ps) {
    require_finite(p, "power-product: p_i");
    require(p > 0.0 && p <= 1.0, "power-product: 0 < p_i <= 1 violated by p_i = " + format_number(p));
  }
  for (double q : qs) {
    require_finite(q, "power-product: q_j");
    require(q >= 0.0 && q <= 1.0, "power-product: 0 <= q_j <= 1 violated by q_j = " + format_number(q));
  }
  require_all_nonnegative(as, "power-product: a_i");
  require_all_nonnegative(bs, "power-product: b_j");
  const double m = static_cast<double>(ps.size());
  const double excess = std::accumulate(ps.begin(), ps.end(), 0.0) -
                        std::accumulate(qs.begin(), qs.end(), 0.0) - (m - 1.0);
  constexpr double slack = 1e-12;
  require(excess >= -slack, "power-product: 0 <= sum p_i - sum q_j - (m-1) violated (value " +
                                format_number(excess) + ")");
  require(excess <= 1.0 + slack, "power-product: sum p_i - sum q_j - (m-1) <= 1 violated (value " +
                                     format_number(excess) + ")");
  const auto is_one = [](double v) { return v == 1.0; };
  const bool symmetric = std::abs(excess) <= slack && std::all_of(as.begin(), as.end(), is_one) &&
                         std::all_of(bs.begin(), bs.end(), is_one);
  Provenance prov = licensed("power-product with F = t^(sum p - sum q - (m-1))", symmetric);
  if (symmetric) prov.notes.push_back("power-product: equality branch with a = b = 1 satisfies (*)");
  return build(node::PowerProduct{ps, qs, as, bs}, {}, std::move(prov));
}

double sqrt_product_gamma(const std::vector<double>& rs, const std::vector<double>& ss, int c,
                          int d) {
  double g = 1.0 - c + d;
  for (int i = 0; i < c; ++i) g += rs[static_cast<std::size_t>(i)];
  for (int i = 0; i < d; ++i) g -= ss[static_cast<std::size_t>(i)];
  return g;
}

FunctionExpr make_sqrt_product(const std::vector<double>& rs, const std::vector<double>& ss, int c,
                               int d) {
  require(!rs.empty(), "sqrt-product: r list must not be empty");
  require(rs.size() == ss.size(), "sqrt-product: r and s lists must have equal length");
  const int n = static_cast<int>(rs.size());
  require(c >= 0 && c <= n, "sqrt-product: 0 <= c <= n violated");
  require(d >= 0 && d <= n, "sqrt-product: 0 <= d <= n violated");

  auto check_chain = [](const std::vector<double>& v, int k, const char* name) {
    double low = 0.0, high = 0.0;
    for (int i = 0; i < static_cast<int>(v.size()); ++i) {
      const double x = v[static_cast<std::size_t>(i)];
      require_finite(x, name);
      if (i < k) {
        require(x > 0.0 && x <= 1.0, std::string("sqrt-product: 0 < ") + name +
                                         "_i <= 1 (i <= split) violated by " + format_number(x));
        low += x;
      } else {
        require(x >= 1.0 && x <= 2.0, std::string("sqrt-product: 1 <= ") + name +
                                          "_i <= 2 (i > split) violated by " + format_number(x));
        high += x;
      }
    }
    require(std::abs(low - (high - 1.0)) <= 1e-12,
            std::string("sqrt-product: sum_{i<=split} ") + name + "_i = sum_{i>split} " + name +
                "_i - 1 violated (" + format_number(low) + " vs " + format_number(high - 1.0) + ")");
  };
  check_chain(rs, c, "r");
  check_chain(ss, d, "s");
  const double gamma = sqrt_product_gamma(rs, ss, c, d);
  return build(node::SqrtProduct{rs, ss, c, d, gamma}, {},
               licensed("square-root power product, satisfies (*) and h(1) = 1", true));
}

FunctionExpr make_geom_interp(const FunctionExpr& h1, const FunctionExpr& h2, double p,
                              ExponentReading reading, const GateOptions& gate) {
  require_finite(p, "geom-interp: p");
  require(p > 0.0 && p < 1.0, "geom-interp: p must lie in (0, 1), got " + format_number(p));
  Provenance prov = licensed(reading == ExponentReading::printed
                                 ? "geom-interp h1^(1/p) h2^(1-1/p) of (*)-functions"
                                 : "geom-interp h1^p h2^(1-p) of (*)-functions",
                             true);
  require_symmetric(h1, gate, "geom-interp", "h1", prov);
  require_symmetric(h2, gate, "geom-interp", "h2", prov);
  FunctionExpr candidate = build(node::GeomInterp{p, reading, gate.unchecked}, {h1, h2}, prov);
  run_loewner_gate(candidate, gate, "geom-interp output", prov);
  return build(node::GeomInterp{p, reading, gate.unchecked}, {h1, h2}, std::move(prov));
}

FunctionExpr make_sharp_quotient(const FunctionExpr& h1, const GateOptions& gate) {
  Provenance prov = licensed("sharp-quotient t/h1(t) of a (*)-function", true);
  require_symmetric(h1, gate, "sharp-quotient", "h1", prov);
  return build(node::SharpQuotient{}, {h1}, std::move(prov));
}

FunctionExpr make_power_subst(const FunctionExpr& f, double p) {
  require_finite(p, "power-subst: p");
  require(p > 0.0 && p < 1.0, "power-subst: p must lie in (0, 1), got " + format_number(p));
  return build(node::PowerSubst{p}, {f}, licensed("f(t^p), composition with t^p"));
}

// --- test-only -------------------------------------------------------------------

namespace {
Provenance test_only(const char* what) {
  Provenance p = licensed(what);
  p.certified = false;
  p.notes.push_back("test-only expression, not operator monotone in general");
  return p;
}
}  // namespace

FunctionExpr make_raw_power(double p) {
  require_finite(p, "raw-power: p");
  return build(node::RawPower{p}, {}, test_only("t^p, unrestricted p"));
}

FunctionExpr make_polynomial(std::vector<double> coeffs) {
  require(!coeffs.empty(), "poly: at least one coefficient is required");
  for (double c : coeffs) require_finite(c, "poly: coefficient");
  return build(node::Polynomial{std::move(coeffs)}, {}, test_only("polynomial"));
}

FunctionExpr make_product_power(std::vector<FunctionExpr> factors, std::vector<double> exponents,
                                double t_exponent) {
  require(factors.size() == exponents.size(),
          "product-power: factor and exponent lists must have equal length");
  require_finite(t_exponent, "product-power: t exponent");
  for (double e : exponents) require_finite(e, "product-power: exponent");
  return build(node::ProductPower{t_exponent, std::move(exponents)}, std::move(factors),
               test_only("t^k prod f_i^e_i"));
}

}  // namespace omf
