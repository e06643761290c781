#pragma once

// Expression trees of operator monotone function constructors.
//
// Every constructor validates its parameters and hypotheses when it runs;
// a FunctionExpr that exists is either certified by the rule that built it
// or explicitly marked as unchecked (research escape hatch / test-only).

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "omf/errors.hpp"
#include "omf/report.hpp"

namespace omf {

/// f(0) + beta t + sum_k w_k lambda_k t / (t + lambda_k): a Pick integral with
/// a finite atomic measure.
struct PickRepresentation {
  struct Atom {
    double lambda = 1.0;
    double weight = 1.0;
    bool operator==(const Atom&) const = default;
  };

  double f0 = 0.0;
  double beta = 0.0;
  std::vector<Atom> atoms;

  bool operator==(const PickRepresentation&) const = default;
};

/// Which exponent pair the geometric interpolation uses.
/// `printed`: h1^{1/p} h2^{1-1/p};  `weighted`: h1^p h2^{1-p}.
enum class ExponentReading { printed, weighted };

/// Second hypothesis for the m/n product quotient.
/// `arg_bound`: sampled inf arg F(z)/arg z must be positive (checked).
/// `boundary_nonvanishing`: continuity and nonvanishing on (-inf, 0),
/// recorded as unchecked.
enum class ProductCondition { arg_bound, boundary_nonvanishing };

enum class Domain { closed_half_line, open_half_line };

namespace node {

struct Identity {
  bool operator==(const Identity&) const = default;
};
struct Constant {
  double c;
  bool operator==(const Constant&) const = default;
};
struct Affine {
  double alpha, beta;
  bool operator==(const Affine&) const = default;
};
struct Power {
  double p;
  bool operator==(const Power&) const = default;
};
struct LogMean {
  bool operator==(const LogMean&) const = default;
};
struct Pick {
  PickRepresentation rep;
  bool operator==(const Pick&) const = default;
};
struct Sum {
  bool operator==(const Sum&) const = default;
};
struct Sharp {
  bool operator==(const Sharp&) const = default;
};
struct G1 {
  double a;
  bool operator==(const G1&) const = default;
};
struct G2 {
  double a;
  bool operator==(const G2&) const = default;
};
struct Theorem1 {
  double a, b;
  bool operator==(const Theorem1&) const = default;
};
// children: f, g_1..g_n
struct Theorem4 {
  int variant;
  double a;
  std::vector<double> b;
  bool unchecked;
  bool operator==(const Theorem4&) const = default;
};
// children: f_1..f_m, g_1..g_n
struct Theorem7 {
  std::size_t m;
  std::vector<double> a;
  std::vector<double> b;
  ProductCondition condition;
  bool unchecked;
  bool operator==(const Theorem7&) const = default;
};
struct PetzHasegawa {
  double a;
  bool operator==(const PetzHasegawa&) const = default;
};
struct Corollary5 {
  double a;
  bool operator==(const Corollary5&) const = default;
};
struct PowerProduct {
  std::vector<double> p, q, a, b;
  bool operator==(const PowerProduct&) const = default;
};
struct SqrtProduct {
  std::vector<double> r, s;
  int c, d;
  double gamma;
  bool operator==(const SqrtProduct&) const = default;
};
struct GeomInterp {
  double p;
  ExponentReading reading;
  bool unchecked;
  bool operator==(const GeomInterp&) const = default;
};
struct SharpQuotient {
  bool operator==(const SharpQuotient&) const = default;
};
struct PowerSubst {
  double p;
  bool operator==(const PowerSubst&) const = default;
};

// Test-only kinds: not operator monotone in general, never certified.
struct RawPower {
  double p;
  bool operator==(const RawPower&) const = default;
};
struct Polynomial {
  std::vector<double> coeffs;  // ascending powers
  bool operator==(const Polynomial&) const = default;
};
// t^{t_exponent} * prod_i child_i^{exponents_i}; used for hypothesis gates.
struct ProductPower {
  double t_exponent;
  std::vector<double> exponents;
  bool operator==(const ProductPower&) const = default;
};

}  // namespace node

using Payload =
    std::variant<node::Identity, node::Constant, node::Affine, node::Power, node::LogMean,
                 node::Pick, node::Sum, node::Sharp, node::G1, node::G2, node::Theorem1,
                 node::Theorem4, node::Theorem7, node::PetzHasegawa, node::Corollary5,
                 node::PowerProduct, node::SqrtProduct, node::GeomInterp, node::SharpQuotient,
                 node::PowerSubst, node::RawPower, node::Polynomial, node::ProductPower>;

/// Order matches the Payload alternatives.
enum class Kind {
  identity,
  constant,
  affine,
  power,
  log_mean,
  pick,
  sum,
  sharp,
  g1,
  g2,
  theorem1,
  theorem4,
  theorem7,
  petz_hasegawa,
  corollary5,
  power_product,
  sqrt_product,
  geom_interp,
  sharp_quotient,
  power_subst,
  raw_power,
  polynomial,
  product_power,
};

/// Grammar name of a node kind ("theorem1", "petz-hasegawa", ...).
std::string_view kind_name(Kind k);
bool is_test_only(Kind k);

/// Why an expression is believed operator monotone.
struct Provenance {
  std::string license;
  bool certified = true;   // false: test-only kind or a skipped gate
  bool unchecked = false;  // a gate was skipped on request
  bool symmetric = false;  // claims h(t) = t h(1/t)
  std::vector<std::string> notes;
  std::vector<VerificationReport> gates;
};

class FunctionExpr;

namespace detail {
struct Node {
  Payload payload;
  std::vector<FunctionExpr> children;
  Domain domain = Domain::closed_half_line;
  Provenance provenance;
};
}  // namespace detail

/// Immutable, cheaply copyable handle to an expression tree.
class FunctionExpr {
 public:
  Kind kind() const { return static_cast<Kind>(node_->payload.index()); }
  const Payload& payload() const { return node_->payload; }
  std::span<const FunctionExpr> children() const { return node_->children; }
  const FunctionExpr& child(std::size_t i) const { return node_->children.at(i); }
  Domain domain() const { return node_->domain; }
  const Provenance& provenance() const { return node_->provenance; }

  template <class P>
  const P& as() const {
    return std::get<P>(node_->payload);
  }
  template <class P>
  bool is() const {
    return std::holds_alternative<P>(node_->payload);
  }

  /// Structural equality: payloads and children, provenance ignored.
  friend bool operator==(const FunctionExpr& x, const FunctionExpr& y);

  static FunctionExpr from_node(detail::Node n);

 private:
  explicit FunctionExpr(std::shared_ptr<const detail::Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const detail::Node> node_;
};

/// Configuration for numeric hypothesis gates run inside constructors.
struct GateOptions {
  GridSpec grid{};
  bool unchecked = false;
};

// --- basic operator monotone functions -------------------------------------

FunctionExpr make_identity();
FunctionExpr make_constant(double c);
FunctionExpr make_affine(double alpha, double beta);
FunctionExpr make_power(double p);
FunctionExpr make_log_mean();
FunctionExpr make_pick_integral(const PickRepresentation& rep);
FunctionExpr make_sum(std::vector<FunctionExpr> terms);

// --- transforms and quotient constructions ---------------------------------

/// t / f(t).  sharp(sharp(f)) returns f.
FunctionExpr make_sharp(const FunctionExpr& f);
/// (t-a)/(f(t)-f(a)).
FunctionExpr make_prop2_g1(const FunctionExpr& f, double a);
/// f(t)(t-a)/(t f(t) - a f(a)).
FunctionExpr make_prop2_g2(const FunctionExpr& f, double a);
/// (t-a)(t-b)/((f(t)-f(a))(f#(t)-f#(b))).
FunctionExpr make_theorem1_h(const FunctionExpr& f, double a, double b);
/// variant 1: (t-a)(t-b)/((f(t)-f(a))(g(t)-g(b))), gated on f g / t.
/// variant 2: (t-a)/(f(t)-f(a)) prod g_i(t)(t-b_i)/(t g_i(t)-b_i g_i(b_i)),
/// gated on f / prod g_i.
FunctionExpr make_theorem4(const FunctionExpr& f, const std::vector<FunctionExpr>& gs, double a,
                           const std::vector<double>& bs, int variant,
                           const GateOptions& gate = {});
/// prod (t-a_i)/(f_i(t)-f_i(a_i)) prod g_j(t)(t-b_j)/(t g_j(t)-b_j g_j(b_j)),
/// gated on F = prod f_i / (t^{m-1} prod g_j).
FunctionExpr make_theorem7(const std::vector<FunctionExpr>& fs, const std::vector<FunctionExpr>& gs,
                           const std::vector<double>& as, const std::vector<double>& bs,
                           ProductCondition condition = ProductCondition::arg_bound,
                           const GateOptions& gate = {});
FunctionExpr make_petz_hasegawa(double a);
/// (t-a)(t-1/a)/((f(t)-f(a))(f#(t)-f#(1/a))) on (0, inf).
FunctionExpr make_corollary5(const FunctionExpr& f, double a);
FunctionExpr make_power_product(const std::vector<double>& ps, const std::vector<double>& qs,
                                const std::vector<double>& as, const std::vector<double>& bs);
FunctionExpr make_sqrt_product(const std::vector<double>& rs, const std::vector<double>& ss,
                               int c, int d);
FunctionExpr make_geom_interp(const FunctionExpr& h1, const FunctionExpr& h2, double p,
                              ExponentReading reading = ExponentReading::printed,
                              const GateOptions& gate = {});
FunctionExpr make_sharp_quotient(const FunctionExpr& h1, const GateOptions& gate = {});
/// f(t^p), 0 < p < 1.
FunctionExpr make_power_subst(const FunctionExpr& f, double p);

// --- test-only expressions (never certified) -------------------------------

FunctionExpr make_raw_power(double p);
FunctionExpr make_polynomial(std::vector<double> coeffs);
FunctionExpr make_product_power(std::vector<FunctionExpr> factors, std::vector<double> exponents,
                                double t_exponent);

/// Exponent of the square-root product, 1 - c + d + sum r_i(i<c) - sum s_i(i<d).
double sqrt_product_gamma(const std::vector<double>& rs, const std::vector<double>& ss, int c, int d);

/// Numerically constant on a fixed probe grid.
bool is_numerically_constant(const FunctionExpr& f);
/// t / f(t) numerically constant, i.e. f is a multiple of t.
bool is_sharp_numerically_constant(const FunctionExpr& f);

}  // namespace omf
