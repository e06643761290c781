#include <cmath>
#include <functional>
#include <string>

#include "doctest.h"
#include "omf/errors.hpp"
#include "omf/eval.hpp"
#include "omf/expr.hpp"
#include "omf/verify.hpp"
#include "support.hpp"

using namespace omf;
using namespace omf::testing;

namespace {

// Smaller grids keep the gate-heavy cases fast; the acceptance binary runs
// the full defaults.
GateOptions quick_gate() {
  GateOptions g;
  g.grid.loewner_sets = 60;
  g.grid.hp_moduli = 16;
  g.grid.hp_args = 16;
  return g;
}

std::string construction_message(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ConstructionError& e) {
    return e.what();
  }
  return "";
}

void check_values(const FunctionExpr& e, double (*oracle)(double), double tol) {
  for (double t : log_grid(1e-3, 1e3, 31)) CHECK(rel_err(eval_real(e, t), oracle(t)) <= tol);
}

std::vector<FunctionExpr> constructor_corpus() {
  const auto gate = quick_gate();
  return {
      make_identity(),
      make_constant(2.5),
      make_affine(0.5, 0.5),
      make_power(0.3),
      make_log_mean(),
      make_pick_integral({0.2, 0.5, {{0.1, 2.0}, {50.0, 0.1}}}),
      make_sum({make_power(0.3), make_log_mean()}),
      make_sharp(make_log_mean()),
      make_prop2_g1(make_power(0.7), 2),
      make_prop2_g2(make_log_mean(), 0.5),
      make_theorem1_h(make_power(0.5), 1, 2),
      make_theorem1_h(make_log_mean(), 0, 3),
      make_theorem4(make_power(0.9), {make_power(0.9)}, 1, {2}, 1, gate),
      make_theorem4(make_power(0.8), {make_power(0.3), make_power(0.2)}, 0.5, {1, 2}, 2, gate),
      make_theorem7({make_power(0.7), make_power(0.8)}, {make_power(0.2)}, {1, 2}, {0.5},
                    ProductCondition::arg_bound, gate),
      make_petz_hasegawa(-0.7),
      make_petz_hasegawa(1.3),
      make_corollary5(make_power(0.2), 0.5),
      make_power_product({0.5, 0.7}, {0.2}, {1, 1}, {1}),
      make_power_product({0.9, 0.8}, {0.3}, {0.5, 2}, {1}),
      make_sqrt_product({0.5, 1.5}, {0.8, 1.8}, 1, 1),
      make_geom_interp(make_petz_hasegawa(0.5), make_power(0.5), 0.5, ExponentReading::weighted, gate),
      make_sharp_quotient(make_petz_hasegawa(0.3), gate),
      make_power_subst(make_theorem1_h(make_power(0.3), 1, 1), 0.6),
  };
}

}  // namespace

TEST_CASE("make_power") {
  CHECK(make_power(1) == make_identity());
  CHECK(make_power(0) == make_constant(1));
  CHECK(eval_real(make_power(0.5), 4) == doctest::Approx(2.0));
  CHECK_THROWS_AS(make_power(1.5), ConstructionError);
  CHECK_THROWS_AS(make_power(-0.1), ConstructionError);
  CHECK_THROWS_AS(make_power(NAN), ConstructionError);
}

TEST_CASE("basic constructors validate parameters") {
  CHECK_THROWS_AS(make_constant(0), ConstructionError);
  CHECK_THROWS_AS(make_affine(-1, 1), ConstructionError);
  CHECK_THROWS_AS(make_affine(0, 0), ConstructionError);
  CHECK_THROWS_AS(make_pick_integral({-1, 0, {}}), ConstructionError);
  CHECK_THROWS_AS(make_pick_integral({0, -1, {}}), ConstructionError);
  CHECK_THROWS_AS(make_pick_integral({0, 0, {{0, 1}}}), ConstructionError);
  CHECK_THROWS_AS(make_pick_integral({0, 0, {{1, 0}}}), ConstructionError);
  CHECK_THROWS_AS(make_sum({}), ConstructionError);
}

TEST_CASE("pick integral") {
  check_values(make_pick_integral({0, 1, {}}), [](double t) { return t; }, 1e-15);
  CHECK(eval_real(make_pick_integral({0, 0, {{1, 1}}}), 1) == doctest::Approx(0.5));
  Rng g(21);
  for (int k = 0; k < 50; ++k) {
    const auto rep = random_pick(g);
    const FunctionExpr e = make_pick_integral(rep);
    for (double t : log_grid(1e-3, 1e3, 13)) CHECK(rel_err(eval_real(e, t), pick_oracle(rep, t)) <= 1e-13);
  }
}

TEST_CASE("make_sharp") {
  check_values(make_sharp(make_power(0.5)), [](double t) { return std::sqrt(t); }, 1e-15);
  check_values(make_sharp(make_identity()), [](double) { return 1.0; }, 1e-15);
  const FunctionExpr f = make_log_mean();
  CHECK(make_sharp(make_sharp(f)) == f);
  CHECK_THROWS_AS(make_sharp(make_pick_integral({0, 0, {}})), ConstructionError);
}

TEST_CASE("double sharp identity on the constructor corpus") {
  const auto grid = log_grid(1e-3, 1e3, 60);
  for (const auto& f : constructor_corpus()) {
    const FunctionExpr s = make_sharp(f);
    CHECK(make_sharp(s) == f);
    for (double t : grid) {
      // t / (t / f(t)) through the single sharp node.
      const double back = t / eval_real(s, t);
      const double v = eval_real(f, t);
      CHECK(std::abs(back - v) <= 1e-12 * (1 + std::abs(v)));
    }
  }
}

TEST_CASE("theorem1 construction") {
  CHECK_THROWS_AS(make_theorem1_h(make_identity(), 1, 2), ConstructionError);
  CHECK_THROWS_AS(make_theorem1_h(make_constant(1), 1, 2), ConstructionError);
  CHECK_THROWS_AS(make_theorem1_h(make_power(0.5), -1, 2), ConstructionError);
  CHECK_THROWS_AS(make_theorem1_h(make_power(0.5), 1, -2), ConstructionError);
  CHECK_NOTHROW(make_theorem1_h(make_power(0.5), 2, 2));
  CHECK(eval_real(make_theorem1_h(make_power(0.5), 1, 1), 4) == doctest::Approx(9.0));
}

TEST_CASE("g1 and g2") {
  CHECK(eval_real(make_prop2_g1(make_power(0.5), 4), 4) == doctest::Approx(4.0));
  CHECK(eval_real(make_prop2_g1(make_power(0.5), 1), 4) == doctest::Approx(3.0));
  CHECK(eval_real(make_prop2_g2(make_constant(1), 2), 3) == doctest::Approx(1.0));
  CHECK_THROWS_AS(make_prop2_g1(make_power(0.5), 0), ConstructionError);
  CHECK_THROWS_AS(make_prop2_g2(make_power(0.5), -1), ConstructionError);
  CHECK_THROWS_AS(make_prop2_g1(make_constant(2), 1), ConstructionError);
}

TEST_CASE("theorem4 gates") {
  const auto gate = quick_gate();
  // f g / t = 1 for f = t^p, g = t^(1-p): the Uchiyama function again.
  const FunctionExpr u = make_theorem4(make_power(0.3), {make_power(0.7)}, 1, {2}, 1, gate);
  const FunctionExpr h = make_theorem1_h(make_power(0.3), 1, 2);
  for (double t : log_grid(1e-2, 1e2, 21)) CHECK(rel_err(eval_real(u, t), eval_real(h, t)) <= 1e-12);

  CHECK_NOTHROW(make_theorem4(make_power(0.9), {make_power(0.9)}, 1, {1}, 1, gate));
  try {
    make_theorem4(make_power(0.3), {make_power(0.3)}, 1, {1}, 1, gate);
    FAIL("t^0.3 t^0.3 / t passed the gate");
  } catch (const GateError& e) {
    CHECK(e.report().verdict == Verdict::fail);
    CHECK(e.report().witness.has_value());
  }
  GateOptions skip = gate;
  skip.unchecked = true;
  const FunctionExpr forced = make_theorem4(make_power(0.3), {make_power(0.3)}, 1, {1}, 1, skip);
  CHECK(forced.provenance().unchecked);
  CHECK_FALSE(forced.provenance().certified);

  CHECK_THROWS_AS(make_theorem4(make_power(0.5), {make_power(0.5)}, -1, {1}, 1, gate), ConstructionError);
  CHECK_THROWS_AS(make_theorem4(make_power(0.5), {make_power(0.5)}, 1, {-1}, 2, gate), ConstructionError);
  CHECK_THROWS_AS(make_theorem4(make_power(0.5), {make_power(0.5), make_power(0.2)}, 1, {1, 1}, 1, gate),
                  ConstructionError);
  CHECK_THROWS_AS(make_theorem4(make_power(0.5), {make_power(0.5)}, 1, {1}, 3, gate), ConstructionError);
}

TEST_CASE("theorem7 gates") {
  const auto gate = quick_gate();
  // F = t^0 is constant: gate A passes, the argument bound has alpha = 0.
  const std::vector<FunctionExpr> fs{make_power(0.6), make_power(0.6)};
  const std::vector<FunctionExpr> gs{make_power(0.2)};
  try {
    make_theorem7(fs, gs, {1, 1}, {1}, ProductCondition::arg_bound, gate);
    FAIL("alpha = 0 passed the argument gate");
  } catch (const GateError& e) {
    CHECK(e.report().test == "gate:theorem7-arg-bound");
    CHECK(std::abs(e.report().witness->fields.at("alpha")[0]) < 1e-9);
  }
  const FunctionExpr b = make_theorem7(fs, gs, {1, 1}, {1}, ProductCondition::boundary_nonvanishing, gate);
  CHECK(b.provenance().unchecked);

  const FunctionExpr ok = make_theorem7({make_power(0.7), make_power(0.8)}, gs, {1, 2}, {0.5},
                                        ProductCondition::arg_bound, gate);
  REQUIRE(ok.provenance().gates.size() == 2);
  CHECK(ok.provenance().gates[1].witness->fields.at("alpha")[0] == doctest::Approx(0.3).epsilon(1e-9));

  // m = 1 is the second variant of theorem4.
  const FunctionExpr m1 = make_theorem7({make_power(0.9)}, {make_power(0.3)}, {2}, {0.5},
                                        ProductCondition::arg_bound, gate);
  const FunctionExpr v2 = make_theorem4(make_power(0.9), {make_power(0.3)}, 2, {0.5}, 2, gate);
  for (double t : log_grid(1e-2, 1e2, 21)) CHECK(rel_err(eval_real(m1, t), eval_real(v2, t)) <= 1e-12);

  CHECK_THROWS_AS(make_theorem7({}, gs, {}, {1}), ConstructionError);
  CHECK_THROWS_AS(make_theorem7(fs, {}, {1, 1}, {}), ConstructionError);
}

TEST_CASE("petz-hasegawa") {
  CHECK_THROWS_AS(make_petz_hasegawa(-1), ConstructionError);
  CHECK_THROWS_AS(make_petz_hasegawa(2), ConstructionError);
  for (double a : {0.0, 1.0})
    for (double t : log_grid(1e-3, 1e3, 21))
      CHECK(eval_real(make_petz_hasegawa(a), t) == eval_real(make_log_mean(), t));
  for (double a : {-0.9, -0.3, 0.2, 0.5, 0.8, 1.2, 1.9}) CHECK(eval_real(make_petz_hasegawa(a), 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(eval_real(make_petz_hasegawa(0.5), 4) == doctest::Approx(2.25));
}

TEST_CASE("corollary5") {
  CHECK_THROWS_AS(make_corollary5(make_power(0.5), 0), ConstructionError);
  CHECK_THROWS_AS(make_corollary5(make_identity(), 1), ConstructionError);
  CHECK_THROWS_AS(make_corollary5(make_constant(3), 1), ConstructionError);
  CHECK(make_corollary5(make_power(0.3), 2).domain() == Domain::open_half_line);

  // f = t^p, a = 1 gives (t-1)^2/((t^p-1)(t^(1-p)-1)).
  const FunctionExpr h = make_corollary5(make_power(0.3), 1);
  for (double t : log_grid(1e-3, 1e3, 30)) {
    if (std::abs(t - 1) < 1e-2) continue;
    const double want = (t - 1) * (t - 1) / ((std::pow(t, 0.3) - 1) * (std::pow(t, 0.7) - 1));
    CHECK(rel_err(eval_real(h, t), want) <= 1e-11);
  }
  CHECK(h.provenance().symmetric);
  CHECK(make_corollary5(make_petz_hasegawa(0.3), 2).provenance().symmetric);
  CHECK(make_corollary5(make_log_mean(), 0.5).provenance().symmetric);
  CHECK_FALSE(make_corollary5(make_power(0.3), 2).provenance().symmetric);
}

TEST_CASE("power-product constraints") {
  const FunctionExpr e = make_power_product({0.5, 0.7}, {0.2}, {1, 1}, {1});
  CHECK(e.provenance().symmetric);
  const std::string msg = construction_message([] { make_power_product({0.5, 0.5}, {0.9}, {1, 1}, {1}); });
  CHECK(msg.find("0 <= sum p_i - sum q_j - (m-1)") != std::string::npos);
  CHECK_THROWS_AS(make_power_product({0, 0.5}, {0.2}, {1, 1}, {1}), ConstructionError);
  CHECK_THROWS_AS(make_power_product({0.5}, {1.2}, {1}, {1}), ConstructionError);
  CHECK_FALSE(make_power_product({0.9, 0.8}, {0.3}, {0.5, 2}, {1}).provenance().symmetric);
}

TEST_CASE("sqrt-product") {
  CHECK(sqrt_product_gamma({0.5, 1.5}, {0.8, 1.8}, 1, 1) == doctest::Approx(0.7).epsilon(1e-15));
  const FunctionExpr e = make_sqrt_product({0.5, 1.5}, {0.8, 1.8}, 1, 1);
  CHECK(e.as<node::SqrtProduct>().gamma == doctest::Approx(0.7));
  CHECK(eval_real(e, 1) == doctest::Approx(1.0).epsilon(1e-14));
  const std::string msg = construction_message([] { make_sqrt_product({0.5, 1.7}, {0.8, 1.8}, 1, 1); });
  CHECK(msg.find("sum_{i<=split} r_i") != std::string::npos);
  CHECK_THROWS_AS(make_sqrt_product({1.5, 0.5}, {0.8, 1.8}, 1, 1), ConstructionError);
  CHECK_THROWS_AS(make_sqrt_product({0.5, 1.5}, {0.8}, 1, 1), ConstructionError);
}

TEST_CASE("geometric interpolation and sharp quotient") {
  const auto gate = quick_gate();
  const FunctionExpr h1 = make_petz_hasegawa(0.3);
  for (double p : {0.2, 0.5, 0.9})
    for (auto reading : {ExponentReading::printed, ExponentReading::weighted}) {
      const FunctionExpr f = make_geom_interp(h1, h1, p, reading, gate);
      for (double t : log_grid(1e-3, 1e3, 15)) CHECK(rel_err(eval_real(f, t), eval_real(h1, t)) <= 1e-12);
    }
  check_values(make_sharp_quotient(make_power(0.5), gate), [](double t) { return std::sqrt(t); }, 1e-15);

  // ((t+1)/2)^2 t^(-1/2) grows like t^1.5.
  CHECK_THROWS_AS(make_geom_interp(make_affine(0.5, 0.5), make_power(0.5), 0.5, ExponentReading::printed, gate),
                  GateError);
  CHECK_NOTHROW(make_geom_interp(make_affine(0.5, 0.5), make_power(0.5), 0.5, ExponentReading::weighted, gate));
  CHECK_THROWS_AS(make_geom_interp(make_power(0.3), make_power(0.5), 0.5, ExponentReading::weighted, gate),
                  ConstructionError);
  CHECK_THROWS_AS(make_sharp_quotient(make_power(0.3), gate), ConstructionError);
  CHECK_THROWS_AS(make_geom_interp(h1, h1, 1.0, ExponentReading::weighted, gate), ConstructionError);
}

TEST_CASE("power substitution") {
  check_values(make_power_subst(make_identity(), 0.5), [](double t) { return std::sqrt(t); }, 1e-15);
  check_values(make_power_subst(make_power(0.5), 0.5), [](double t) { return std::pow(t, 0.25); }, 1e-14);
  CHECK_THROWS_AS(make_power_subst(make_identity(), 1.0), ConstructionError);
  CHECK_THROWS_AS(make_power_subst(make_identity(), 0.0), ConstructionError);
}

TEST_CASE("deformation h_p converges monotonically") {
  struct Instance {
    FunctionExpr f;
    double a, b;
  };
  const std::vector<Instance> instances{
      {make_power(0.5), 1, 2}, {make_power(0.3), 0.5, 2}, {make_log_mean(), 2, 0.5}};
  const auto grid = log_grid(0.1, 10, 21);
  for (const auto& in : instances) {
    const FunctionExpr h = make_theorem1_h(in.f, in.a, in.b);
    double previous = INFINITY;
    for (int k = 1; k <= 10; ++k) {
      const double p = 1 - std::pow(2.0, -k);
      const FunctionExpr hp = make_theorem1_h(make_power_subst(in.f, p), in.a, in.b);
      double err = 0.0;
      for (double t : grid) err = std::max(err, rel_err(eval_real(hp, t), eval_real(h, t)));
      CHECK(err < previous);
      previous = err;
    }
    CHECK(previous <= 1e-3);
  }
}

TEST_CASE("every constructor output passes the Loewner and Pick tests") {
  GridSpec spec;
  spec.loewner_sets = 200;
  spec.loewner_max_size = 6;
  for (const auto& e : constructor_corpus()) {
    CAPTURE(std::string(kind_name(e.kind())));
    CHECK(loewner_test(e, spec).passed());
    CHECK(pick_test(e, spec).passed());
  }
}

TEST_CASE("structural equality ignores provenance") {
  CHECK(make_theorem1_h(make_power(0.5), 1, 2) == make_theorem1_h(make_power(0.5), 1, 2));
  CHECK_FALSE(make_theorem1_h(make_power(0.5), 1, 2) == make_theorem1_h(make_power(0.5), 2, 1));
  CHECK_FALSE(make_power(0.5) == make_power(0.25));
  const auto gate = quick_gate();
  GateOptions skip = gate;
  skip.unchecked = true;
  CHECK(make_theorem4(make_power(0.9), {make_power(0.9)}, 1, {1}, 1, gate).provenance().gates.size() == 1);
}

TEST_CASE("test-only kinds are never certified") {
  CHECK_FALSE(make_raw_power(2).provenance().certified);
  CHECK_FALSE(make_polynomial({1, 1, 0.5}).provenance().certified);
  CHECK(is_test_only(Kind::raw_power));
  CHECK(is_test_only(Kind::polynomial));
  CHECK(is_test_only(Kind::product_power));
  CHECK_FALSE(is_test_only(Kind::power));
  // Uncertified children propagate.
  CHECK_FALSE(make_sum({make_power(0.5), make_raw_power(2)}).provenance().certified);
}

TEST_CASE("provenance records the license") {
  CHECK(make_petz_hasegawa(0.5).provenance().license.find("Petz-Hasegawa") != std::string::npos);
  CHECK(make_theorem1_h(make_power(0.5), 1, 2).provenance().license.rfind("theorem1", 0) == 0);
}
