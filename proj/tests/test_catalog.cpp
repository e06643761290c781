#include <cmath>
#include <set>

#include "doctest.h"
#include "omf/catalog.hpp"
#include "omf/eval.hpp"
#include "omf/grammar.hpp"
#include "omf/verify.hpp"
#include "support.hpp"

using namespace omf;
using namespace omf::testing;

namespace {

GridSpec quick() {
  GridSpec g;
  g.loewner_sets = 60;
  g.hp_moduli = 20;
  g.hp_args = 20;
  g.trials = 40;
  g.dims = {2, 3, 4};
  return g;
}

}  // namespace

TEST_CASE("catalog layout") {
  const auto all = examples_catalog();
  CHECK(all.size() == petz_hasegawa_family().size() + 3 + 2);
  std::set<std::string> names;
  for (const auto& e : all) {
    CHECK(names.insert(e.name).second);
    CHECK((e.family == "petz-hasegawa" || e.family == "example6" || e.family == "example8"));
  }
  std::set<double> as;
  for (const auto& e : petz_hasegawa_family()) as.insert(e.expr.as<node::PetzHasegawa>().a);
  CHECK(as.count(0.0) == 1);
  CHECK(as.count(1.0) == 1);
  CHECK(*as.begin() == -0.9);
  CHECK(*as.rbegin() == doctest::Approx(1.9));
}

TEST_CASE("Petz-Hasegawa endpoints are the logarithmic mean") {
  // f_0 = f_1 = (t - 1) / log t.
  for (double t : log_grid(1e-3, 1e3, 41)) {
    const double want = t == 1.0 ? 1.0 : (t - 1) / std::log(t);
    CHECK(rel_err(eval_real(make_petz_hasegawa(0.0), t), want) <= 1e-12);
    CHECK(rel_err(eval_real(make_petz_hasegawa(1.0), t), want) <= 1e-12);
    CHECK(rel_err(eval_real(make_log_mean(), t), want) <= 1e-12);
  }
}

TEST_CASE("every entry certifies") {
  const GridSpec g = quick();
  for (const auto& opt : {CatalogOptions{}, CatalogOptions{0.5, 1.0}, CatalogOptions{0.8, 0.25}})
    for (const auto& e : examples_catalog(opt)) {
      CAPTURE(e.name);
      const auto r = certify(e.expr, g);
      CHECK(r.passed());
      CHECK(r.sub_reports.size() == (e.expr.provenance().symmetric ? 4u : 3u));
    }
}

TEST_CASE("entries round trip through text and JSON") {
  for (const auto& e : examples_catalog()) {
    CAPTURE(e.name);
    CHECK(parse(serialize(e.expr)) == e.expr);
    CHECK(expr_from_json(to_json(e.expr)) == e.expr);
  }
}

TEST_CASE("example6 values") {
  for (double p : {0.2, 0.3, 0.5, 0.8}) {
    CAPTURE(p);
    // (t-1)^2 / ((t^p - 1)(t^(1-p) - 1)) tends to 1/(p(1-p)) at t = 1.
    CHECK(rel_err(eval_real(example6_first(p), 1.0), 1 / (p * (1 - p))) <= 1e-12);
    for (double t : {0.1, 0.5, 2.0, 30.0}) {
      const double want = (t - 1) * (t - 1) / ((std::pow(t, p) - 1) * (std::pow(t, 1 - p) - 1));
      CHECK(rel_err(eval_real(example6_first(p), t), want) <= 1e-12);
    }
    CHECK(rel_err(eval_real(example6_third(p, 1.0), 1.0), 4.0) <= 1e-10);
  }
}

TEST_CASE("example8 functions") {
  const FunctionExpr pp = example8_power_product();
  CHECK(pp.provenance().symmetric);
  const FunctionExpr sq = example8_sqrt_product();
  CHECK(sqrt_product_gamma({0.5, 1.5}, {0.8, 1.8}, 1, 1) == doctest::Approx(0.7));
  for (double t : log_grid(1e-2, 1e2, 17)) {
    if (std::abs(t - 1) < 1e-9) continue;
    CAPTURE(t);
    const double want_pp = (t - 1) / (std::pow(t, 0.5) - 1) * (t - 1) / (std::pow(t, 0.7) - 1) *
                           std::pow(t, 0.2) * (t - 1) / (std::pow(t, 1.2) - 1);
    CHECK(rel_err(eval_real(pp, t), want_pp) <= 1e-12);
    const double want_sq = std::pow(t, 0.35) *
                           std::sqrt(0.5 / 0.8 * (std::pow(t, 0.8) - 1) / (std::pow(t, 0.5) - 1)) *
                           std::sqrt(1.5 / 1.8 * (std::pow(t, 1.8) - 1) / (std::pow(t, 1.5) - 1));
    CHECK(rel_err(eval_real(sq, t), want_sq) <= 1e-12);
  }
  // Limits at t = 1: (1/0.5)(1/0.7)(1/1.2) and 1.
  CHECK(rel_err(eval_real(pp, 1.0), 1 / (0.5 * 0.7 * 1.2)) <= 1e-12);
  CHECK(rel_err(eval_real(sq, 1.0), 1.0) <= 1e-12);
}
