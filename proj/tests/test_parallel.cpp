#include <omp.h>

#include <atomic>
#include <stdexcept>

#include "doctest.h"
#include "omf/catalog.hpp"
#include "omf/eval.hpp"
#include "omf/grammar.hpp"
#include "omf/parallel.hpp"
#include "omf/verify.hpp"
#include "support.hpp"

using namespace omf;
using namespace omf::testing;

namespace {

// Force several threads even on a single core so the parallel path really
// interleaves.
struct Threads {
  Threads() { omp_set_num_threads(4); }
} const threads;

GridSpec with(ExecPolicy p) {
  GridSpec g;
  g.loewner_sets = 80;
  g.hp_moduli = 20;
  g.hp_args = 20;
  g.trials = 60;
  g.dims = {2, 3, 4};
  g.policy = p;
  return g;
}

std::vector<FunctionExpr> subjects() {
  return {make_petz_hasegawa(0.3), make_theorem1_h(make_log_mean(), 0.5, 2), example6_third(0.3, 2.0),
          example8_sqrt_product(), make_raw_power(2), make_raw_power(1.2),
          make_pick_integral({0.1, 0.2, {{0.5, 1.0}, {20.0, 3.0}}})};
}

}  // namespace

TEST_CASE("parallel_for visits every index once and rethrows") {
  CHECK(parallel_threads() >= 1);
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), ExecPolicy::parallel, [&](std::size_t i) { ++hits[i]; });
  for (const auto& h : hits) CHECK(h.load() == 1);
  CHECK_THROWS_AS(parallel_for(100, ExecPolicy::parallel,
                               [](std::size_t i) {
                                 if (i == 37) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
}

TEST_CASE("verifiers agree between serial and parallel runs") {
  const GridSpec s = with(ExecPolicy::serial);
  const GridSpec p = with(ExecPolicy::parallel);
  for (const auto& e : subjects()) {
    CAPTURE(serialize(e));
    CHECK(to_json(loewner_test(e, s)).dump() == to_json(loewner_test(e, p)).dump());
    CHECK(to_json(pick_test(e, s)).dump() == to_json(pick_test(e, p)).dump());
    CHECK(to_json(arg_dominance_test(e, s)).dump() == to_json(arg_dominance_test(e, p)).dump());
    CHECK(to_json(matrix_monotone_test(e, s)).dump() == to_json(matrix_monotone_test(e, p)).dump());
    CHECK(to_json(symmetry_test(e, s)).dump() == to_json(symmetry_test(e, p)).dump());
    CHECK(to_json(certify(e, s)).dump() == to_json(certify(e, p)).dump());
  }
}

TEST_CASE("batch evaluation agrees between serial and parallel runs") {
  const auto ts = log_grid(1e-3, 1e3, 2001);
  for (const auto& e : subjects()) {
    const auto a = eval_real_batch(e, ts, {}, ExecPolicy::serial);
    const auto b = eval_real_batch(e, ts, {}, ExecPolicy::parallel);
    CHECK(a == b);
  }
}

TEST_CASE("gates agree between serial and parallel runs") {
  GateOptions gs, gp;
  gs.grid = with(ExecPolicy::serial);
  gp.grid = with(ExecPolicy::parallel);
  const auto a = make_theorem7({make_power(0.7), make_power(0.8)}, {make_power(0.2)}, {1, 2}, {0.5},
                               ProductCondition::arg_bound, gs);
  const auto b = make_theorem7({make_power(0.7), make_power(0.8)}, {make_power(0.2)}, {1, 2}, {0.5},
                               ProductCondition::arg_bound, gp);
  CHECK(a == b);
  std::string ra, rb;
  try {
    make_theorem4(make_power(0.3), {make_power(0.3)}, 1, {2}, 1, gs);
  } catch (const GateError& e) {
    ra = to_json(e.report()).dump();
  }
  try {
    make_theorem4(make_power(0.3), {make_power(0.3)}, 1, {2}, 1, gp);
  } catch (const GateError& e) {
    rb = to_json(e.report()).dump();
  }
  CHECK(!ra.empty());
  CHECK(ra == rb);
}
