#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "omf/config.hpp"

namespace omf {

enum class Verdict { pass, fail, inconclusive };

const char* to_string(Verdict v);

/// Named numeric arrays describing the input that produced the worst margin.
struct Witness {
  std::map<std::string, std::vector<double>> fields;

  bool operator==(const Witness&) const = default;
};

/// Outcome of one verifier run.
///
/// `margin` is normalized per test: for PSD tests it is the most negative
/// eigenvalue divided by the Frobenius norm of the tested matrix; for
/// argument tests it is the smallest signed distance (radians) to the
/// violated bound; for the functional equation it is minus the largest
/// normalized residual.
struct VerificationReport {
  std::string test;
  Verdict verdict = Verdict::pass;
  double margin = 0.0;
  std::optional<Witness> witness;
  std::size_t samples = 0;
  std::size_t inconclusive = 0;
  std::map<std::string, double> tolerances;
  std::uint64_t seed = 0;
  std::vector<std::string> notes;
  std::vector<VerificationReport> sub_reports;

  bool passed() const { return verdict == Verdict::pass; }
};

/// Sampling configuration shared by every verifier.
struct GridSpec {
  // Real grid, log-spaced.  Loewner point sets are drawn from the same range.
  double t_min = 1e-3;
  double t_max = 1e3;
  std::size_t t_points = 60;

  // Upper half-plane grid: log-spaced moduli times uniform arguments.
  double r_min = 1e-2;
  double r_max = 1e2;
  std::size_t hp_moduli = 40;
  std::size_t hp_args = 40;

  // Loewner matrices.
  std::size_t loewner_sets = 200;
  std::size_t loewner_max_size = 6;
  double min_separation = 1e-3;  // relative gap between neighbouring points
  std::vector<std::vector<double>> fixed_point_sets;

  // Randomized A <= B pairs.
  std::size_t trials = 500;
  std::vector<std::size_t> dims{2, 3, 4, 5, 6};
  double spectrum_min = 1e-3;
  double spectrum_max = 1e2;
  bool inject_classical_pair = true;

  // Tolerances.
  double tol = 1e-8;
  double arg_tol = 1e-10;
  double symmetry_tol = 1e-10;
  double alpha_floor = 1e-6;
  double inconclusive_fraction = 0.01;

  std::uint64_t seed = 42;
  EvalConfig eval{};
  ExecPolicy policy = ExecPolicy::parallel;
};

/// Default seed, overridable through the OMF_SEED environment variable.
std::uint64_t default_seed();

}  // namespace omf
