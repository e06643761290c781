#include "omf/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>

#include "omf/detail/format.hpp"
#include "omf/errors.hpp"
#include "omf/eval.hpp"
#include "omf/parallel.hpp"

namespace omf {

using detail::format_number;

namespace {

constexpr double pi = std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

/// Per-sample outcome before reduction.
struct Outcome {
  bool evaluated = false;
  double margin = 0.0;
  Witness witness;
  std::string error;
};

/// Worst margin in index order (ties keep the lowest index); fail below
/// -threshold, inconclusive when too many samples could not be evaluated.
void reduce(VerificationReport& r, const std::vector<Outcome>& outcomes, double threshold,
            double inconclusive_fraction) {
  std::optional<std::size_t> worst;
  std::optional<std::size_t> first_error;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const Outcome& o = outcomes[i];
    if (!o.evaluated) {
      ++r.inconclusive;
      if (!first_error) first_error = i;
      continue;
    }
    ++r.samples;
    if (!worst || o.margin < outcomes[*worst].margin) worst = i;
  }
  r.margin = worst ? outcomes[*worst].margin : 0.0;
  if (worst) r.witness = outcomes[*worst].witness;
  if (worst && r.margin < -threshold) {
    r.verdict = Verdict::fail;
  } else if (r.samples == 0 ||
             static_cast<double>(r.inconclusive) >
                 inconclusive_fraction * static_cast<double>(outcomes.size())) {
    r.verdict = Verdict::inconclusive;
  } else {
    r.verdict = Verdict::pass;
  }
  if (first_error)
    r.notes.push_back(std::to_string(r.inconclusive) + " sample(s) not evaluable; first: " +
                      outcomes[*first_error].error);
}

VerificationReport make_report(std::string test, const GridSpec& spec) {
  VerificationReport r;
  r.test = std::move(test);
  r.seed = spec.seed;
  return r;
}

// --- Loewner point sets ----------------------------------------------------------

constexpr double singular_avoidance = 1e-4;
constexpr int max_point_retries = 16;
constexpr double loewner_scale_floor = 1e-6;

bool acceptable_points(const std::vector<double>& xs, const std::vector<double>& singular,
                       double min_sep) {
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (xs[i] - xs[i - 1] < min_sep * xs[i]) return false;
  for (double x : xs)
    for (double s : singular)
      if (std::abs(x - s) < singular_avoidance * s) return false;
  return true;
}

std::optional<std::vector<double>> draw_point_set(std::uint64_t stream, const GridSpec& spec,
                                                  const std::vector<double>& singular) {
  std::mt19937_64 rng(stream);
  const std::size_t max_size = std::max<std::size_t>(2, spec.loewner_max_size);
  std::uniform_int_distribution<std::size_t> size_dist(2, max_size);
  const std::size_t n = size_dist(rng);
  for (int attempt = 0; attempt < max_point_retries; ++attempt) {
    std::vector<double> xs(n);
    for (auto& x : xs) x = log_uniform(rng, spec.t_min, spec.t_max);
    std::sort(xs.begin(), xs.end());
    if (acceptable_points(xs, singular, spec.min_separation)) return xs;
  }
  return std::nullopt;
}

Outcome loewner_outcome(const FunctionExpr& e, const std::vector<double>& xs, const GridSpec& spec) {
  Outcome o;
  try {
    const Matrix l = loewner_matrix(e, xs, spec.eval);
    const SymmetricMatrix s = SymmetricMatrix::from_upper(l);
    // A (near) constant function has a Loewner matrix made of rounding
    // noise; measure it against the size of f(x)/x instead of its own norm.
    double value_scale = 0.0;
    for (double x : xs) value_scale = std::max(value_scale, std::abs(eval_real(e, x, spec.eval)) / x);
    const double norm = std::max(s.frobenius_norm(), loewner_scale_floor * value_scale);
    const double lo = min_eigenvalue(s);
    o.margin = norm > 0.0 ? lo / norm : 0.0;
    o.witness.fields["points"] = xs;
    o.witness.fields["min_eigenvalue"] = {lo};
    o.evaluated = std::isfinite(o.margin);
    if (!o.evaluated) o.error = "non-finite Loewner matrix";
  } catch (const Error& err) {
    o.error = err.what();
  }
  return o;
}

// --- matrix pairs ------------------------------------------------------------------

Matrix random_orthogonal(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix q(d, d);
  for (std::size_t c = 0; c < d; ++c) {
    for (;;) {
      for (std::size_t r = 0; r < d; ++r) q(r, c) = g(rng);
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t k = 0; k < c; ++k) {
          double dot = 0.0;
          for (std::size_t r = 0; r < d; ++r) dot += q(r, k) * q(r, c);
          for (std::size_t r = 0; r < d; ++r) q(r, c) -= dot * q(r, k);
        }
      double nrm = 0.0;
      for (std::size_t r = 0; r < d; ++r) nrm += q(r, c) * q(r, c);
      nrm = std::sqrt(nrm);
      if (nrm > 1e-8) {
        for (std::size_t r = 0; r < d; ++r) q(r, c) /= nrm;
        break;
      }
    }
  }
  return q;
}

SymmetricMatrix conjugate_diagonal(const Matrix& q, const std::vector<double>& mu) {
  const std::size_t d = mu.size();
  Matrix b(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) s += q(i, k) * mu[k] * q(j, k);
      b(i, j) = s;
    }
  return SymmetricMatrix::from_upper(b);
}

std::vector<double> flatten(const SymmetricMatrix& m) {
  std::vector<double> out;
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) out.push_back(m.get(i, j));
  return out;
}

Outcome monotone_outcome(const FunctionExpr& e, const SymmetricMatrix& a, const SymmetricMatrix& b,
                         const EvalConfig& cfg) {
  Outcome o;
  try {
    const SymmetricMatrix fa = eval_matrix(e, a, cfg);
    const SymmetricMatrix fb = eval_matrix(e, b, cfg);
    const double norm = fb.frobenius_norm();
    const double lo = min_eigenvalue(fb - fa);
    o.margin = norm > 0.0 ? lo / norm : 0.0;
    o.witness.fields["A"] = flatten(a);
    o.witness.fields["B"] = flatten(b);
    o.witness.fields["min_eigenvalue"] = {lo};
    o.evaluated = std::isfinite(o.margin);
    if (!o.evaluated) o.error = "non-finite matrix function";
  } catch (const Error& err) {
    o.error = err.what();
  }
  return o;
}

Outcome random_monotone_trial(const FunctionExpr& e, std::size_t d, std::uint64_t stream,
                              const GridSpec& spec) {
  std::mt19937_64 rng(stream);
  const double floor = spec.spectrum_min;
  std::vector<double> mu(d);
  for (auto& m : mu) m = log_uniform(rng, spec.spectrum_min, spec.spectrum_max);
  const Matrix q = random_orthogonal(rng, d);
  const SymmetricMatrix b = conjugate_diagonal(q, mu);

  std::uniform_int_distribution<std::size_t> rank_dist(1, d);
  const std::size_t k = rank_dist(rng);
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix gm(k, d);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < d; ++j) gm(i, j) = g(rng);
  const SymmetricMatrix m = SymmetricMatrix::from_dense(transpose(gm) * gm);
  const double m_norm = eigh(m).values.back();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double lam_min = *std::min_element(mu.begin(), mu.end());
  const double s = u(rng) * std::max(0.0, lam_min - floor);

  SymmetricMatrix a(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) a.set(i, j, b.get(i, j) - s * m.get(i, j) / m_norm);
  return monotone_outcome(e, a, b, spec.eval);
}

// --- half-plane ----------------------------------------------------------------------

template <class MarginFn>
VerificationReport half_plane_test(const FunctionExpr& e, const GridSpec& spec, std::string name,
                                   MarginFn&& margin_fn) {
  VerificationReport r = make_report(std::move(name), spec);
  r.tolerances["arg_tol"] = spec.arg_tol;
  const auto grid = half_plane_grid(spec);
  std::vector<Outcome> outcomes(grid.size());
  parallel_for(grid.size(), spec.policy, [&](std::size_t i) {
    Outcome& o = outcomes[i];
    const auto z = grid[i];
    try {
      const auto w = eval_complex(e, z, spec.eval);
      const double arg_w = std::arg(w);
      o.margin = margin_fn(z, arg_w);
      o.witness.fields["z"] = {z.real(), z.imag()};
      o.witness.fields["w"] = {w.real(), w.imag()};
      o.witness.fields["arg"] = {arg_w};
      o.evaluated = true;
    } catch (const Error& err) {
      o.error = err.what();
    }
  });
  reduce(r, outcomes, spec.arg_tol, spec.inconclusive_fraction);
  return r;
}

}  // namespace

std::uint64_t sample_seed(std::uint64_t seed, std::string_view tag, std::uint64_t index) {
  return splitmix64(splitmix64(seed ^ fnv1a(tag)) + index);
}

std::vector<double> real_grid(const GridSpec& spec) {
  if (!(spec.t_min > 0.0) || !(spec.t_max >= spec.t_min) || spec.t_points == 0)
    throw Error("real grid needs 0 < t_min <= t_max and at least one point");
  std::vector<double> ts(spec.t_points);
  const double l0 = std::log(spec.t_min), l1 = std::log(spec.t_max);
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double f = ts.size() == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(ts.size() - 1);
    ts[k] = std::exp(l0 + f * (l1 - l0));
  }
  ts.front() = spec.t_min;
  if (ts.size() > 1) ts.back() = spec.t_max;
  return ts;
}

std::vector<std::complex<double>> half_plane_grid(const GridSpec& spec) {
  if (!(spec.r_min > 0.0) || !(spec.r_max >= spec.r_min) || spec.hp_moduli == 0 || spec.hp_args == 0)
    throw Error("half-plane grid needs 0 < r_min <= r_max and positive counts");
  std::vector<std::complex<double>> zs;
  zs.reserve(spec.hp_moduli * spec.hp_args);
  const double l0 = std::log(spec.r_min), l1 = std::log(spec.r_max);
  for (std::size_t i = 0; i < spec.hp_moduli; ++i) {
    const double f = spec.hp_moduli == 1 ? 0.0
                                         : static_cast<double>(i) / static_cast<double>(spec.hp_moduli - 1);
    const double r = std::exp(l0 + f * (l1 - l0));
    for (std::size_t j = 0; j < spec.hp_args; ++j) {
      const double theta = pi * (static_cast<double>(j) + 0.5) / static_cast<double>(spec.hp_args);
      zs.push_back(std::polar(r, theta));
    }
  }
  return zs;
}

std::vector<ComplexSample> sample_half_plane(const FunctionExpr& e, const GridSpec& spec) {
  const auto grid = half_plane_grid(spec);
  std::vector<std::optional<ComplexSample>> slots(grid.size());
  parallel_for(grid.size(), spec.policy, [&](std::size_t i) {
    try {
      const auto w = eval_complex(e, grid[i], spec.eval);
      slots[i] = ComplexSample{grid[i], w, std::arg(w)};
    } catch (const Error&) {
    }
  });
  std::vector<ComplexSample> out;
  for (auto& s : slots)
    if (s) out.push_back(*s);
  return out;
}

Matrix loewner_matrix(const FunctionExpr& e, std::span<const double> points, const EvalConfig& cfg) {
  const std::size_t n = points.size();
  Matrix l(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    l(i, i) = eval_derivative(e, points[i], cfg);
    for (std::size_t j = i + 1; j < n; ++j) l(i, j) = l(j, i) = eval_divided(e, points[i], points[j], cfg);
  }
  return l;
}

VerificationReport loewner_test(const FunctionExpr& e, const GridSpec& spec) {
  VerificationReport r = make_report("loewner", spec);
  r.tolerances["tol"] = spec.tol;
  r.tolerances["min_separation"] = spec.min_separation;
  const std::vector<double> singular = singular_points(e);
  const std::size_t random_sets = spec.loewner_sets;
  const std::size_t total = random_sets + spec.fixed_point_sets.size();
  std::vector<Outcome> outcomes(total);
  parallel_for(total, spec.policy, [&](std::size_t k) {
    if (k < random_sets) {
      const auto xs = draw_point_set(sample_seed(spec.seed, "loewner", k), spec, singular);
      if (!xs) {
        outcomes[k].error = "no admissible point set after " + std::to_string(max_point_retries) +
                            " draws";
        return;
      }
      outcomes[k] = loewner_outcome(e, *xs, spec);
    } else {
      std::vector<double> xs = spec.fixed_point_sets[k - random_sets];
      std::sort(xs.begin(), xs.end());
      outcomes[k] = loewner_outcome(e, xs, spec);
    }
  });
  reduce(r, outcomes, spec.tol, spec.inconclusive_fraction);
  return r;
}

VerificationReport pick_test(const FunctionExpr& e, const GridSpec& spec) {
  return half_plane_test(e, spec, "pick", [](std::complex<double>, double arg_w) {
    return std::min(arg_w, pi - arg_w);
  });
}

VerificationReport arg_dominance_test(const FunctionExpr& e, const GridSpec& spec) {
  return half_plane_test(e, spec, "arg-dominance", [](std::complex<double> z, double arg_w) {
    return std::min(arg_w, std::arg(z) - arg_w);
  });
}

VerificationReport matrix_monotone_test(const FunctionExpr& e, const GridSpec& spec) {
  VerificationReport r = make_report("monotone", spec);
  r.tolerances["tol"] = spec.tol;
  r.tolerances["spectrum_min"] = spec.spectrum_min;
  r.tolerances["spectrum_max"] = spec.spectrum_max;

  const std::size_t random_trials = spec.trials * spec.dims.size();
  const bool want_pair = spec.inject_classical_pair &&
                         std::find(spec.dims.begin(), spec.dims.end(), 2) != spec.dims.end();
  std::vector<Outcome> outcomes(random_trials);
  parallel_for(random_trials, spec.policy, [&](std::size_t k) {
    const std::size_t d = spec.dims[k / std::max<std::size_t>(1, spec.trials)];
    if (d == 0) throw Error("matrix dimension must be >= 1");
    outcomes[k] = random_monotone_trial(e, d, sample_seed(spec.seed, "monotone", k), spec);
  });

  if (want_pair) {
    if (e.domain() == Domain::open_half_line) {
      r.notes.push_back("classical pair skipped: [[1,1],[1,1]] is singular and the domain is open");
    } else {
      SymmetricMatrix a(2), b(2);
      a.set(0, 0, 1.0), a.set(0, 1, 1.0), a.set(1, 1, 1.0);
      b.set(0, 0, 2.0), b.set(0, 1, 1.0), b.set(1, 1, 1.0);
      Outcome o = monotone_outcome(e, a, b, spec.eval);
      if (o.evaluated) {
        outcomes.push_back(std::move(o));
      } else {
        r.notes.push_back("classical pair skipped: " + o.error);
      }
    }
  }
  reduce(r, outcomes, spec.tol, spec.inconclusive_fraction);
  return r;
}

VerificationReport symmetry_test(const FunctionExpr& e, const GridSpec& spec) {
  VerificationReport r = make_report("symmetry", spec);
  r.tolerances["symmetry_tol"] = spec.symmetry_tol;
  const auto ts = real_grid(spec);
  std::vector<Outcome> outcomes(ts.size());
  parallel_for(ts.size(), spec.policy, [&](std::size_t i) {
    Outcome& o = outcomes[i];
    const double t = ts[i];
    try {
      const double h = eval_real(e, t, spec.eval);
      const double h_inv = eval_real(e, 1.0 / t, spec.eval);
      o.margin = -std::abs(h - t * h_inv) / (1.0 + std::abs(h));
      o.witness.fields["t"] = {t};
      o.witness.fields["h(t)"] = {h};
      o.witness.fields["t*h(1/t)"] = {t * h_inv};
      o.evaluated = true;
    } catch (const Error& err) {
      o.error = err.what();
    }
  });
  reduce(r, outcomes, spec.symmetry_tol, spec.inconclusive_fraction);
  return r;
}

VerificationReport lemma3_check(int n, std::size_t theta_count, std::size_t l_count) {
  if (n < 2) throw Error("lemma3: n must be >= 2");
  if (theta_count == 0 || l_count == 0) throw Error("lemma3: counts must be >= 1");
  constexpr double moduli[] = {0.25, 1.0, 4.0};
  constexpr double upper_slack = 1e-12;
  const double nn = static_cast<double>(n);

  VerificationReport r;
  r.test = "lemma3";
  r.tolerances["upper_slack"] = upper_slack;
  double worst = std::numeric_limits<double>::infinity();
  bool violated = false;
  for (double rho : moduli)
    for (std::size_t j = 0; j < theta_count; ++j) {
      const double theta = pi * (static_cast<double>(j) + 0.5) / static_cast<double>(theta_count);
      const auto z = std::polar(rho, theta);
      const double l_max = rho / (nn - 1.0);
      for (std::size_t k = 0; k < l_count; ++k) {
        const double l = l_max * static_cast<double>(k + 1) / static_cast<double>(l_count);
        const double arg_zl = std::arg(z - l);
        const double lower = arg_zl - theta;
        const double upper = (pi + (nn - 1.0) * theta) / nn - arg_zl;
        const double m = std::min(lower, upper);
        ++r.samples;
        if (!(lower > 0.0) || upper < -upper_slack) violated = true;
        if (m < worst) {
          worst = m;
          r.witness = Witness{{{"z", {z.real(), z.imag()}}, {"l", {l}}, {"n", {nn}}}};
        }
      }
    }
  r.margin = worst;
  r.verdict = violated ? Verdict::fail : Verdict::pass;

  VerificationReport sharp;
  sharp.test = "lemma3-sharpness";
  sharp.tolerances["excess"] = 1e-3;
  sharp.margin = std::numeric_limits<double>::infinity();
  bool all_violate = true;
  for (double rho : moduli) {
    const double theta = pi - 1e-3;
    const auto z = std::polar(rho, theta);
    const double l = (1.0 + 1e-3) * rho / (nn - 1.0);
    const double excess = std::arg(z - l) - (pi + (nn - 1.0) * theta) / nn;
    ++sharp.samples;
    sharp.margin = std::min(sharp.margin, excess);
    if (!(excess > 0.0)) all_violate = false;
  }
  sharp.verdict = all_violate ? Verdict::pass : Verdict::fail;
  sharp.notes.push_back("l = (1 + 1e-3)|z|/(n-1) at theta = pi - 1e-3 must break the upper bound");
  if (!sharp.passed()) r.verdict = Verdict::fail;
  r.sub_reports.push_back(std::move(sharp));
  return r;
}

VerificationReport certify(const FunctionExpr& e, const GridSpec& spec) {
  VerificationReport r = make_report("certify", spec);
  r.sub_reports.push_back(loewner_test(e, spec));
  r.sub_reports.push_back(pick_test(e, spec));
  r.sub_reports.push_back(matrix_monotone_test(e, spec));
  if (e.provenance().symmetric) r.sub_reports.push_back(symmetry_test(e, spec));

  r.margin = std::numeric_limits<double>::infinity();
  bool any_fail = false, any_inconclusive = false;
  for (const auto& s : r.sub_reports) {
    r.samples += s.samples;
    r.inconclusive += s.inconclusive;
    r.margin = std::min(r.margin, s.margin);
    if (s.verdict == Verdict::fail) {
      if (!any_fail) r.witness = s.witness;
      any_fail = true;
    }
    if (s.verdict == Verdict::inconclusive) any_inconclusive = true;
  }
  r.verdict = any_fail ? Verdict::fail : (any_inconclusive ? Verdict::inconclusive : Verdict::pass);
  const auto& prov = e.provenance();
  r.notes.push_back("license: " + prov.license);
  if (!prov.certified) r.notes.push_back("expression is not certified by construction");
  r.notes.insert(r.notes.end(), prov.notes.begin(), prov.notes.end());
  return r;
}

}  // namespace omf
