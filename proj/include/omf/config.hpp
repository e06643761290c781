#pragma once

#include <cstdint>

namespace omf {

/// Numerical knobs for expression evaluation.
struct EvalConfig {
  /// Relative radius around a removable singularity inside which the
  /// divided-difference factor is evaluated from its Taylor expansion.
  double singular_radius = 1e-2;
  /// Relative complex-step size used by eval_derivative.
  double complex_step = 1e-10;
};

/// How verifier kernels iterate over independent samples.  Both policies
/// produce identical results; `serial` is the reference path.
enum class ExecPolicy { serial, parallel };

}  // namespace omf
