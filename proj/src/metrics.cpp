#include "omf/metrics.hpp"

#include <cmath>
#include <string>

#include "omf/detail/format.hpp"
#include "omf/errors.hpp"
#include "omf/verify.hpp"

namespace omf {

using detail::format_number;

double mc_function(const FunctionExpr& e, double x, double y, const EvalConfig& cfg) {
  if (!(x > 0.0) || !(y > 0.0))
    throw DomainError("Morozova-Chentsov function needs x, y > 0, got x = " + format_number(x) +
                      ", y = " + format_number(y));
  return 1.0 / (y * eval_real(e, x / y, cfg));
}

MetricContext MetricContext::create(const FunctionExpr& e, const DensityMatrix& rho,
                                    const MetricOptions& opt) {
  MetricContext ctx;
  ctx.e_ = e;
  ctx.opt_ = opt;
  ctx.symmetry_ = symmetry_test(e, opt.grid);
  if (!ctx.symmetry_.passed())
    throw ConstructionError("metric: function does not satisfy h(t) = t h(1/t) (margin " +
                            format_number(ctx.symmetry_.margin) + ")");
  const double at_one = eval_real(e, 1.0, opt.grid.eval);
  if (std::abs(at_one - 1.0) > opt.normalization_tol) {
    if (!opt.normalize)
      throw ConstructionError("metric: function is not normalized, f(1) = " +
                              format_number(at_one) + " (use normalize)");
    ctx.scale_ = 1.0 / at_one;
  }

  ctx.eig_ = eigh(rho.matrix());
  for (double l : ctx.eig_.values)
    if (l < opt.min_eigenvalue)
      throw DomainError("metric: state eigenvalue " + format_number(l) +
                        " is below the positivity floor " + format_number(opt.min_eigenvalue));

  const std::size_t d = ctx.dim();
  ctx.kernel_.resize(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      ctx.kernel_[i * d + j] =
          mc_function(e, ctx.eig_.values[i], ctx.eig_.values[j], opt.grid.eval) / ctx.scale_;
  return ctx;
}

namespace {

ComplexMatrix rotate(const MetricContext& ctx, const HermitianMatrix& a) {
  const ComplexMatrix& u = ctx.eigenvectors();
  return adjoint(u) * a.dense() * u;
}

void check_tangent(const MetricContext& ctx, const HermitianMatrix& a, const char* name) {
  if (a.dim() != ctx.dim())
    throw Error(std::string("metric: ") + name + " has dimension " + std::to_string(a.dim()) +
                ", state has " + std::to_string(ctx.dim()));
  const double tr = a.trace().real();
  if (std::abs(tr) > ctx.options().traceless_tol)
    throw DomainError(std::string("metric: ") + name + " is not traceless (trace " +
                      format_number(tr) + ")");
}

}  // namespace

double metric_form(const MetricContext& ctx, const HermitianMatrix& a, const HermitianMatrix& b) {
  check_tangent(ctx, a, "A");
  check_tangent(ctx, b, "B");
  const ComplexMatrix ah = rotate(ctx, a);
  const ComplexMatrix bh = rotate(ctx, b);
  const std::size_t d = ctx.dim();
  double k = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) k += (std::conj(ah(i, j)) * bh(i, j)).real() * ctx.kernel(i, j);
  return k;
}

}  // namespace omf
