#include <fracvc/fracops.hpp>

namespace fracvc {

namespace {

MeasureEstimate scaled(MeasureEstimate m, double mu) {
  m.value *= mu;
  m.abs_error_estimate *= mu;
  m.tail_error *= mu;
  return m;
}

}  // namespace

MeasureEstimate frac_gradient(const FieldSpec& f, const Point& x, const AlphaContext& ctx,
                              const QuadratureConfig& cfg) {
  return scaled(singular_integral_field(f, x, ctx, cfg), ctx.mu());
}

MeasureEstimate frac_gradient(const Operand& f, const Point& x, const AlphaContext& ctx, const QuadratureConfig& cfg,
                              BoundaryPolicy policy) {
  return scaled(singular_integral_operand(f, x, ctx, cfg, policy), ctx.mu());
}

MeasureEstimate frac_gradient_set(const SetSpec& set, const Point& x, const AlphaContext& ctx,
                                  const QuadratureConfig& cfg, BoundaryPolicy policy) {
  return scaled(singular_integral_set(set, x, ctx, cfg, policy), ctx.mu());
}

MeasureEstimate frac_divergence(const FieldSpec& phi, const Point& x, const AlphaContext& ctx,
                                const QuadratureConfig& cfg) {
  return scaled(singular_integral_divergence(phi, x, ctx, cfg), ctx.mu());
}

MeasureEstimate frac_nl_gradient(const Operand& f, const Operand& g, const Point& x, const AlphaContext& ctx,
                                 const QuadratureConfig& cfg, BoundaryPolicy policy) {
  return scaled(singular_integral_nl(f, g, x, ctx, cfg, policy), ctx.mu());
}

MeasureEstimate frac_nl_divergence(const Operand& f, const FieldSpec& phi, const Point& x, const AlphaContext& ctx,
                                   const QuadratureConfig& cfg) {
  return scaled(singular_integral_nl_divergence(f, phi, x, ctx, cfg), ctx.mu());
}

}  // namespace fracvc
