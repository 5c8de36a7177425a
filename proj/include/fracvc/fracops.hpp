#ifndef FRACVC_FRACOPS_HPP
#define FRACVC_FRACOPS_HPP

#include <fracvc/fields.hpp>
#include <fracvc/geometry.hpp>
#include <fracvc/kernel.hpp>
#include <fracvc/quadrature.hpp>

#include <optional>

namespace fracvc {

/// nabla^alpha f(x) for a scalar Lipschitz field.
MeasureEstimate frac_gradient(const FieldSpec& f, const Point& x, const AlphaContext& ctx,
                              const QuadratureConfig& cfg);
/// nabla^alpha of a product of fields and indicators.
MeasureEstimate frac_gradient(const Operand& f, const Point& x, const AlphaContext& ctx, const QuadratureConfig& cfg,
                              BoundaryPolicy policy = BoundaryPolicy::strict);
/// nabla^alpha chi_E(x), x off the boundary of E.
MeasureEstimate frac_gradient_set(const SetSpec& set, const Point& x, const AlphaContext& ctx,
                                  const QuadratureConfig& cfg, BoundaryPolicy policy = BoundaryPolicy::strict);
/// div^alpha phi(x) for a Lipschitz vector field.
MeasureEstimate frac_divergence(const FieldSpec& phi, const Point& x, const AlphaContext& ctx,
                                const QuadratureConfig& cfg);
/// nabla^alpha_NL(f, g)(x).
MeasureEstimate frac_nl_gradient(const Operand& f, const Operand& g, const Point& x, const AlphaContext& ctx,
                                 const QuadratureConfig& cfg, BoundaryPolicy policy = BoundaryPolicy::strict);
/// div^alpha_NL(f, phi)(x).
MeasureEstimate frac_nl_divergence(const Operand& f, const FieldSpec& phi, const Point& x, const AlphaContext& ctx,
                                   const QuadratureConfig& cfg);

enum class PerimeterMethod {
  /// Random lines: uniform direction and offset, exact one-dimensional pair integrals.
  monte_carlo,
  /// The same line decomposition integrated by nested adaptive quadrature (n <= 2).
  deterministic,
};

/// P_alpha(E; Omega); omega = nullopt means the whole space.
MeasureEstimate frac_perimeter(const SetSpec& set, const std::optional<SetSpec>& omega, const AlphaContext& ctx,
                               const QuadratureConfig& cfg, PerimeterMethod method = PerimeterMethod::monte_carlo);
/// P^L_alpha(E; A) = int_{E cap A} int_{A \ E} |x - y|^{-n-alpha}.
MeasureEstimate frac_perimeter_local(const SetSpec& set, const SetSpec& region, const AlphaContext& ctx,
                                     const QuadratureConfig& cfg,
                                     PerimeterMethod method = PerimeterMethod::monte_carlo);

}  // namespace fracvc

#endif  // FRACVC_FRACOPS_HPP
