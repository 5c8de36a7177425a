#include <fracvc/kernel.hpp>

#include <sstream>

namespace fracvc {

AlphaContext make_context(int n, double alpha) {
  if (n < 1 || n > 3) {
    std::ostringstream msg;
    msg << "n out of range: dimension must be 1, 2 or 3 (got " << n << ")";
    throw Error(msg.str());
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    std::ostringstream msg;
    msg << "alpha out of range: order must lie in (0,1) (got " << alpha << ")";
    throw Error(msg.str());
  }
  return AlphaContext(n, alpha, normalization_constant(n, alpha));
}

double gamma_beta_ratio(double s) {
  if (!(s > 0.0)) throw Error("gamma_beta_ratio: s must be positive");
  return std::exp(std::lgamma(s / 2) + 0.5 * std::log(kPi) - std::lgamma((s + 1) / 2));
}

double mu_descent(const AlphaContext& ctx) {
  if (ctx.n() < 2) throw Error("no lower dimension: mu_descent needs n >= 2");
  return ctx.mu() * gamma_beta_ratio(ctx.n() + ctx.alpha());
}

double sphere_surface(int n) {
  switch (n) {
    case 1: return 2.0;
    case 2: return 2.0 * kPi;
    case 3: return 4.0 * kPi;
    default: throw Error("sphere_surface: unsupported dimension");
  }
}

double unit_ball_volume(int n) {
  switch (n) {
    case 1: return 2.0;
    case 2: return kPi;
    case 3: return 4.0 * kPi / 3.0;
    default: throw Error("unit_ball_volume: unsupported dimension");
  }
}

}  // namespace fracvc
