#ifndef FRACVC_KERNEL_HPP
#define FRACVC_KERNEL_HPP

#include <fracvc/types.hpp>

#include <cmath>

namespace fracvc {

/// Ambient dimension, fractional order and the matching normalization constant.
/// Immutable once built; construct through make_context().
class AlphaContext {
 public:
  int n() const { return n_; }
  double alpha() const { return alpha_; }
  double mu() const { return mu_; }

 private:
  friend AlphaContext make_context(int n, double alpha);
  AlphaContext(int n, double alpha, double mu) : n_(n), alpha_(alpha), mu_(mu) {}

  int n_;
  double alpha_;
  double mu_;
};

/// mu_{n,alpha} = 2^alpha pi^{-n/2} Gamma((n+alpha+1)/2) / Gamma((1-alpha)/2),
/// evaluated in log space.
template <typename Scalar>
Scalar normalization_constant(int n, Scalar alpha) {
  using std::exp;
  using std::lgamma;
  using std::log;
  const Scalar pi = Scalar(kPi);
  const Scalar log_mu = alpha * log(Scalar(2)) - Scalar(n) / 2 * log(pi) +
                        lgamma((Scalar(n) + alpha + 1) / 2) - lgamma((1 - alpha) / 2);
  return exp(log_mu);
}

AlphaContext make_context(int n, double alpha);

/// z / |z|^{n+alpha+1}. Throws on z = 0.
template <typename Derived>
PointT<typename Derived::Scalar> riesz_kernel(const Eigen::MatrixBase<Derived>& z,
                                              const AlphaContext& ctx) {
  using Scalar = typename Derived::Scalar;
  const Scalar r = z.norm();
  if (r == Scalar(0)) throw Error("kernel singularity: riesz_kernel evaluated at z = 0");
  return z / std::pow(r, Scalar(ctx.n()) + Scalar(ctx.alpha()) + 1);
}

/// mu_{n-1,alpha} obtained from mu_{n,alpha} through
/// mu_{n-1} = mu_n Gamma((n+alpha)/2) sqrt(pi) / Gamma((n+alpha+1)/2).
double mu_descent(const AlphaContext& ctx);

/// Gamma(s/2) sqrt(pi) / Gamma((s+1)/2) for s > 0.
double gamma_beta_ratio(double s);

/// H^{n-1}(S^{n-1}): 2, 2 pi, 4 pi.
double sphere_surface(int n);

/// Lebesgue measure of the unit ball of R^n.
double unit_ball_volume(int n);

}  // namespace fracvc

#endif  // FRACVC_KERNEL_HPP
