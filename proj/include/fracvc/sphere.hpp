#ifndef FRACVC_SPHERE_HPP
#define FRACVC_SPHERE_HPP

#include <fracvc/gauss_kronrod.hpp>
#include <fracvc/types.hpp>

#include <cmath>
#include <vector>

namespace fracvc {

struct SphereResult {
  Value value;
  double error = 0.0;
  long evaluations = 0;
  bool converged = true;
};

/// Integral over S^{n-1} of f(theta) dH^{n-1}. f returns dim + 1 components: the
/// integrand proper and, last, a nonnegative error density that is integrated along
/// and added to the reported error. For n = 2 the angular range is split at
/// `angles` (polar angles where f is not smooth) and each piece is clustered toward
/// its ends with power `power`.
template <class F>
SphereResult sphere_integrate(int n, F&& f, int dim, const std::vector<double>& angles, double power,
                              const QuadOptions& opt) {
  SphereResult out;
  QuadOptions o = opt;
  o.controlled_components = dim;
  auto finish = [&](const QuadResult& q) {
    out.value = q.value.head(dim);
    out.error = q.error + std::abs(q.value(dim));
    out.evaluations = q.evaluations;
    out.converged = q.converged;
  };
  if (n == 1) {
    const Value a = f(make_point({1.0}));
    const Value b = f(make_point({-1.0}));
    out.value = (a + b).head(dim);
    out.error = std::abs(a(dim)) + std::abs(b(dim));
    out.evaluations = 2;
    return out;
  }
  if (n == 2) {
    std::vector<MappedPiece> pieces;
    if (angles.empty()) {
      for (int k = 0; k < 4; ++k) pieces.push_back({MappedPiece::Kind::plain, k * kPi / 2, (k + 1) * kPi / 2});
    } else {
      std::vector<double> br(angles);
      br.push_back(br.front() + 2.0 * kPi);
      for (std::size_t k = 0; k + 1 < br.size(); ++k) append_clustered(pieces, br[k], br[k + 1], power);
    }
    auto g = [&](double phi) -> Value { return f(make_point({std::cos(phi), std::sin(phi)})); };
    finish(integrate_pieces(g, pieces, dim + 1, o));
    return out;
  }
  long inner_evals = 0;
  bool inner_ok = true;
  QuadOptions oi = o;
  oi.rel_tol = 0.3 * o.rel_tol;
  auto outer = [&](double psi) -> Value {
    const double s = std::sin(psi), c = std::cos(psi);
    auto inner = [&](double phi) -> Value { return f(make_point({s * std::cos(phi), s * std::sin(phi), c})); };
    const std::array<double, 5> br{0.0, kPi / 2, kPi, 1.5 * kPi, 2.0 * kPi};
    QuadResult q = integrate(inner, std::span<const double>(br), dim + 1, oi);
    inner_evals += q.evaluations;
    inner_ok = inner_ok && q.converged;
    Value v = q.value * s;
    v(dim) = (std::abs(q.value(dim)) + q.error) * s;
    return v;
  };
  const std::array<double, 3> br{0.0, kPi / 2, kPi};
  QuadResult q = integrate(outer, std::span<const double>(br), dim + 1, o);
  finish(q);
  out.evaluations = inner_evals;
  out.converged = q.converged && inner_ok;
  return out;
}

}  // namespace fracvc

#endif  // FRACVC_SPHERE_HPP
