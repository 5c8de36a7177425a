#ifndef FRACVC_TYPES_HPP
#define FRACVC_TYPES_HPP

#include <Eigen/Core>

#include <limits>
#include <stdexcept>
#include <string>

namespace fracvc {

/// Points of R^n, n <= 3. Dynamic size with a fixed upper bound, so no heap traffic.
template <typename Scalar>
using PointT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, 0, 3, 1>;

/// Small value vectors (an n-vector plus a few bookkeeping components).
template <typename Scalar>
using ValueT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, 0, 8, 1>;

using Point = PointT<double>;
using Value = ValueT<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// All recoverable failures of the library are reported with this type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Point make_point(std::initializer_list<double> coords) {
  Point p(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (double c : coords) p(i++) = c;
  return p;
}

inline Point unit_vector(int n, int axis) {
  Point e = Point::Zero(n);
  e(axis) = 1.0;
  return e;
}

}  // namespace fracvc

#endif  // FRACVC_TYPES_HPP
