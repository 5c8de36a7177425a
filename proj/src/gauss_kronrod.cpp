#include <fracvc/gauss_kronrod.hpp>

namespace fracvc {

void append_clustered(std::vector<MappedPiece>& pieces, double a, double b, double power) {
  if (!(b > a)) return;
  const double m = 0.5 * (a + b);
  pieces.push_back({MappedPiece::Kind::cluster_left, a, m, power, 1.0});
  pieces.push_back({MappedPiece::Kind::cluster_right, m, b, power, 1.0});
}

void append_infinite(std::vector<MappedPiece>& pieces, double a, double decay) {
  if (!(a > 0.0)) throw Error("append_infinite: start of an infinite piece must be positive");
  if (!(decay > 0.0)) throw Error("append_infinite: decay exponent must be positive");
  pieces.push_back({MappedPiece::Kind::to_infinity, a, kInf, 1.0, decay});
}

}  // namespace fracvc
