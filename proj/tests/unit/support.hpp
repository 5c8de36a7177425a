#ifndef FRACVC_TEST_SUPPORT_HPP
#define FRACVC_TEST_SUPPORT_HPP

#include <fracvc/oracles.hpp>

#include <doctest.h>

#include <cmath>

namespace fracvc::test {

inline const GoldenTable& golden() {
  static const GoldenTable table = GoldenTable::load(FRACVC_DATA_DIR "/golden_values.txt");
  return table;
}

inline double golden_value(const std::string& name, int n, double alpha) { return golden().find(name, n, alpha).expected; }

inline double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }
inline double rel_err(const Point& a, const Point& b) { return (a - b).norm() / b.norm(); }

}  // namespace fracvc::test

#endif  // FRACVC_TEST_SUPPORT_HPP
