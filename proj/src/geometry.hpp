#pragma once

#include <cmath>
#include <complex>
#include <vector>

namespace srg::geom {

// Intersection points with Im >= 0 of two circles centred on the real axis.
inline std::vector<std::complex<double>> circle_intersections(double c1,
                                                              double r1,
                                                              double c2,
                                                              double r2) {
  const double d = std::abs(c2 - c1);
  if (d == 0.0 || !std::isfinite(r1) || !std::isfinite(r2)) return {};
  const double x = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
  const double h2 = r1 * r1 - x * x;
  if (h2 < -1e-12 * (r1 * r1 + r2 * r2)) return {};
  const double re = c1 + (c2 > c1 ? x : -x);
  return {{re, std::sqrt(std::max(0.0, h2))}};
}

}  // namespace srg::geom
