#pragma once

#include <utility>
#include <vector>

#include "srgkit/region.hpp"

namespace srg::detail {

/// Smallest and largest distance from the real point p to r (exact up to
/// rounding; the largest is +inf for unbounded r).
std::pair<double, double> distance_range(const DiskAlgebraRegion& r, double p);


/// Chord completion of a disk-algebra region: the intersection U of its
/// upper disks restricted to the closed x-intervals where the top of U is
/// not removed by a lower disk. Exact for bounded regions.
struct ChordHull {
  DiskAlgebraRegion upper_part;
  std::vector<std::pair<double, double>> strips;
  bool unbounded = false;  // whole plane
  bool contains(Complex z, double tol) const;
  bool empty() const { return !unbounded && strips.empty(); }
};

ChordHull chord_hull(const DiskAlgebraRegion& r);

/// Points with spacing <= step along the boundary; each returned ball of
/// radius step/2 covers its piece of boundary.
std::vector<Ball> boundary_cover(const DiskAlgebraRegion& r, double step);
std::vector<Ball> boundary_cover(const ChordHull& h, double step);

/// Some point of r, if r has a finite point.
bool some_point(const DiskAlgebraRegion& r, Complex& out);

}  // namespace srg::detail
