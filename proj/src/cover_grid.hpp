#pragma once

// Internal helpers shared by the cover operations: a dense lattice
// accumulator that merges balls into grid cells, a boundary classifier for
// gridded covers and a uniform-grid spatial index.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "srgkit/region.hpp"

namespace srg::detail {

inline constexpr double kSqrtHalf = 0.70710678118654752;

struct Box {
  double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
  void add(Complex p, double r) {
    x0 = std::min(x0, p.real() - r);
    x1 = std::max(x1, p.real() + r);
    y0 = std::min(y0, p.imag() - r);
    y1 = std::max(y1, p.imag() + r);
  }
  bool empty() const { return x0 > x1; }
  double extent() const { return empty() ? 0.0 : std::max(x1 - x0, y1 - y0); }
  double max_abs() const {
    return std::max({std::abs(x0), std::abs(x1), std::abs(y0), std::abs(y1)});
  }
};

Box box_of(const CoverRegion& r);

/// Step for a given output box and relative resolution.
double grid_step_for(const Box& box, double relative_resolution);

/// Bitmap of lattice cells h*(Z + jZ); cell (ix, iy) stands for the closed
/// square of side h around its lattice point, covered by the ball of radius
/// h/sqrt(2). The y-range is symmetric so the set can be mirrored exactly.
class CellGrid {
 public:
  CellGrid(const Box& box, double h);
  double step() const { return h_; }
  bool empty_grid() const { return nx_ == 0; }

  /// Marks every cell whose square meets the closed ball (p, r).
  void mark_ball(Complex p, double r);
  void mark(long ix, long iy) { bits_[index(clamp_x(ix), clamp_y(iy))] = 1; }
  bool marked(long ix, long iy) const { return bits_[index(ix, iy)] != 0; }
  void mirror();
  /// Marks enclosed components of unmarked cells whose representative center
  /// satisfies inside(). Components of at most `small` cells are marked
  /// without testing. Components touching the frame are left unmarked.
  void fill(const std::function<bool(Complex)>& inside, std::size_t small = 4);
  std::size_t count() const;
  CoverRegion finish(bool infinity = false, double exterior = kInf) const;

  long ix_lo() const { return ix0_; }
  long ix_hi() const { return ix0_ + nx_ - 1; }
  long iy_half() const { return iyh_; }
  long ix_of(double x) const { return clamp_x(std::lround(x * inv_h_)); }
  long iy_of(double y) const { return clamp_y(std::lround(y * inv_h_)); }
  Complex center(long ix, long iy) const { return {ix * h_, iy * h_}; }

 private:
  long clamp_x(long ix) const { return std::clamp(ix, ix0_, ix0_ + nx_ - 1); }
  long clamp_y(long iy) const { return std::clamp(iy, -iyh_, iyh_); }
  std::size_t index(long ix, long iy) const {
    return static_cast<std::size_t>(ix - ix0_) * ny_ +
           static_cast<std::size_t>(iy + iyh_);
  }
  double h_, inv_h_;
  long ix0_ = 0, nx_ = 0, iyh_ = 0, ny_ = 0;
  std::vector<unsigned char> bits_;
};

/// Ball radius used for a lattice cell of step h (covers the closed square).
inline double cell_radius(double h) { return h * kSqrtHalf * (1.0 + 1e-12); }

/// True for balls that may touch the boundary of the union. Interior balls
/// (all 8 lattice neighbours present and covering their cells) can be
/// skipped by Minkowski sums and products without losing soundness.
std::vector<char> boundary_mask(const CoverRegion& r);

class BallIndex {
 public:
  explicit BallIndex(std::span<const Ball> balls);
  /// Calls f(i) for every ball whose center lies within `reach` of p plus
  /// its own radius; stops early when f returns true.
  template <class F>
  bool any_near(Complex p, double reach, F&& f) const {
    if (balls_.empty()) return false;
    const double R = reach + max_r_;
    const long cx0 = cell_x(p.real() - R), cx1 = cell_x(p.real() + R);
    const long cy0 = cell_y(p.imag() - R), cy1 = cell_y(p.imag() + R);
    for (long cx = cx0; cx <= cx1; ++cx)
      for (long cy = cy0; cy <= cy1; ++cy) {
        const std::size_t c = static_cast<std::size_t>(cx) * ny_ + cy;
        for (int k = start_[c]; k < start_[c + 1]; ++k)
          if (f(order_[k])) return true;
      }
    return false;
  }
  bool intersects(Complex p, double r, double tol = 0.0) const;

 private:
  long cell_x(double x) const {
    return std::clamp(static_cast<long>(std::floor((x - x0_) * inv_s_)), 0L,
                      nx_ - 1);
  }
  long cell_y(double y) const {
    return std::clamp(static_cast<long>(std::floor((y - y0_) * inv_s_)), 0L,
                      ny_ - 1);
  }
  std::span<const Ball> balls_;
  double x0_ = 0, y0_ = 0, inv_s_ = 1, max_r_ = 0;
  long nx_ = 1, ny_ = 1;
  std::vector<int> start_, order_;
};

}  // namespace srg::detail
