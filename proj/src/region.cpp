#include "srgkit/region.hpp"

#include <algorithm>
#include <cmath>

#include "geometry.hpp"
#include "region_internal.hpp"
#include "srgkit/error.hpp"

namespace srg {

Disk Disk::from_interval(double lo, double hi) {
  if (!(lo <= hi)) throw InputError("interval bounds must satisfy lo <= hi");
  return {(lo + hi) / 2.0, (hi - lo) / 2.0};
}

DiskAlgebraRegion::DiskAlgebraRegion(std::vector<Disk> upper,
                                     std::vector<Disk> lower, bool infinity)
    : upper_(std::move(upper)), lower_(std::move(lower)), infinity_(infinity) {
  for (const auto& d : upper_)
    if (!(d.radius >= 0.0) || !std::isfinite(d.center))
      throw InputError("disk radii must be non-negative and centers finite");
  // open disks of radius zero remove nothing
  std::erase_if(lower_, [](const Disk& d) {
    if (!(d.radius >= 0.0) || !std::isfinite(d.center))
      throw InputError("disk radii must be non-negative and centers finite");
    return d.radius == 0.0;
  });
}

DiskAlgebraRegion DiskAlgebraRegion::disk(Disk d) { return {{d}, {}, false}; }

DiskAlgebraRegion DiskAlgebraRegion::interval(double lo, double hi) {
  return disk(Disk::from_interval(lo, hi));
}

DiskAlgebraRegion DiskAlgebraRegion::point(double x) { return disk({x, 0.0}); }

bool DiskAlgebraRegion::contains(Complex z, double tol) const {
  for (const auto& d : upper_)
    if (std::abs(z - d.center) > d.radius + tol) return false;
  for (const auto& d : lower_)
    if (std::abs(z - d.center) < d.radius - tol) return false;
  return true;
}

namespace {

double region_scale(const DiskAlgebraRegion& r) {
  double s = 1.0;
  for (const auto& d : r.upper()) s = std::max(s, std::abs(d.center) + d.radius);
  for (const auto& d : r.lower()) s = std::max(s, std::abs(d.center) + d.radius);
  return s;
}

// Every compact region of this form attains its extreme real part and
// extreme modulus either where a circle crosses the real axis or where two
// circles intersect, so these points decide emptiness and rmin exactly.
std::vector<Complex> candidate_points(const DiskAlgebraRegion& r) {
  std::vector<Disk> circles = r.upper();
  circles.insert(circles.end(), r.lower().begin(), r.lower().end());
  std::vector<Complex> pts;
  pts.reserve(2 * circles.size() + 2 * circles.size() * circles.size());
  for (const auto& d : circles) {
    pts.emplace_back(d.center - d.radius, 0.0);
    pts.emplace_back(d.center + d.radius, 0.0);
  }
  for (std::size_t i = 0; i < circles.size(); ++i) {
    for (std::size_t k = i + 1; k < circles.size(); ++k) {
      for (const Complex& z : geom::circle_intersections(
               circles[i].center, circles[i].radius, circles[k].center,
               circles[k].radius)) {
        pts.push_back(z);
        pts.push_back(std::conj(z));
      }
    }
  }
  return pts;
}

}  // namespace

bool DiskAlgebraRegion::is_empty() const {
  if (infinity_ || upper_.empty()) return false;
  const double tol = 1e-10 * region_scale(*this);
  for (const Complex& z : candidate_points(*this))
    if (contains(z, tol)) return false;
  return true;
}

DiskAlgebraRegion scale_real(const DiskAlgebraRegion& r, double alpha) {
  if (alpha == 0.0 || !std::isfinite(alpha))
    throw InputError("scale_real requires a finite nonzero factor");
  auto map = [alpha](std::vector<Disk> v) {
    for (auto& d : v) d = {alpha * d.center, std::abs(alpha) * d.radius};
    return v;
  };
  return {map(r.upper()), map(r.lower()), r.contains_infinity()};
}

DiskAlgebraRegion shift_real(const DiskAlgebraRegion& r, double c) {
  auto map = [c](std::vector<Disk> v) {
    for (auto& d : v) d.center += c;
    return v;
  };
  return {map(r.upper()), map(r.lower()), r.contains_infinity()};
}

namespace {

// Half-planes are not representable; they are replaced by disks this large,
// always on the side that keeps the result a superset.
constexpr double kHalfPlaneRadius = 1e7;

}  // namespace

DiskAlgebraRegion mobius_inverse(const DiskAlgebraRegion& r) {
  std::vector<Disk> upper, lower;
  bool infinity = r.contains(0.0, 0.0);

  // image of the circle |z - c| = rad under z -> 1/conj(z)
  auto image = [](const Disk& d) {
    const double den = d.center * d.center - d.radius * d.radius;
    return Disk{d.center / den, d.radius / std::abs(den)};
  };

  for (const auto& d : r.upper()) {
    const double c = d.center, rad = d.radius;
    if (rad == 0.0) {
      if (c == 0.0) {
        // the region is at most {0} (plus inf), whose image is {inf} (plus 0)
        if (r.contains_infinity()) return {{Disk{0.0, 0.0}}, {}, true};
        return {{Disk{0.0, 0.0}}, {Disk{0.0, 1.0}}, r.contains(0.0, 0.0)};
      }
      upper.push_back({1.0 / c, 0.0});
    } else if (std::abs(c) > rad) {
      upper.push_back(image(d));
    } else if (std::abs(c) < rad) {
      lower.push_back(image(d));  // interior maps to the exterior
    } else {
      // 0 on the circle: image is the half-plane Re w >= 1/(2c) (c > 0) or
      // Re w <= 1/(2c) (c < 0); excluding a giant open disk keeps a superset
      const double a = 1.0 / (2.0 * c);
      lower.push_back({c > 0 ? a - kHalfPlaneRadius : a + kHalfPlaneRadius,
                       kHalfPlaneRadius});
    }
  }
  for (const auto& d : r.lower()) {
    const double c = d.center, rad = d.radius;
    if (std::abs(c) > rad) {
      lower.push_back(image(d));
    } else if (std::abs(c) < rad) {
      upper.push_back(image(d));  // removing a disk around 0 bounds the image
    } else {
      // removing an open disk touching 0: remove a giant disk inside the
      // image half-plane instead (removes less, so still a superset)
      const double a = 1.0 / (2.0 * c);
      lower.push_back({c > 0 ? a + kHalfPlaneRadius : a - kHalfPlaneRadius,
                       kHalfPlaneRadius});
    }
  }
  if (r.contains_infinity()) {
    // inf maps to 0, which must stay inside every upper disk
    for (auto& d : upper) d.radius = std::max(d.radius, std::abs(d.center));
    std::erase_if(lower,
                  [](const Disk& d) { return std::abs(d.center) < d.radius; });
  }
  return {std::move(upper), std::move(lower), infinity};
}

Disk minkowski_sum(const Disk& a, const Disk& b) {
  return {a.center + b.center, a.radius + b.radius};
}

double rmin(const DiskAlgebraRegion& r) {
  if (r.contains_infinity() || !r.bounded()) return kInf;
  const double tol = 1e-10 * region_scale(r);
  double best = -1.0;
  for (const Complex& z : candidate_points(r))
    if (r.contains(z, tol)) best = std::max(best, std::abs(z));
  return best < 0.0 ? 0.0 : best;
}

double dist(const DiskAlgebraRegion& a, Complex z) {
  double lb = 0.0;
  for (const auto& d : a.upper())
    lb = std::max(lb, std::abs(z - d.center) - d.radius);
  for (const auto& d : a.lower())
    lb = std::max(lb, d.radius - std::abs(z - d.center));
  return lb;
}

namespace detail {

// Along a real-centred circle the distance to a real point is monotone in the
// angle, so the same candidate set decides both extremes.
std::pair<double, double> distance_range(const DiskAlgebraRegion& r, double p) {
  const double tol = 1e-10 * std::max(region_scale(r), std::abs(p));
  double lo = r.contains(Complex(p, 0.0), tol) ? 0.0 : kInf;
  double hi = r.bounded() ? 0.0 : kInf;
  for (const Complex& z : candidate_points(r)) {
    if (!r.contains(z, tol)) continue;
    const double d = std::abs(z - p);
    lo = std::min(lo, d);
    if (r.bounded()) hi = std::max(hi, d);
  }
  return {lo, hi};
}

}  // namespace detail

bool has_chord_property(const DiskAlgebraRegion& r) {
  // intersections of real-centred disks are convex and symmetric
  return r.lower().empty();
}

std::vector<Complex> boundary_samples(const DiskAlgebraRegion& r,
                                      int per_circle) {
  std::vector<Complex> out;
  const double tol = 1e-9 * region_scale(r);
  auto sweep = [&](const std::vector<Disk>& circles) {
    for (const auto& d : circles) {
      if (!std::isfinite(d.radius)) continue;
      if (d.radius == 0.0) {
        if (r.contains(d.center, tol)) out.emplace_back(d.center, 0.0);
        continue;
      }
      for (int k = 0; k < per_circle; ++k) {
        const double th = 2.0 * M_PI * k / per_circle;
        const Complex z = d.center + std::polar(d.radius, th);
        if (r.contains(z, tol)) out.push_back(z);
      }
    }
  };
  sweep(r.upper());
  sweep(r.lower());
  return out;
}

// ---------------------------------------------------------------- covers

CoverRegion::CoverRegion(std::vector<Ball> balls, bool infinity,
                         double exterior_radius, double grid_step)
    : balls_(std::move(balls)),
      infinity_(infinity),
      exterior_(std::max(0.0, exterior_radius)),
      grid_step_(grid_step) {
  for (const auto& b : balls_)
    if (!(b.radius >= 0.0) || !std::isfinite(b.center.real()) ||
        !std::isfinite(b.center.imag()) || !std::isfinite(b.radius))
      throw NumericalError("cover ball with non-finite center or radius");
}

CoverRegion CoverRegion::from_points(std::span<const Complex> points,
                                     double epsilon, bool infinity) {
  if (!(epsilon >= 0.0)) throw InputError("cover radius must be non-negative");
  std::vector<Ball> balls;
  balls.reserve(points.size());
  for (const Complex& p : points) balls.push_back({p, epsilon});
  return {std::move(balls), infinity};
}

CoverRegion CoverRegion::ball(Complex center, double radius) {
  return {{Ball{center, radius}}};
}

CoverRegion CoverRegion::zero() { return ball(0.0, 0.0); }

CoverRegion CoverRegion::infinity_only() { return {{}, true}; }

CoverRegion CoverRegion::whole_plane() { return {{}, true, 0.0}; }

double CoverRegion::epsilon() const {
  double e = 0.0;
  for (const auto& b : balls_) e = std::max(e, b.radius);
  return e;
}

bool CoverRegion::covers(Complex z, double tol) const {
  if (has_exterior() && std::abs(z) >= exterior_ - tol) return true;
  for (const auto& b : balls_)
    if (std::abs(z - b.center) <= b.radius + tol) return true;
  return false;
}

CoverRegion CoverRegion::symmetrized() const {
  std::vector<Ball> out = balls_;
  for (const auto& b : balls_)
    if (b.center.imag() != 0.0) out.push_back({std::conj(b.center), b.radius});
  return {std::move(out), infinity_, exterior_, grid_step_};
}

}  // namespace srg

namespace srg::detail {

namespace {

// Height of the intersection of the upper disks at real part x (< 0 if the
// column is empty).
double upper_height(const DiskAlgebraRegion& r, double x) {
  double y = kInf;
  for (const auto& d : r.upper()) {
    const double dx = x - d.center;
    const double rem = d.radius * d.radius - dx * dx;
    if (rem < 0.0) return -1.0;
    y = std::min(y, std::sqrt(rem));
  }
  return y;
}

// Top of the U column minus the tallest lower disk over it.
double column_slack(const DiskAlgebraRegion& r, double x) {
  const double yu = upper_height(r, x);
  if (yu < 0.0) return -1.0;
  double yl = -kInf;
  for (const auto& d : r.lower()) {
    const double dx = x - d.center;
    if (std::abs(dx) < d.radius) yl = std::max(yl, std::sqrt(d.radius * d.radius - dx * dx));
  }
  return yu - yl;
}

void sample_circle(const Disk& d, double step, std::vector<Complex>& out) {
  if (d.radius == 0.0) {
    out.emplace_back(d.center, 0.0);
    return;
  }
  const long n = std::max(8L, static_cast<long>(std::ceil(2.0 * M_PI * d.radius / step)));
  for (long k = 0; k < n; ++k)
    out.push_back(d.center + std::polar(d.radius, 2.0 * M_PI * (k + 0.5) / n));
}

}  // namespace

bool ChordHull::contains(Complex z, double tol) const {
  if (unbounded) return true;
  if (!upper_part.contains(z, tol)) return false;
  for (const auto& [x0, x1] : strips)
    if (z.real() >= x0 - tol && z.real() <= x1 + tol) return true;
  return false;
}

// The top of U is removed exactly on the x-ranges between crossings of an
// upper circle with a lower circle, so the sign of the column slack is
// constant between consecutive candidate abscissae.
ChordHull chord_hull(const DiskAlgebraRegion& r) {
  ChordHull h;
  h.upper_part = DiskAlgebraRegion(r.upper(), {}, false);
  if (!r.bounded()) {
    h.unbounded = true;
    return h;
  }
  double x0 = -kInf, x1 = kInf;
  for (const auto& d : r.upper()) {
    x0 = std::max(x0, d.lo());
    x1 = std::min(x1, d.hi());
  }
  if (x0 > x1) return h;
  if (r.lower().empty()) {
    h.strips.emplace_back(x0, x1);
    return h;
  }
  std::vector<double> xs{x0, x1};
  for (const auto& u : r.upper())
    for (const auto& l : r.lower())
      for (const Complex& z : geom::circle_intersections(u.center, u.radius, l.center, l.radius))
        if (z.real() > x0 && z.real() < x1) xs.push_back(z.real());
  for (const auto& l : r.lower()) {
    if (l.lo() > x0 && l.lo() < x1) xs.push_back(l.lo());
    if (l.hi() > x0 && l.hi() < x1) xs.push_back(l.hi());
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  const double tol = 1e-12 * region_scale(r);
  auto add = [&](double a, double b) {
    if (!h.strips.empty() && h.strips.back().second >= a - tol)
      h.strips.back().second = std::max(h.strips.back().second, b);
    else
      h.strips.emplace_back(a, b);
  };
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (column_slack(r, xs[k]) >= -tol) add(xs[k], xs[k]);
    if (k + 1 < xs.size() && column_slack(r, 0.5 * (xs[k] + xs[k + 1])) >= 0.0)
      add(xs[k], xs[k + 1]);
  }
  return h;
}

std::vector<Ball> boundary_cover(const DiskAlgebraRegion& r, double step) {
  std::vector<Complex> pts;
  for (const auto& d : r.upper()) sample_circle(d, step, pts);
  for (const auto& d : r.lower()) sample_circle(d, step, pts);
  const double tol = 0.5 * step + 1e-12 * region_scale(r);
  std::vector<Ball> out;
  for (const Complex& z : pts)
    if (r.contains(z, tol)) out.push_back({z, 0.5 * step});
  return out;
}

std::vector<Ball> boundary_cover(const ChordHull& h, double step) {
  std::vector<Ball> out;
  if (h.unbounded || h.strips.empty()) return out;
  std::vector<Complex> pts;
  for (const auto& d : h.upper_part.upper()) sample_circle(d, step, pts);
  const double tol = 0.5 * step + 1e-12 * region_scale(h.upper_part);
  for (const Complex& z : pts)
    if (h.contains(z, tol)) out.push_back({z, 0.5 * step});
  // vertical walls at the strip ends
  for (const auto& [x0, x1] : h.strips) {
    for (double x : {x0, x1}) {
      const double y = upper_height(h.upper_part, x);
      if (y < 0.0) continue;
      const long n = std::max(1L, static_cast<long>(std::ceil(2.0 * y / step)));
      for (long k = 0; k < n; ++k)
        out.push_back({Complex(x, -y + (k + 0.5) * 2.0 * y / n), 0.5 * step});
      if (x0 == x1) break;
    }
  }
  return out;
}

bool some_point(const DiskAlgebraRegion& r, Complex& out) {
  if (!r.bounded()) {
    // far enough out, every lower disk is left behind
    double R = 1.0;
    for (const auto& d : r.lower()) R = std::max(R, 2.0 * (std::abs(d.center) + d.radius));
    out = Complex(R, 0.0);
    return true;
  }
  const double tol = 1e-10 * region_scale(r);
  for (const Complex& z : candidate_points(r))
    if (r.contains(z, tol)) {
      out = z;
      return true;
    }
  return false;
}

}  // namespace srg::detail
