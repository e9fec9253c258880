#include <algorithm>
#include <cmath>

#include "cover_grid.hpp"
#include "region_internal.hpp"
#include "srgkit/error.hpp"
#include "srgkit/region.hpp"

namespace srg {

using detail::BallIndex;
using detail::Box;
using detail::CellGrid;
using detail::kSqrtHalf;

// ------------------------------------------------------------ to_cover

CoverRegion to_cover(const DiskAlgebraRegion& r, double resolution,
                     double truncation_radius) {
  if (!(resolution > 0.0)) throw InputError("resolution must be positive");
  const bool inf = r.contains_infinity();

  // degenerate upper disks pin the region to a single point
  for (const auto& d : r.upper()) {
    if (d.radius == 0.0) {
      const Complex c(d.center, 0.0);
      if (r.contains(c, 1e-12 * std::max(1.0, std::abs(d.center))))
        return {{Ball{c, 0.0}}, inf};
      return {{}, inf};
    }
  }

  Box box;
  double exterior = kInf;
  if (r.bounded()) {
    double x0 = -kInf, x1 = kInf, yr = kInf;
    for (const auto& d : r.upper()) {
      x0 = std::max(x0, d.lo());
      x1 = std::min(x1, d.hi());
      yr = std::min(yr, d.radius);
    }
    if (x0 > x1) return {{}, inf};
    box.add(Complex(x0, 0), 0);
    box.add(Complex(x1, yr), 0);
    box.add(Complex(x1, -yr), 0);
  } else {
    double T = truncation_radius;
    if (!(T > 0.0)) {
      T = 1.0;
      for (const auto& d : r.lower())
        T = std::max(T, 2.0 * (std::abs(d.center) + d.radius));
    }
    exterior = T;
    box.add(0.0, T);
  }

  const double h = resolution;
  const double rho = detail::cell_radius(h);
  CellGrid grid(box, h);
  std::size_t kept = 0;
  for (long ix = grid.ix_lo(); ix <= grid.ix_hi(); ++ix) {
    for (long iy = 0; iy <= grid.iy_half(); ++iy) {
      const Complex g = grid.center(ix, iy);
      bool keep = true;
      for (const auto& d : r.upper())
        if (std::abs(g - d.center) > d.radius + rho) {
          keep = false;
          break;
        }
      if (keep)
        for (const auto& d : r.lower())
          if (std::abs(g - d.center) + rho < d.radius) {
            keep = false;
            break;
          }
      if (keep && !r.bounded() && std::abs(g) > exterior + rho) keep = false;
      if (keep) {
        grid.mark(ix, iy);
        ++kept;
      }
    }
  }
  if (kept == 0) return {{}, inf, exterior};
  grid.mirror();
  return grid.finish(inf, exterior);
}

CoverRegion to_cover(const Region& r, double resolution) {
  if (const auto* c = std::get_if<CoverRegion>(&r)) return *c;
  return to_cover(std::get<DiskAlgebraRegion>(r), resolution);
}

CoverRegion to_cover_relative(const Region& r, double rel) {
  if (const auto* c = std::get_if<CoverRegion>(&r)) return *c;
  const auto& d = std::get<DiskAlgebraRegion>(r);
  double ext = kInf;
  for (const auto& u : d.upper()) ext = std::min(ext, 2.0 * u.radius);
  if (!std::isfinite(ext)) {
    ext = 0.0;
    for (const Complex& z : boundary_samples(d, 90)) ext = std::max(ext, 2.0 * std::abs(z));
    if (ext == 0.0) ext = 1.0;
  }
  return to_cover(d, rel * std::max(ext, 1e-12));
}

// ------------------------------------------------------------ pointwise maps

CoverRegion scale_real(const CoverRegion& r, double alpha) {
  if (alpha == 0.0 || !std::isfinite(alpha))
    throw InputError("scale_real requires a finite nonzero factor");
  std::vector<Ball> out(r.balls().begin(), r.balls().end());
  for (auto& b : out) b = {alpha * b.center, std::abs(alpha) * b.radius};
  return {std::move(out), r.contains_infinity(),
          r.exterior_radius() * std::abs(alpha),
          r.grid_step() * std::abs(alpha)};
}

CoverRegion shift_real(const CoverRegion& r, double c) {
  std::vector<Ball> out(r.balls().begin(), r.balls().end());
  for (auto& b : out) b.center += c;
  // {|z| >= R} + c lies in {|z| >= R - |c|}
  const double ext = r.has_exterior() ? std::max(0.0, r.exterior_radius() - std::abs(c))
                                      : kInf;
  // the lattice survives only integer multiples of the step
  double step = 0.0;
  if (r.grid_step() > 0.0) {
    const double k = c / r.grid_step();
    if (std::abs(k - std::round(k)) < 1e-9) step = r.grid_step();
  }
  return {std::move(out), r.contains_infinity(), ext, step};
}

CoverRegion mobius_inverse(const CoverRegion& r) {
  std::vector<Ball> out;
  out.reserve(r.size() + 1);
  bool inf = false;
  double ext = kInf;
  for (const auto& b : r.balls()) {
    const double m = std::abs(b.center);
    if (m > b.radius) {
      const double den = m * m - b.radius * b.radius;
      out.push_back({b.center / den, b.radius / den});
    } else {
      // ball around 0: image is {|w| >= 1/(m + r)} plus infinity
      inf = true;
      ext = std::min(ext, m + b.radius > 0 ? 1.0 / (m + b.radius) : kInf);
    }
  }
  if (r.has_exterior()) {
    out.push_back({0.0, r.exterior_radius() > 0 ? 1.0 / r.exterior_radius() : kInf});
    if (!std::isfinite(out.back().radius)) {
      out.pop_back();
      ext = 0.0;
    }
  }
  if (r.contains_infinity()) out.push_back({0.0, 0.0});
  return {std::move(out), inf, ext};
}

// ------------------------------------------------------------ pairwise ops

namespace {

double max_modulus(const CoverRegion& r) {
  double m = 0.0;
  for (const auto& b : r.balls()) m = std::max(m, std::abs(b.center) + b.radius);
  return m;
}

double min_modulus(const CoverRegion& r) {
  double m = kInf;
  for (const auto& b : r.balls())
    m = std::min(m, std::max(0.0, std::abs(b.center) - b.radius));
  return m;
}

double max_radius(const CoverRegion& r) {
  double m = 0.0;
  for (const auto& b : r.balls()) m = std::max(m, b.radius);
  return m;
}

// Balls that may touch the boundary of the union; with upper_only, only
// those with Im(center) >= 0 (pairs are mirrored afterwards, which is exact
// for conjugate-symmetric covers).
std::vector<Ball> boundary_balls(const CoverRegion& r, bool upper_only) {
  const auto mask = detail::boundary_mask(r);
  std::vector<Ball> out;
  const auto B = r.balls();
  for (std::size_t i = 0; i < B.size(); ++i)
    if (mask[i] && (!upper_only || B[i].center.imag() >= 0.0)) out.push_back(B[i]);
  return out;
}

double product_radius(const Ball& p, const Ball& q) {
  return std::abs(p.center) * q.radius + std::abs(q.center) * p.radius +
         p.radius * q.radius;
}

}  // namespace

// The boundary of A + B lies in dA + dB for compact A, B, so only boundary
// pairs are summed; enclosed components are then filled after a membership
// test at one cell each.
CoverRegion minkowski_sum(const CoverRegion& a, const CoverRegion& b,
                          const CoverOptions& opt) {
  if (a.is_empty() || b.is_empty()) return {};
  const bool inf = a.contains_infinity() || b.contains_infinity();
  double ext = kInf;
  if (a.has_exterior() && b.has_exterior()) {
    ext = 0.0;
  } else {
    if (a.has_exterior() && !b.balls().empty())
      ext = std::min(ext, a.exterior_radius() - max_modulus(b));
    if (b.has_exterior() && !a.balls().empty())
      ext = std::min(ext, b.exterior_radius() - max_modulus(a));
    if (ext < kInf) ext = std::max(0.0, ext);
  }
  if (a.balls().empty() || b.balls().empty()) return {{}, inf, ext};

  const Box ba = detail::box_of(a), bb = detail::box_of(b);
  Box box;
  box.add(Complex(ba.x0 + bb.x0, ba.y0 + bb.y0), 0);
  box.add(Complex(ba.x1 + bb.x1, ba.y1 + bb.y1), 0);
  CellGrid grid(box, detail::grid_step_for(box, opt.relative_resolution));
  const auto A = boundary_balls(a, true);
  const auto B = boundary_balls(b, false);
  for (const auto& p : A)
    for (const auto& q : B) grid.mark_ball(p.center + q.center, p.radius + q.radius);
  grid.mirror();
  const BallIndex index(b.balls());
  const auto all_a = a.balls();
  grid.fill([&](Complex z) {
    for (const auto& p : all_a)
      if (index.intersects(z - p.center, p.radius)) return true;
    return false;
  });
  return grid.finish(inf, ext);
}

// Same scheme for products: the boundary of AB lies in dA dB plus {0}.
CoverRegion minkowski_product(const CoverRegion& a, const CoverRegion& b,
                              const CoverOptions& opt) {
  if (a.is_empty() || b.is_empty()) return {};
  // 0 * inf = inf and inf * inf = inf
  const bool inf = a.contains_infinity() || b.contains_infinity();
  // {|z| >= R} times a set bounded away from 0 by m stays in {|z| >= R m}
  double ext = kInf;
  if (a.has_exterior()) {
    if (b.has_exterior()) ext = std::min(ext, a.exterior_radius() * b.exterior_radius());
    if (!b.balls().empty()) ext = std::min(ext, a.exterior_radius() * min_modulus(b));
  }
  if (b.has_exterior() && !a.balls().empty())
    ext = std::min(ext, b.exterior_radius() * min_modulus(a));
  if (a.balls().empty() || b.balls().empty()) return {{}, inf, ext};

  const auto A = boundary_balls(a, true);
  const auto B = boundary_balls(b, false);
  const bool has_zero = min_modulus(a) == 0.0 || min_modulus(b) == 0.0;
  Box box;
  if (has_zero) box.add(0.0, 0.0);
  for (const auto& p : A)
    for (const auto& q : B) box.add(p.center * q.center, product_radius(p, q));
  box.add(Complex(box.x0, -box.y0), 0);
  box.add(Complex(box.x1, -box.y1), 0);
  CellGrid grid(box, detail::grid_step_for(box, opt.relative_resolution));
  if (has_zero) grid.mark_ball(0.0, 0.0);
  for (const auto& p : A)
    for (const auto& q : B) grid.mark_ball(p.center * q.center, product_radius(p, q));
  grid.mirror();

  const BallIndex index(b.balls());
  const double mb = max_modulus(b), rb = max_radius(b);
  const auto all_a = a.balls();
  grid.fill([&](Complex z) {
    for (const auto& p : all_a) {
      const double m = std::abs(p.center);
      if (m <= p.radius) {
        if (std::abs(z) <= (m + p.radius) * mb) return true;
        continue;
      }
      const double reach = (mb * p.radius + p.radius * rb) / m;
      const Complex t = z / p.center;
      if (index.any_near(t, reach, [&](int j) {
            const Ball& q = b.balls()[j];
            return std::abs(z - p.center * q.center) <= product_radius(p, q);
          }))
        return true;
    }
    return false;
  });
  return grid.finish(inf, ext);
}

// ------------------------------------------------------------ completions

CoverRegion chord_completion(const CoverRegion& r, const CoverOptions& opt) {
  if (r.has_exterior()) return CoverRegion::whole_plane();
  if (r.balls().empty()) return r;
  Box box = detail::box_of(r);
  box.add(Complex(box.x0, -box.y1), 0);
  box.add(Complex(box.x1, -box.y0), 0);
  CellGrid grid(box, detail::grid_step_for(box, opt.relative_resolution));
  const double h = grid.step(), half = 0.5 * h;
  const long x0 = grid.ix_lo();
  std::vector<double> ymax(static_cast<std::size_t>(grid.ix_hi() - x0 + 1), -1.0);
  for (const auto& b : r.balls()) {
    const double x = b.center.real(), y = std::abs(b.center.imag());
    for (long ix = grid.ix_of(x - b.radius); ix <= grid.ix_of(x + b.radius); ++ix) {
      const double cx = ix * h;
      double dx = 0.0;
      if (x < cx - half) dx = cx - half - x;
      else if (x > cx + half) dx = x - cx - half;
      const double rem = b.radius * b.radius - dx * dx;
      if (rem < 0.0) continue;
      auto& m = ymax[static_cast<std::size_t>(ix - x0)];
      m = std::max(m, y + std::sqrt(rem));
    }
  }
  for (long ix = x0; ix <= grid.ix_hi(); ++ix) {
    const double m = ymax[static_cast<std::size_t>(ix - x0)];
    if (m < 0.0) continue;
    for (long iy = grid.iy_of(-m); iy <= grid.iy_of(m); ++iy) grid.mark(ix, iy);
  }
  return grid.finish(r.contains_infinity());
}

namespace {

// Range of |arg z| over the closed square centered at g with side h.
std::pair<double, double> abs_arg_range(Complex g, double h) {
  const double x0 = g.real() - 0.5 * h, x1 = g.real() + 0.5 * h;
  const double ya = g.imag() - 0.5 * h, yb = g.imag() + 0.5 * h;
  double y0, y1;
  if (ya <= 0.0 && yb >= 0.0) {
    y0 = 0.0;
    y1 = std::max(-ya, yb);
  } else {
    y0 = std::min(std::abs(ya), std::abs(yb));
    y1 = std::max(std::abs(ya), std::abs(yb));
  }
  if (y0 == 0.0 && x0 <= 0.0 && x1 >= 0.0) return {0.0, M_PI};
  double lo = kInf, hi = -kInf;
  for (double x : {x0, x1})
    for (double y : {y0, y1}) {
      const double t = std::atan2(y, x);
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
  return {lo, hi};
}

// Modulus range over the closed square centered at g with side h.
std::pair<double, double> modulus_range(Complex g, double h) {
  const double x0 = g.real() - 0.5 * h, x1 = g.real() + 0.5 * h;
  const double y0 = g.imag() - 0.5 * h, y1 = g.imag() + 0.5 * h;
  const double nx = (x0 <= 0.0 && x1 >= 0.0) ? 0.0 : std::min(std::abs(x0), std::abs(x1));
  const double ny = (y0 <= 0.0 && y1 >= 0.0) ? 0.0 : std::min(std::abs(y0), std::abs(y1));
  const double fx = std::max(std::abs(x0), std::abs(x1));
  const double fy = std::max(std::abs(y0), std::abs(y1));
  return {std::hypot(nx, ny), std::hypot(fx, fy)};
}

}  // namespace

// Points of modulus rho are binned into rings of width h; each ring keeps the
// widest (right arc) or narrowest (left arc) |arg| seen, and a cell is marked
// when some ring it meets reaches its angular range.
CoverRegion arc_completion(const CoverRegion& r, ArcSide side,
                           const CoverOptions& opt) {
  if (r.balls().empty()) return r;
  const double M = max_modulus(r);
  Box box;
  box.add(0.0, M);
  CellGrid grid(box, detail::grid_step_for(box, opt.relative_resolution));
  const double h = grid.step();
  const std::size_t rings = static_cast<std::size_t>(std::ceil(M / h)) + 3;
  const bool right = side == ArcSide::right;
  std::vector<double> theta(rings, right ? -1.0 : 4.0);
  auto ring = [&](double rho) {
    return std::min(rings - 1, static_cast<std::size_t>(std::max(0.0, rho / h)));
  };
  for (const auto& b : r.balls()) {
    const double m = std::abs(b.center);
    double t;
    if (m <= b.radius) {
      t = right ? M_PI : 0.0;
    } else {
      const double spread = std::asin(std::min(1.0, b.radius / m));
      const double phi = std::abs(std::arg(b.center));
      t = right ? std::min(M_PI, phi + spread) : std::max(0.0, phi - spread);
    }
    for (std::size_t k = ring(std::max(0.0, m - b.radius)); k <= ring(m + b.radius); ++k)
      theta[k] = right ? std::max(theta[k], t) : std::min(theta[k], t);
  }
  for (long ix = grid.ix_lo(); ix <= grid.ix_hi(); ++ix) {
    for (long iy = 0; iy <= grid.iy_half(); ++iy) {
      const Complex g = grid.center(ix, iy);
      const auto [rlo, rhi] = modulus_range(g, h);
      if (rlo > M) continue;
      const auto [tlo, thi] = abs_arg_range(g, h);
      bool hit = false;
      for (std::size_t k = ring(rlo); k <= ring(rhi) && !hit; ++k)
        hit = right ? theta[k] >= tlo : theta[k] <= thi;
      if (hit) grid.mark(ix, iy);
    }
  }
  grid.mirror();
  return grid.finish(r.contains_infinity(), r.exterior_radius());
}

// ------------------------------------------------------------ intersection

namespace {

// Balls of `a` that meet some ball of `b` or the exterior part of `b`.
std::vector<Ball> filter_balls(const CoverRegion& a, const CoverRegion& b) {
  std::vector<Ball> out;
  BallIndex idx(b.balls());
  for (const auto& ball : a.balls()) {
    const bool meets_ext = b.has_exterior() &&
                           std::abs(ball.center) + ball.radius >= b.exterior_radius();
    if (meets_ext || idx.intersects(ball.center, ball.radius)) out.push_back(ball);
  }
  return out;
}

}  // namespace

CoverRegion intersect(const CoverRegion& a, const CoverRegion& b) {
  const bool inf = a.contains_infinity() && b.contains_infinity();
  const double ext = std::max(a.exterior_radius(), b.exterior_radius());
  // each filtered side is a superset of the true intersection; a few rounds
  // of mutual filtering tighten both and the smaller one is returned
  CoverRegion a1(filter_balls(a, b), inf, ext, a.grid_step());
  CoverRegion b1(filter_balls(b, a1), inf, ext, b.grid_step());
  CoverRegion a2(filter_balls(a1, b1), inf, ext, a.grid_step());
  const double ra = rmin(a2), rb = rmin(b1);
  if (ra < rb || (ra == rb && a2.size() <= b1.size())) return a2;
  return b1;
}

CoverRegion improved_sum(const CoverRegion& a, const CoverRegion& b,
                         const CoverOptions& opt) {
  if (a.is_empty() || b.is_empty()) return {};
  const auto s1 = minkowski_sum(chord_completion(a, opt), b, opt);
  const auto s2 = minkowski_sum(a, chord_completion(b, opt), opt);
  return intersect(s1, s2);
}

CoverRegion improved_product(const CoverRegion& a, const CoverRegion& b,
                             const CoverOptions& opt) {
  if (a.is_empty() || b.is_empty()) return {};
  const auto p1 = minkowski_product(arc_completion(a, ArcSide::right, opt), b, opt);
  const auto p2 = minkowski_product(a, arc_completion(b, ArcSide::right, opt), opt);
  const auto p3 = minkowski_product(arc_completion(a, ArcSide::left, opt), b, opt);
  const auto p4 = minkowski_product(a, arc_completion(b, ArcSide::left, opt), opt);
  return intersect(intersect(p1, p2), intersect(p3, p4));
}

// ------------------------------------------------------------ (a + b)^-1

namespace {

// Bounding-ball hierarchy over a set of balls, split on the wider axis.
struct BallTree {
  struct Node {
    Complex c;
    double r = 0.0;
    int left = -1, right = -1;
  };
  std::vector<Ball> leaves;
  std::vector<Node> nodes;

  explicit BallTree(std::vector<Ball> b) : leaves(std::move(b)) {
    if (!leaves.empty()) build(0, static_cast<int>(leaves.size()));
  }

  int build(int lo, int hi) {
    Box box;
    for (int i = lo; i < hi; ++i) box.add(leaves[i].center, 0.0);
    const Complex mid(0.5 * (box.x0 + box.x1), 0.5 * (box.y0 + box.y1));
    Node n;
    n.c = mid;
    for (int i = lo; i < hi; ++i)
      n.r = std::max(n.r, std::abs(leaves[i].center - mid) + leaves[i].radius);
    const int id = static_cast<int>(nodes.size());
    nodes.push_back(n);
    if (hi - lo > 1) {
      const bool by_x = box.x1 - box.x0 >= box.y1 - box.y0;
      const int m = (lo + hi) / 2;
      std::nth_element(leaves.begin() + lo, leaves.begin() + m, leaves.begin() + hi,
                       [by_x](const Ball& p, const Ball& q) {
                         return by_x ? p.center.real() < q.center.real()
                                     : p.center.imag() < q.center.imag();
                       });
      const int l = build(lo, m);
      const int r = build(m, hi);
      nodes[id].left = l;
      nodes[id].right = r;
    }
    return id;
  }
};

double circle_scale(const DiskAlgebraRegion& r) {
  double s = 1.0;
  for (const auto& d : r.upper()) s = std::max(s, std::abs(d.center) + d.radius);
  for (const auto& d : r.lower()) s = std::max(s, std::abs(d.center) + d.radius);
  return s;
}

// Marks the image of da + B under z -> 1/conj(z), where B covers the boundary
// of the second summand, then fills enclosed components using `inside`.
CoverRegion invert_sum(const DiskAlgebraRegion& af, std::vector<Ball> B_leaves,
                       CellGrid& grid, bool zero_in,
                       const std::function<bool(Complex)>& inside) {
  const double h = grid.step();
  const double target = 0.5 * h;
  const double tol = 1e-12 * circle_scale(af);
  const BallTree tree(std::move(B_leaves));
  if (zero_in) grid.mark_ball(0.0, 0.0);

  auto emit = [&](const Complex& y, double ry) {
    const double my = std::abs(y);
    if (!(my > ry)) throw NumericalError("inverse_of_sum: sample reached the origin");
    const double den = my * my - ry * ry;
    grid.mark_ball(y / den, ry / den);
  };

  // arc [t0, t1] of circle (c, R) against tree node k
  std::function<void(double, double, double, double, int, int)> pair =
      [&](double c, double R, double t0, double t1, int k, int depth) {
        const double tm = 0.5 * (t0 + t1);
        const Complex s = c + std::polar(R, tm);
        const double rho = R * 0.5 * (t1 - t0);
        const auto& N = tree.nodes[k];
        const Complex y = s + N.c;
        const double ry = rho + N.r;
        const double my = std::abs(y);
        if (my > ry && ry / (my * my - ry * ry) <= target) {
          emit(y, ry);
          return;
        }
        const bool leaf = N.left < 0;
        const bool split_arc = depth < 60 && (leaf ? rho > 0.1 * N.r : rho >= N.r);
        if (split_arc) {
          for (const auto& [u0, u1] : {std::pair{t0, tm}, std::pair{tm, t1}}) {
            const Complex sh = c + std::polar(R, 0.5 * (u0 + u1));
            if (af.contains(sh, R * 0.5 * (u1 - u0) + tol)) pair(c, R, u0, u1, k, depth + 1);
          }
        } else if (!leaf) {
          pair(c, R, t0, t1, N.left, depth);
          pair(c, R, t0, t1, N.right, depth);
        } else {
          emit(y, ry);
        }
      };

  auto circle = [&](const Disk& d) {
    if (d.radius == 0.0) {
      const Complex s(d.center, 0.0);
      if (af.contains(s, tol))
        for (const auto& q : tree.leaves) emit(s + q.center, q.radius);
      return;
    }
    const int n0 = 64;  // upper half only; mirrored below
    for (int k = 0; k < n0; ++k) {
      const double t0 = M_PI * k / n0, t1 = M_PI * (k + 1) / n0;
      if (af.contains(d.center + std::polar(d.radius, 0.5 * (t0 + t1)),
                      d.radius * 0.5 * (t1 - t0) + tol))
        pair(d.center, d.radius, t0, t1, 0, 0);
    }
  };
  if (!tree.nodes.empty()) {
    for (const auto& d : af.upper()) circle(d);
    for (const auto& d : af.lower()) circle(d);
  }
  grid.mirror();

  grid.fill([&](Complex w) {
    const double m = std::abs(w);
    if (m == 0.0) return zero_in;
    return inside(w / (m * m));
  });
  return grid.finish();
}

// Handles the cases where a holds nothing finite; returns true if done.
bool trivial_inverse(const DiskAlgebraRegion& a, const DiskAlgebraRegion& af,
                     CoverRegion& out) {
  if (!af.is_empty()) return false;
  out = a.contains_infinity() ? CoverRegion::zero() : CoverRegion{};  // (inf + b)^-1 = {0}
  return true;
}

}  // namespace

// Works in the inverted plane. The boundary of a + b lies in da + db, so
// arcs of the circles bounding a are paired with boundary pieces of b and
// pushed through z -> 1/conj(z); enclosed components are then filled.
CoverRegion inverse_of_sum(const DiskAlgebraRegion& a, const CoverRegion& b,
                           const CoverOptions& opt) {
  if (b.is_empty()) return {};
  const DiskAlgebraRegion af(a.upper(), a.lower(), false);
  CoverRegion out;
  if (trivial_inverse(a, af, out)) return out;

  // improved sum: a has the chord property -> a + b; otherwise a + chord(b)
  const CoverRegion bc = has_chord_property(a) ? b : chord_completion(b, opt);
  if (bc.has_exterior()) return CoverRegion::whole_plane();
  const auto all = bc.balls();
  if (all.empty()) return CoverRegion::zero();  // a + inf = inf

  // lower bound on dist(0, a + b)
  double d0 = kInf;
  for (const auto& q : all) d0 = std::min(d0, dist(af, -q.center) - q.radius);
  if (!(d0 > 0.0)) return CoverRegion::whole_plane();

  Box box;
  box.add(0.0, 1.0 / d0);
  CellGrid grid(box, detail::grid_step_for(box, opt.relative_resolution));
  const double tol = 1e-12 * circle_scale(af);
  const bool zero_in = !af.bounded() || a.contains_infinity() || bc.contains_infinity();
  auto B = boundary_balls(bc, false);
  return invert_sum(af, std::vector<Ball>(B.begin(), B.end()), grid, zero_in,
                    [&](Complex x) {
                      for (const auto& q : all)
                        if (dist(af, x - q.center) <= q.radius + tol) return true;
                      return false;
                    });
}

// Same, with b exact: its boundary (or that of its chord completion) is
// sampled directly, so no cover inflation of b enters the result.
CoverRegion inverse_of_sum(const DiskAlgebraRegion& a, const DiskAlgebraRegion& b,
                           const CoverOptions& opt) {
  const DiskAlgebraRegion af(a.upper(), a.lower(), false);
  const DiskAlgebraRegion bf(b.upper(), b.lower(), false);
  const bool b_finite_empty = bf.is_empty();
  if (b_finite_empty && !b.contains_infinity()) return {};
  CoverRegion out;
  if (trivial_inverse(a, af, out)) return out;
  if (b_finite_empty) return CoverRegion::zero();
  if (!bf.bounded()) return CoverRegion::whole_plane();

  const bool chord_a = has_chord_property(a);
  const detail::ChordHull hull = chord_a ? detail::ChordHull{} : detail::chord_hull(bf);
  auto contains = [&](Complex z, double t) {
    return chord_a ? bf.contains(z, t) : hull.contains(z, t);
  };
  auto sample = [&](double step) {
    return chord_a ? detail::boundary_cover(bf, step) : detail::boundary_cover(hull, step);
  };

  // dist(0, a + bc) from a coarse boundary cover; overlap checked separately
  const double scale = circle_scale(bf);
  const double tol = 1e-12 * std::max(scale, circle_scale(af));
  double step = 1e-3 * scale;
  double d0 = kInf;
  for (const auto& q : sample(step)) d0 = std::min(d0, dist(af, -q.center) - q.radius);
  Complex p;
  const bool has_p = detail::some_point(af, p);
  if (has_p && contains(-p, tol)) d0 = 0.0;
  if (!(d0 > 0.0)) return CoverRegion::whole_plane();

  Box box;
  box.add(0.0, 1.0 / d0);
  CellGrid grid(box, detail::grid_step_for(box, opt.relative_resolution));
  // leaf image radius about h/4
  step = std::min(step, 0.5 * grid.step() * d0 * d0);
  auto leaves = sample(step);
  const bool zero_in = !af.bounded() || a.contains_infinity() || b.contains_infinity();
  const std::vector<Ball> probe = leaves;
  return invert_sum(af, std::move(leaves), grid, zero_in, [&](Complex x) {
    // x in a + bc: the boundaries of a and x - bc meet, x - bc lies in a,
    // or a lies in x - bc
    for (const auto& q : probe)
      if (dist(af, x - q.center) <= q.radius + tol) return true;
    return has_p && contains(x - p, tol);
  });
}

// ------------------------------------------------------------ scalars

double rmin(const CoverRegion& r) {
  if (r.contains_infinity() || r.has_exterior()) return kInf;
  return max_modulus(r);
}

double rmin(const Region& r) {
  return std::visit([](const auto& x) { return rmin(x); }, r);
}

double dist(const CoverRegion& a, const CoverRegion& b) {
  if (a.is_empty() || b.is_empty()) return kInf;
  if (a.contains_infinity() && b.contains_infinity()) return 0.0;
  if (a.has_exterior() && b.has_exterior()) return 0.0;
  double d = kInf;
  if (a.has_exterior())
    for (const auto& q : b.balls())
      d = std::min(d, a.exterior_radius() - std::abs(q.center) - q.radius);
  if (b.has_exterior())
    for (const auto& p : a.balls())
      d = std::min(d, b.exterior_radius() - std::abs(p.center) - p.radius);
  if (a.balls().empty() || b.balls().empty()) return std::max(0.0, d);
  // overlapping unions are at distance 0; otherwise the closest points lie
  // on the two boundaries
  const BallIndex index(b.balls());
  for (const auto& p : a.balls())
    if (index.intersects(p.center, p.radius)) return 0.0;
  const auto A = boundary_balls(a, false), B = boundary_balls(b, false);
  for (const auto& p : A)
    for (const auto& q : B)
      d = std::min(d, std::abs(p.center - q.center) - p.radius - q.radius);
  return std::max(0.0, d);
}

double dist(const DiskAlgebraRegion& a, const CoverRegion& b) {
  if (b.is_empty() || a.is_empty()) return kInf;
  if (a.contains_infinity() && b.contains_infinity()) return 0.0;
  if (b.has_exterior() && !a.bounded()) return 0.0;
  double d = kInf;
  for (const auto& q : b.balls()) d = std::min(d, dist(a, q.center) - q.radius);
  if (b.has_exterior()) d = std::min(d, b.exterior_radius() - rmin(a));
  return std::max(0.0, d);
}

namespace {

bool single_constraint(const DiskAlgebraRegion& r) {
  return r.upper().size() + r.lower().size() == 1;
}

// a is a single disk or the exterior of a single disk
double dist_single(const DiskAlgebraRegion& a, const DiskAlgebraRegion& b) {
  if (!a.upper().empty()) {
    const Disk& d = a.upper().front();
    return std::max(0.0, detail::distance_range(b, d.center).first - d.radius);
  }
  if (!b.bounded()) return 0.0;
  const Disk& d = a.lower().front();
  return std::max(0.0, d.radius - detail::distance_range(b, d.center).second);
}

}  // namespace

double dist(const DiskAlgebraRegion& a, const DiskAlgebraRegion& b,
            double resolution) {
  if (a.is_empty() || b.is_empty()) return kInf;
  if (a.contains_infinity() && b.contains_infinity()) return 0.0;
  if (!a.bounded() && !b.bounded()) return 0.0;
  if (single_constraint(a)) return dist_single(a, b);
  if (single_constraint(b)) return dist_single(b, a);
  const DiskAlgebraRegion& inner = b.bounded() ? b : a;
  const DiskAlgebraRegion& outer = b.bounded() ? a : b;
  double h = resolution;
  if (!(h > 0.0)) {
    double ext = 0.0;
    for (const auto& d : inner.upper()) ext = std::max(ext, 2.0 * d.radius);
    h = 1e-3 * std::max(ext, 1e-12);
  }
  return dist(outer, to_cover(inner, h));
}

// ------------------------------------------------------------ property checks

bool has_chord_property(const CoverRegion& r, double tol) {
  if (r.has_exterior()) return r.exterior_radius() == 0.0;
  BallIndex idx(r.balls());
  const double s = std::max(tol, 1e-12);
  for (const auto& b : r.balls()) {
    const double x = b.center.real(), y = std::abs(b.center.imag());
    const long n = static_cast<long>(std::ceil(2.0 * y / s));
    for (long k = 0; k <= n; ++k) {
      const Complex q(x, n ? -y + 2.0 * y * k / n : 0.0);
      if (!idx.intersects(q, 0.0, tol)) return false;
    }
  }
  return true;
}

bool has_arc_property(const CoverRegion& r, ArcSide side, double tol) {
  BallIndex idx(r.balls());
  const double s = std::max(tol, 1e-12);
  auto covered = [&](Complex q) {
    if (r.has_exterior() && std::abs(q) >= r.exterior_radius() - tol) return true;
    return idx.intersects(q, 0.0, tol);
  };
  for (const auto& b : r.balls()) {
    const double rho = std::abs(b.center);
    if (rho <= tol) continue;
    const double phi = std::abs(std::arg(b.center));
    const double t0 = side == ArcSide::right ? -phi : phi;
    const double t1 = side == ArcSide::right ? phi : 2.0 * M_PI - phi;
    const long n = static_cast<long>(std::ceil((t1 - t0) * rho / s));
    for (long k = 0; k <= n; ++k) {
      const double t = n ? t0 + (t1 - t0) * k / n : t0;
      if (!covered(std::polar(rho, t))) return false;
    }
  }
  return true;
}

// ------------------------------------------------------------ either form

Region mobius_inverse(const Region& r) {
  return std::visit([](const auto& x) -> Region { return mobius_inverse(x); }, r);
}

Region scale_real(const Region& r, double alpha) {
  return std::visit([alpha](const auto& x) -> Region { return scale_real(x, alpha); }, r);
}

double dist(const Region& a, const Region& b) {
  const auto* da = std::get_if<DiskAlgebraRegion>(&a);
  const auto* db = std::get_if<DiskAlgebraRegion>(&b);
  const auto* ca = std::get_if<CoverRegion>(&a);
  const auto* cb = std::get_if<CoverRegion>(&b);
  if (da && db) return dist(*da, *db);
  if (da) return dist(*da, *cb);
  if (db) return dist(*db, *ca);
  return dist(*ca, *cb);
}

bool has_chord_property(const Region& r) {
  if (const auto* d = std::get_if<DiskAlgebraRegion>(&r)) return has_chord_property(*d);
  const auto& c = std::get<CoverRegion>(r);
  return has_chord_property(c, std::max(c.epsilon(), 1e-12));
}

bool is_empty(const Region& r) {
  if (const auto* d = std::get_if<DiskAlgebraRegion>(&r)) return d->is_empty();
  return std::get<CoverRegion>(r).is_empty();
}

}  // namespace srg
