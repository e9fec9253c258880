#include "cover_grid.hpp"

#include <algorithm>

#include "srgkit/error.hpp"

namespace srg::detail {

Box box_of(const CoverRegion& r) {
  Box b;
  for (const auto& ball : r.balls()) b.add(ball.center, ball.radius);
  return b;
}

double grid_step_for(const Box& box, double relative_resolution) {
  if (!(relative_resolution > 0.0))
    throw InputError("relative resolution must be positive");
  double h = relative_resolution * box.extent();
  if (!(h > 0.0)) h = 1e-9 * std::max(1.0, box.max_abs());
  return h;
}

CellGrid::CellGrid(const Box& box, double h) : h_(h), inv_h_(1.0 / h) {
  if (box.empty()) return;
  ix0_ = static_cast<long>(std::floor(box.x0 * inv_h_)) - 2;
  const long ix1 = static_cast<long>(std::ceil(box.x1 * inv_h_)) + 2;
  nx_ = ix1 - ix0_ + 1;
  const double Y = std::max(std::abs(box.y0), std::abs(box.y1));
  iyh_ = static_cast<long>(std::ceil(Y * inv_h_)) + 2;
  ny_ = 2 * iyh_ + 1;
  const double cells = static_cast<double>(nx_) * static_cast<double>(ny_);
  if (cells > 6e7)
    throw NumericalError("cover grid too large; increase the resolution");
  bits_.assign(static_cast<std::size_t>(nx_ * ny_), 0);
}

void CellGrid::mark_ball(Complex p, double r) {
  if (nx_ == 0) return;
  const double x = p.real(), y = p.imag(), half = 0.5 * h_;
  const long a0 = ix_of(x - r), a1 = ix_of(x + r);
  for (long ix = a0; ix <= a1; ++ix) {
    const double cx = ix * h_;
    double dx = 0.0;
    if (x < cx - half) dx = cx - half - x;
    else if (x > cx + half) dx = x - cx - half;
    const double rem = r * r - dx * dx;
    if (rem < 0.0) continue;
    const double s = std::sqrt(rem);
    const long b0 = iy_of(y - s), b1 = iy_of(y + s);
    unsigned char* col = &bits_[index(ix, 0)];
    for (long iy = b0; iy <= b1; ++iy) col[iy] = 1;
  }
}

void CellGrid::mirror() {
  for (long ix = ix0_; ix < ix0_ + nx_; ++ix)
    for (long iy = 1; iy <= iyh_; ++iy) {
      auto& u = bits_[index(ix, iy)];
      auto& d = bits_[index(ix, -iy)];
      u = d = (u | d);
    }
}

void CellGrid::fill(const std::function<bool(Complex)>& inside,
                    std::size_t small) {
  if (nx_ == 0) return;
  std::vector<unsigned char> seen(bits_.size(), 0);
  std::vector<std::size_t> stack, comp;
  for (std::size_t start = 0; start < bits_.size(); ++start) {
    if (bits_[start] || seen[start]) continue;
    comp.clear();
    stack.assign(1, start);
    seen[start] = 1;
    bool frame = false;
    while (!stack.empty()) {
      const std::size_t c = stack.back();
      stack.pop_back();
      comp.push_back(c);
      const long ix = static_cast<long>(c / ny_);
      const long iy = static_cast<long>(c % ny_);
      if (ix == 0 || iy == 0 || ix == nx_ - 1 || iy == ny_ - 1) frame = true;
      auto visit = [&](long jx, long jy) {
        if (jx < 0 || jy < 0 || jx >= nx_ || jy >= ny_) return;
        const std::size_t k = static_cast<std::size_t>(jx) * ny_ + jy;
        if (bits_[k] || seen[k]) return;
        seen[k] = 1;
        stack.push_back(k);
      };
      visit(ix - 1, iy);
      visit(ix + 1, iy);
      visit(ix, iy - 1);
      visit(ix, iy + 1);
    }
    if (frame) continue;
    const std::size_t rep = comp.front();
    const Complex g((static_cast<long>(rep / ny_) + ix0_) * h_,
                    (static_cast<long>(rep % ny_) - iyh_) * h_);
    if (comp.size() <= small || inside(g))
      for (std::size_t c : comp) bits_[c] = 1;
  }
}

std::size_t CellGrid::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

CoverRegion CellGrid::finish(bool infinity, double exterior) const {
  std::vector<Ball> out;
  const double r = cell_radius(h_);
  for (long ix = ix0_; ix < ix0_ + nx_; ++ix)
    for (long iy = -iyh_; iy <= iyh_; ++iy)
      if (bits_[index(ix, iy)]) out.push_back({center(ix, iy), r});
  return {std::move(out), infinity, exterior, h_};
}

std::vector<char> boundary_mask(const CoverRegion& r) {
  const auto balls = r.balls();
  std::vector<char> mask(balls.size(), 1);
  const double h = r.grid_step();
  if (h <= 0.0 || balls.size() < 9) return mask;
  long x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  std::vector<std::pair<long, long>> idx(balls.size());
  for (std::size_t i = 0; i < balls.size(); ++i) {
    const long ix = std::lround(balls[i].center.real() / h);
    const long iy = std::lround(balls[i].center.imag() / h);
    idx[i] = {ix, iy};
    if (i == 0) {
      x0 = x1 = ix;
      y0 = y1 = iy;
    }
    x0 = std::min(x0, ix), x1 = std::max(x1, ix);
    y0 = std::min(y0, iy), y1 = std::max(y1, iy);
  }
  const long nx = x1 - x0 + 3, ny = y1 - y0 + 3;
  if (static_cast<double>(nx) * ny > 6e7) return mask;
  std::vector<float> rad(static_cast<std::size_t>(nx * ny), -1.0f);
  auto at = [&](long ix, long iy) -> float& {
    return rad[static_cast<std::size_t>((ix - x0 + 1) * ny + (iy - y0 + 1))];
  };
  for (std::size_t i = 0; i < balls.size(); ++i)
    at(idx[i].first, idx[i].second) =
        std::max(at(idx[i].first, idx[i].second),
                 static_cast<float>(balls[i].radius));
  const float need = static_cast<float>(h * kSqrtHalf * (1.0 - 1e-6));
  for (std::size_t i = 0; i < balls.size(); ++i) {
    if (balls[i].radius >= 1.5 * h) continue;
    const auto [ix, iy] = idx[i];
    bool interior = true;
    for (long dx = -1; dx <= 1 && interior; ++dx)
      for (long dy = -1; dy <= 1; ++dy)
        if (at(ix + dx, iy + dy) < need) {
          interior = false;
          break;
        }
    if (interior) mask[i] = 0;
  }
  return mask;
}

BallIndex::BallIndex(std::span<const Ball> balls) : balls_(balls) {
  if (balls.empty()) return;
  double x1 = -kInf, y1 = -kInf;
  x0_ = y0_ = kInf;
  for (const auto& b : balls) {
    x0_ = std::min(x0_, b.center.real());
    x1 = std::max(x1, b.center.real());
    y0_ = std::min(y0_, b.center.imag());
    y1 = std::max(y1, b.center.imag());
    max_r_ = std::max(max_r_, b.radius);
  }
  const double ext = std::max(x1 - x0_, y1 - y0_);
  double s = ext / std::max(1.0, std::sqrt(static_cast<double>(balls.size())));
  if (!(s > 0.0)) s = 1.0;
  s = std::max(s, ext / 2048.0);
  inv_s_ = 1.0 / s;
  nx_ = static_cast<long>((x1 - x0_) * inv_s_) + 1;
  ny_ = static_cast<long>((y1 - y0_) * inv_s_) + 1;
  const std::size_t ncell = static_cast<std::size_t>(nx_ * ny_);
  std::vector<int> count(ncell + 1, 0);
  std::vector<std::size_t> cell_of(balls.size());
  for (std::size_t i = 0; i < balls.size(); ++i) {
    cell_of[i] = static_cast<std::size_t>(cell_x(balls[i].center.real())) * ny_ +
                 cell_y(balls[i].center.imag());
    ++count[cell_of[i] + 1];
  }
  for (std::size_t c = 0; c < ncell; ++c) count[c + 1] += count[c];
  start_ = count;
  order_.resize(balls.size());
  for (std::size_t i = 0; i < balls.size(); ++i)
    order_[count[cell_of[i]]++] = static_cast<int>(i);
}

bool BallIndex::intersects(Complex p, double r, double tol) const {
  return any_near(p, r + tol, [&](int i) {
    return std::abs(p - balls_[i].center) <= r + balls_[i].radius + tol;
  });
}

}  // namespace srg::detail
