#include "srgkit/svg.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace srg::svg {

namespace {

struct Box {
  double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
  void add(double x, double y) {
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  bool valid() const { return x0 <= x1 && y0 <= y1; }
};

bool unbounded(const Region& r) {
  if (const auto* d = std::get_if<DiskAlgebraRegion>(&r)) return !d->bounded();
  return std::get<CoverRegion>(r).has_exterior();
}

void extent(const Region& r, Box& box) {
  if (const auto* d = std::get_if<DiskAlgebraRegion>(&r)) {
    for (const Complex& z : boundary_samples(*d, 180)) box.add(z.real(), z.imag());
    return;
  }
  const auto& c = std::get<CoverRegion>(r);
  for (const auto& b : c.balls()) {
    box.add(b.center.real() - b.radius, b.center.imag() - b.radius);
    box.add(b.center.real() + b.radius, b.center.imag() + b.radius);
  }
  if (c.has_exterior()) {
    const double e = c.exterior_radius();
    box.add(-e, -e);
    box.add(e, e);
  }
}

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(4) << v;
  return os.str();
}

}  // namespace

std::string render(const std::vector<Layer>& layers, const PlotOptions& opt) {
  Box box;
  box.add(0.0, 0.0);
  bool truncated = false;
  for (const auto& l : layers) {
    extent(l.region, box);
    truncated = truncated || unbounded(l.region);
  }
  if (truncated) {
    const double half = opt.truncation > 0.0
                            ? opt.truncation
                            : 1.5 * std::max({std::abs(box.x0), std::abs(box.x1),
                                              std::abs(box.y0), std::abs(box.y1), 1.0});
    box = Box{};
    box.add(-half, -half);
    box.add(half, half);
  }
  // square aspect, symmetric in the imaginary axis
  const double ymax = std::max(std::abs(box.y0), std::abs(box.y1));
  double w = box.x1 - box.x0, h = 2.0 * ymax;
  const double side = std::max({w, h, 1e-9}) * (1.0 + 2.0 * opt.margin);
  const double cx = 0.5 * (box.x0 + box.x1);
  const double vx0 = cx - 0.5 * side, vy1 = 0.5 * side;

  const int n = std::max(opt.raster, 16);
  const double cell = side / n;
  const double px = static_cast<double>(opt.width) / n, py = static_cast<double>(opt.height) / n;
  auto sx = [&](double x) { return (x - vx0) / side * opt.width; };
  auto sy = [&](double y) { return (vy1 - y) / side * opt.height; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\""
     << opt.height + 24 * static_cast<int>(layers.size() + 1) << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opt.title.empty()) os << "<title>" << opt.title << "</title>\n";

  std::vector<char> mask(static_cast<std::size_t>(n) * n);
  for (const auto& l : layers) {
    std::fill(mask.begin(), mask.end(), 0);
    auto centre = [&](int i, int k) { return Complex(vx0 + (k + 0.5) * cell, vy1 - (i + 0.5) * cell); };
    if (const auto* d = std::get_if<DiskAlgebraRegion>(&l.region)) {
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) mask[i * n + k] = d->contains(centre(i, k), 0.5 * cell);
    } else {
      const auto& c = std::get<CoverRegion>(l.region);
      for (const auto& b : c.balls()) {
        const double r = b.radius + 0.5 * cell;
        const int k0 = std::max(0, static_cast<int>(std::floor((b.center.real() - r - vx0) / cell)));
        const int k1 = std::min(n - 1, static_cast<int>(std::ceil((b.center.real() + r - vx0) / cell)));
        const int i0 = std::max(0, static_cast<int>(std::floor((vy1 - b.center.imag() - r) / cell)));
        const int i1 = std::min(n - 1, static_cast<int>(std::ceil((vy1 - b.center.imag() + r) / cell)));
        for (int i = i0; i <= i1; ++i)
          for (int k = k0; k <= k1; ++k)
            if (std::abs(centre(i, k) - b.center) <= r) mask[i * n + k] = 1;
      }
      if (c.has_exterior())
        for (int i = 0; i < n; ++i)
          for (int k = 0; k < n; ++k)
            if (std::abs(centre(i, k)) >= c.exterior_radius()) mask[i * n + k] = 1;
    }
    os << "<g fill=\"" << l.color << "\" fill-opacity=\"0.45\" shape-rendering=\"crispEdges\">\n";
    for (int i = 0; i < n; ++i) {
      int k = 0;
      while (k < n) {
        if (!mask[i * n + k]) {
          ++k;
          continue;
        }
        int e = k;
        while (e < n && mask[i * n + e]) ++e;
        os << "<rect x=\"" << num(k * px) << "\" y=\"" << num(i * py) << "\" width=\""
           << num((e - k) * px) << "\" height=\"" << num(py) << "\"/>\n";
        k = e;
      }
    }
    os << "</g>\n";
  }

  // axes
  os << "<g stroke=\"black\" stroke-width=\"1\">\n";
  if (vx0 <= 0.0 && vx0 + side >= 0.0)
    os << "<line x1=\"" << num(sx(0)) << "\" y1=\"0\" x2=\"" << num(sx(0)) << "\" y2=\"" << opt.height << "\"/>\n";
  os << "<line x1=\"0\" y1=\"" << num(sy(0)) << "\" x2=\"" << opt.width << "\" y2=\"" << num(sy(0)) << "\"/>\n";
  os << "</g>\n";
  os << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<text x=\"4\" y=\"" << num(sy(0) - 4) << "\">" << num(vx0) << "</text>\n";
  os << "<text x=\"" << opt.width - 60 << "\" y=\"" << num(sy(0) - 4) << "\">" << num(vx0 + side) << "</text>\n";
  os << "<text x=\"" << num(sx(0) + 4) << "\" y=\"14\">" << num(vy1) << "j</text>\n";
  int row = 0;
  for (const auto& l : layers) {
    const int y = opt.height + 18 + 24 * row++;
    os << "<rect x=\"8\" y=\"" << y - 11 << "\" width=\"14\" height=\"14\" fill=\"" << l.color
       << "\" fill-opacity=\"0.45\"/>\n";
    os << "<text x=\"30\" y=\"" << y << "\">" << l.label << (unbounded(l.region) ? " (truncated)" : "")
       << "</text>\n";
  }
  if (!opt.title.empty())
    os << "<text x=\"8\" y=\"" << opt.height + 18 + 24 * row << "\">" << opt.title << "</text>\n";
  os << "</g>\n</svg>\n";
  return os.str();
}

std::string separation_plot(const Region& phi_inverse, const Region& gzw, double tau,
                            const PlotOptions& opt) {
  std::vector<Layer> layers;
  layers.push_back({phi_inverse, "Phi^-1", "#d62728"});
  layers.push_back({scale_real(gzw, tau), "tau*G_zw, tau=" + num(tau), "#1f77b4"});
  return render(layers, opt);
}

}  // namespace srg::svg
