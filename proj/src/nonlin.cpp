#include "srgkit/nonlin.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "srgkit/error.hpp"

namespace srg {

void SectorBound::validate() const {
  if (channels.empty()) throw InputError("sector bound needs at least one channel");
  for (const auto& [mu, la] : channels)
    if (!std::isfinite(mu) || !std::isfinite(la) || !(mu <= la))
      throw InputError("sector channels need finite mu <= lambda");
}

NamedNonlinearity NamedNonlinearity::saturation(double level, double inner,
                                                double outer) {
  if (!(level > 0.0) || !std::isfinite(inner) || !std::isfinite(outer))
    throw InputError("saturation needs level > 0 and finite slopes");
  NamedNonlinearity n;
  n.kind_ = Kind::saturation;
  n.params_ = {level, inner, outer};
  return n;
}

NamedNonlinearity NamedNonlinearity::tanh(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw InputError("tanh needs finite a, b");
  NamedNonlinearity n;
  n.kind_ = Kind::tanh;
  n.params_ = {a, b};
  return n;
}

NamedNonlinearity NamedNonlinearity::negated_tanh() {
  NamedNonlinearity n;
  n.kind_ = Kind::negated_tanh;
  return n;
}

NamedNonlinearity NamedNonlinearity::custom(
    std::vector<std::pair<double, double>> table,
    std::pair<double, double> declared_sector) {
  if (table.size() < 2) throw InputError("custom nonlinearity needs >= 2 samples");
  std::sort(table.begin(), table.end());
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (!std::isfinite(table[i].first) || !std::isfinite(table[i].second))
      throw InputError("custom nonlinearity samples must be finite");
    if (i && !(table[i].first > table[i - 1].first))
      throw InputError("custom nonlinearity abscissae must be distinct");
  }
  if (!(declared_sector.first <= declared_sector.second))
    throw InputError("declared sector needs mu <= lambda");
  NamedNonlinearity n;
  n.kind_ = Kind::custom_pointwise;
  n.table_ = std::move(table);
  n.declared_ = declared_sector;
  return n;
}

double NamedNonlinearity::base(double x) const {
  switch (kind_) {
    case Kind::saturation: {
      const double L = params_[0], a = params_[1], b = params_[2];
      if (std::abs(x) <= L) return a * x;
      const double s = x > 0 ? 1.0 : -1.0;
      return s * a * L + b * (x - s * L);
    }
    case Kind::tanh:
      return params_[0] * std::tanh(x) + params_[1] * x;
    case Kind::negated_tanh:
      return -std::tanh(x);
    case Kind::custom_pointwise: {
      auto it = std::upper_bound(table_.begin(), table_.end(), x,
                                 [](double v, const auto& p) { return v < p.first; });
      std::size_t i = static_cast<std::size_t>(it - table_.begin());
      i = std::clamp<std::size_t>(i, 1, table_.size() - 1);
      const auto& [x0, y0] = table_[i - 1];
      const auto& [x1, y1] = table_[i];
      return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
    }
  }
  return 0.0;
}

std::pair<double, double> NamedNonlinearity::base_sector() const {
  switch (kind_) {
    case Kind::saturation:
      return {std::min(params_[1], params_[2]), std::max(params_[1], params_[2])};
    case Kind::tanh: {
      // tanh' ranges over (0, 1]
      const double a = params_[0], b = params_[1];
      return {b + std::min(a, 0.0), b + std::max(a, 0.0)};
    }
    case Kind::negated_tanh:
      return {-1.0, 0.0};
    case Kind::custom_pointwise:
      return declared_;
  }
  return {0.0, 0.0};
}

double NamedNonlinearity::operator()(double x) const { return scale_ * base(x) + shift_ * x; }

std::pair<double, double> NamedNonlinearity::sector() const {
  const auto [mu, la] = base_sector();
  return {scale_ * mu + shift_, scale_ * la + shift_};
}

double NamedNonlinearity::lipschitz() const {
  const auto [mu, la] = sector();
  return std::max(std::abs(mu), std::abs(la));
}

NamedNonlinearity NamedNonlinearity::transformed(double sigma, double kappa) const {
  if (!(sigma > 0.0)) throw InputError("loop transform scale must be positive");
  NamedNonlinearity n = *this;
  n.scale_ = sigma * scale_;
  n.shift_ = sigma * shift_ + kappa;
  return n;
}

std::string NamedNonlinearity::kind_name() const {
  switch (kind_) {
    case Kind::saturation: return "saturation";
    case Kind::tanh: return "tanh";
    case Kind::negated_tanh: return "negated_tanh";
    case Kind::custom_pointwise: return "custom_pointwise";
  }
  return "";
}

NamedNonlinearity::Kind NamedNonlinearity::kind_from_name(const std::string& name) {
  if (name == "saturation") return Kind::saturation;
  if (name == "tanh") return Kind::tanh;
  if (name == "negated_tanh") return Kind::negated_tanh;
  if (name == "custom_pointwise") return Kind::custom_pointwise;
  throw InputError("unknown nonlinearity kind '" + name + "'");
}

DiskAlgebraRegion diagonal_nl_region(const SectorBound& s) {
  s.validate();
  if (s.channels.empty()) throw InputError("sector has no channels");
  double mu = kInf, la = -kInf;
  for (const auto& [m, l] : s.channels) {
    mu = std::min(mu, m);
    la = std::max(la, l);
  }
  return DiskAlgebraRegion::interval(mu, la);
}

DiskAlgebraRegion norm_ball_region(double gamma) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw InputError("gain bound must be finite and >= 0");
  return DiskAlgebraRegion::disk({0.0, gamma});
}

SectorBound loop_transform_sector(const SectorBound& s,
                                  const std::vector<double>& kappa,
                                  const std::vector<double>& sigma) {
  s.validate();
  if (kappa.size() != s.size() || sigma.size() != s.size())
    throw InputError("loop transform needs one shift and one scale per channel");
  SectorBound out{{}, s.incremental};
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(sigma[i] > 0.0)) throw InputError("loop transform scale must be positive");
    const auto [mu, la] = s.channels[i];
    out.channels.emplace_back(sigma[i] * mu + kappa[i], sigma[i] * la + kappa[i]);
  }
  return out;
}

SectorNormalization normalize_sectors(const SectorBound& s,
                                      std::optional<std::pair<double, double>> target) {
  s.validate();
  if (s.channels.empty()) throw InputError("sector has no channels");
  SectorNormalization n;
  if (target) {
    if (!(target->first <= target->second)) throw InputError("target sector needs mu <= lambda");
    n.target = *target;
  } else {
    double w = kInf;
    for (const auto& [mu, la] : s.channels)
      if (la > mu) w = std::min(w, la - mu);
    if (!std::isfinite(w)) w = 0.0;
    n.target = {-0.5 * w, 0.5 * w};
  }
  const auto [tm, tl] = n.target;
  for (const auto& [mu, la] : s.channels) {
    // a zero-width channel cannot be stretched; centre it instead
    const double sigma = (la > mu && tl > tm) ? (tl - tm) / (la - mu) : 1.0;
    const double kappa = (la > mu && tl > tm) ? tm - sigma * mu : 0.5 * (tm + tl) - mu;
    n.sigma.push_back(sigma);
    n.kappa.push_back(kappa);
  }
  return n;
}

SectorCheck verify_sector(const NamedNonlinearity& nl, std::pair<double, double> sector,
                          std::size_t samples, std::uint64_t seed, double range) {
  const auto [mu, la] = sector;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-range, range);
  std::uniform_real_distribution<double> small(-1e-3, 1e-3);
  SectorCheck c;
  double worst = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double x = U(rng);
    const double y = (k % 2) ? x + small(rng) * std::max(1.0, std::abs(x)) : U(rng);
    const double d = x - y;
    if (d == 0.0) continue;
    ++c.pairs;
    const double prod = d * (nl(x) - nl(y));
    const double d2 = d * d;
    const double tol = 1e-9 * d2 * std::max({1.0, std::abs(mu), std::abs(la)});
    const double excess = std::max(mu * d2 - prod, prod - la * d2) / d2;
    if (excess * d2 > tol && excess > worst) {
      worst = excess;
      c.ok = false;
      c.x = x;
      c.y = y;
      c.slope = prod / d2;
    }
  }
  return c;
}

}  // namespace srg
