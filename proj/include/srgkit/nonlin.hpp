#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "srgkit/region.hpp"

namespace srg {

/// Slope bounds [mu, lambda] per channel. Incremental sectors bound
/// (phi(x) - phi(y)) / (x - y); non-incremental ones bound phi(x) / x.
struct SectorBound {
  std::vector<std::pair<double, double>> channels;
  bool incremental = true;

  void validate() const;
  std::size_t size() const { return channels.size(); }
};

/// Scalar static map with a declared sector. The evaluated map is
/// scale * base(x) + shift * x, so loop transformations stay pointwise.
class NamedNonlinearity {
 public:
  enum class Kind { saturation, tanh, negated_tanh, custom_pointwise };

  /// a*x on |x| <= level, continued with slope b outside.
  static NamedNonlinearity saturation(double level = 1.0, double inner = 1.0,
                                      double outer = 0.0);
  /// a*tanh(x) + b*x.
  static NamedNonlinearity tanh(double a = 1.0, double b = 0.0);
  static NamedNonlinearity negated_tanh();
  /// Piecewise-linear interpolation of (x, y) samples, linear extrapolation
  /// with the end slopes. The sector is whatever the user declares.
  static NamedNonlinearity custom(std::vector<std::pair<double, double>> table,
                                  std::pair<double, double> declared_sector);

  Kind kind() const { return kind_; }
  const std::vector<double>& params() const { return params_; }
  const std::vector<std::pair<double, double>>& table() const { return table_; }
  double scale() const { return scale_; }
  double shift() const { return shift_; }

  double operator()(double x) const;
  /// Incremental slope bounds of the evaluated map.
  std::pair<double, double> sector() const;
  /// Largest |slope|, used as a Lipschitz constant.
  double lipschitz() const;
  /// sigma * phi + kappa * id.
  NamedNonlinearity transformed(double sigma, double kappa) const;
  std::string kind_name() const;
  static Kind kind_from_name(const std::string& name);

 private:
  double base(double x) const;
  std::pair<double, double> base_sector() const;

  Kind kind_ = Kind::saturation;
  std::vector<double> params_;
  std::vector<std::pair<double, double>> table_;
  std::pair<double, double> declared_{0.0, 0.0};
  double scale_ = 1.0;
  double shift_ = 0.0;
};

/// D_[mu, lambda] with mu = min mu_i and lambda = max lambda_i.
DiskAlgebraRegion diagonal_nl_region(const SectorBound& s);
/// D_gamma(0), the bound for any operator with gain at most gamma.
DiskAlgebraRegion norm_ball_region(double gamma);

/// Per channel [sigma*mu + kappa, sigma*lambda + kappa], i.e. the sector of
/// sigma * phi + kappa * id.
SectorBound loop_transform_sector(const SectorBound& s,
                                  const std::vector<double>& kappa,
                                  const std::vector<double>& sigma);

struct SectorNormalization {
  std::vector<double> kappa;
  std::vector<double> sigma;
  std::pair<double, double> target;
};

/// Shift and scale every channel onto a common sector. Without a target the
/// common sector is centred at 0 with the narrowest channel width.
SectorNormalization normalize_sectors(
    const SectorBound& s,
    std::optional<std::pair<double, double>> target = std::nullopt);

struct SectorCheck {
  bool ok = true;
  double x = 0.0, y = 0.0;  // worst pair found
  double slope = 0.0;       // its difference quotient
  std::size_t pairs = 0;
};

/// Random pairs on [-range, range], half of them close together so that
/// local slopes are probed as well.
SectorCheck verify_sector(const NamedNonlinearity& nl,
                          std::pair<double, double> sector,
                          std::size_t samples = 100000,
                          std::uint64_t seed = 1, double range = 10.0);

}  // namespace srg
