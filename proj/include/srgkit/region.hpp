#pragma once

#include <complex>
#include <limits>
#include <span>
#include <variant>
#include <vector>

namespace srg {

using Complex = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Closed disk centered on the real axis.
struct Disk {
  double center = 0.0;
  double radius = 0.0;

  /// D_[lo,hi]: the disk whose real-axis diameter is [lo, hi].
  static Disk from_interval(double lo, double hi);
  double lo() const { return center - radius; }
  double hi() const { return center + radius; }
};

/// Exact region of the form (intersection of upper disks) minus (union of
/// open lower disks), optionally with the point at infinity. No upper disks
/// means the intersection is the whole plane.
class DiskAlgebraRegion {
 public:
  DiskAlgebraRegion() = default;
  DiskAlgebraRegion(std::vector<Disk> upper, std::vector<Disk> lower,
                    bool infinity = false);

  static DiskAlgebraRegion disk(Disk d);
  static DiskAlgebraRegion interval(double lo, double hi);
  static DiskAlgebraRegion point(double x);

  const std::vector<Disk>& upper() const { return upper_; }
  const std::vector<Disk>& lower() const { return lower_; }
  bool contains_infinity() const { return infinity_; }
  bool bounded() const { return !upper_.empty(); }

  /// Membership with absolute slack `tol` (positive tol enlarges the set).
  bool contains(Complex z, double tol = 1e-12) const;
  /// Exact emptiness test over candidate extreme points.
  bool is_empty() const;

 private:
  std::vector<Disk> upper_;
  std::vector<Disk> lower_;
  bool infinity_ = false;
};

struct Ball {
  Complex center;
  double radius = 0.0;
};

/// Sound outer cover: the true set lies inside the union of the closed balls,
/// plus everything with modulus >= exterior_radius, plus infinity if flagged.
/// Balls carry individual radii; epsilon() reports the largest one.
class CoverRegion {
 public:
  CoverRegion() = default;
  CoverRegion(std::vector<Ball> balls, bool infinity = false,
              double exterior_radius = kInf, double grid_step = 0.0);

  static CoverRegion from_points(std::span<const Complex> points,
                                 double epsilon, bool infinity = false);
  static CoverRegion ball(Complex center, double radius);
  static CoverRegion zero();
  static CoverRegion infinity_only();
  static CoverRegion whole_plane();

  std::span<const Ball> balls() const { return balls_; }
  std::size_t size() const { return balls_.size(); }
  double epsilon() const;
  bool contains_infinity() const { return infinity_; }
  double exterior_radius() const { return exterior_; }
  bool has_exterior() const { return exterior_ < kInf; }
  /// > 0 when ball centers sit on the lattice step*(Z + jZ).
  double grid_step() const { return grid_step_; }
  bool is_empty() const {
    return balls_.empty() && !infinity_ && !has_exterior();
  }
  /// True if z lies in the cover (some ball or the exterior part).
  bool covers(Complex z, double tol = 0.0) const;
  /// Returns a copy with the conjugate of every ball added.
  CoverRegion symmetrized() const;

 private:
  std::vector<Ball> balls_;
  bool infinity_ = false;
  double exterior_ = kInf;
  double grid_step_ = 0.0;
};

using Region = std::variant<DiskAlgebraRegion, CoverRegion>;

enum class ArcSide { left, right };

struct CoverOptions {
  /// Output grid step as a fraction of the output extent.
  double relative_resolution = 0.01;
  /// Radius used when an unbounded disk-algebra region must be truncated.
  double truncation_radius = 0.0;  // 0 means automatic
};

// Disk-algebra forms (exact).
DiskAlgebraRegion scale_real(const DiskAlgebraRegion& r, double alpha);
DiskAlgebraRegion shift_real(const DiskAlgebraRegion& r, double c);
DiskAlgebraRegion mobius_inverse(const DiskAlgebraRegion& r);
Disk minkowski_sum(const Disk& a, const Disk& b);
double rmin(const DiskAlgebraRegion& r);

/// Grid cover with spacing `resolution`; every point of r is within the
/// returned ball radius of a sample.
CoverRegion to_cover(const DiskAlgebraRegion& r, double resolution,
                     double truncation_radius = 0.0);
CoverRegion to_cover(const Region& r, double resolution);
/// Grid step `rel` times the region extent (smallest upper-disk diameter, or
/// the boundary span when unbounded). Covers pass through unchanged.
CoverRegion to_cover_relative(const Region& r, double rel);

// Cover calculus. All results are outer approximations.
CoverRegion scale_real(const CoverRegion& r, double alpha);
CoverRegion shift_real(const CoverRegion& r, double c);
CoverRegion mobius_inverse(const CoverRegion& r);
CoverRegion minkowski_sum(const CoverRegion& a, const CoverRegion& b,
                          const CoverOptions& opt = {});
CoverRegion minkowski_product(const CoverRegion& a, const CoverRegion& b,
                              const CoverOptions& opt = {});
CoverRegion chord_completion(const CoverRegion& r, const CoverOptions& opt = {});
CoverRegion arc_completion(const CoverRegion& r, ArcSide side,
                           const CoverOptions& opt = {});
CoverRegion intersect(const CoverRegion& a, const CoverRegion& b);
CoverRegion improved_sum(const CoverRegion& a, const CoverRegion& b,
                         const CoverOptions& opt = {});
CoverRegion improved_product(const CoverRegion& a, const CoverRegion& b,
                             const CoverOptions& opt = {});

/// Cover of (a + b)^{-1} where a is an exact, possibly unbounded region and
/// a has the chord property (so the improved sum reduces to a + chord(b) and
/// a^c + b, intersected). Sampling happens directly in the inverted plane,
/// which keeps the result bounded when a is the exterior of a disk.
CoverRegion inverse_of_sum(const DiskAlgebraRegion& a, const CoverRegion& b,
                           const CoverOptions& opt = {});
/// Same with b exact (bounded); avoids covering b first.
CoverRegion inverse_of_sum(const DiskAlgebraRegion& a, const DiskAlgebraRegion& b,
                           const CoverOptions& opt = {});

double rmin(const CoverRegion& r);
double rmin(const Region& r);
/// Lower bounds on the distance between two sets (0 if both hold infinity).
double dist(const CoverRegion& a, const CoverRegion& b);
double dist(const DiskAlgebraRegion& a, const CoverRegion& b);
double dist(const DiskAlgebraRegion& a, const DiskAlgebraRegion& b,
            double resolution = 0.0);
/// Exact distance from a point to a disk-algebra region when it has a single
/// constraint, a lower bound otherwise.
double dist(const DiskAlgebraRegion& a, Complex z);

bool has_chord_property(const CoverRegion& r, double tol);
bool has_arc_property(const CoverRegion& r, ArcSide side, double tol);
bool has_chord_property(const DiskAlgebraRegion& r);

// Dispatch over either form.
Region mobius_inverse(const Region& r);
Region scale_real(const Region& r, double alpha);
double dist(const Region& a, const Region& b);
bool has_chord_property(const Region& r);
bool is_empty(const Region& r);

/// Points within `tol` of the boundary of r, sampled along each circle.
std::vector<Complex> boundary_samples(const DiskAlgebraRegion& r,
                                      int per_circle = 720);

}  // namespace srg
