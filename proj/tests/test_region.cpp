#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "srgkit/error.hpp"
#include "srgkit/region.hpp"

using namespace srg;

namespace {

bool same_disk(const Disk& a, const Disk& b, double tol = 1e-12) {
  return std::abs(a.center - b.center) <= tol && std::abs(a.radius - b.radius) <= tol;
}

std::vector<Complex> circle(Complex c, double r, int n) {
  std::vector<Complex> pts;
  for (int k = 0; k < n; ++k) pts.push_back(c + std::polar(r, 2.0 * M_PI * k / n));
  return pts;
}

// random conjugate-symmetric cloud
std::vector<Complex> cloud(std::mt19937_64& rng, Complex centre, double spread, int n) {
  std::uniform_real_distribution<double> g(-spread, spread);
  std::vector<Complex> pts;
  for (int k = 0; k < n; ++k) {
    const Complex z = centre + Complex(g(rng), g(rng));
    pts.push_back(z);
    pts.push_back(std::conj(z));
  }
  return pts;
}

bool conjugate_closed(const CoverRegion& c) {
  for (const auto& b : c.balls())
    if (!c.covers(std::conj(b.center), 1e-9 + 1e-9 * std::abs(b.center))) return false;
  return true;
}

// every ball of `inner` lies inside `outer` up to `tol`
bool included(const CoverRegion& inner, const CoverRegion& outer, double tol) {
  for (const auto& b : inner.balls())
    if (!outer.covers(b.center, tol)) return false;
  return true;
}

Complex sample_in(const DiskAlgebraRegion& r, std::mt19937_64& rng, double box) {
  std::uniform_real_distribution<double> g(-box, box);
  for (int tries = 0; tries < 100000; ++tries) {
    const Complex z(g(rng), g(rng));
    if (r.contains(z, 0.0)) return z;
  }
  FAIL("could not sample the region");
  return 0.0;
}

}  // namespace

TEST_SUITE("disk form") {
  TEST_CASE("interval disk") {
    const Disk d = Disk::from_interval(1.0, 2.0);
    CHECK(d.center == doctest::Approx(1.5));
    CHECK(d.radius == doctest::Approx(0.5));
    CHECK(d.lo() == doctest::Approx(1.0));
    CHECK(d.hi() == doctest::Approx(2.0));
  }

  TEST_CASE("sum of disks adds centres and radii") {
    const Disk s = minkowski_sum(Disk{1.0, 0.5}, Disk{-3.0, 2.0});
    CHECK(same_disk(s, Disk{-2.0, 2.5}));
  }

  TEST_CASE("scale and shift act on the interval endpoints") {
    const auto r = DiskAlgebraRegion::interval(1.0, 2.0);
    CHECK(same_disk(scale_real(r, -2.0).upper().at(0), Disk::from_interval(-4.0, -2.0)));
    CHECK(same_disk(scale_real(r, 3.0).upper().at(0), Disk::from_interval(3.0, 6.0)));
    CHECK(same_disk(shift_real(r, 3.0).upper().at(0), Disk::from_interval(4.0, 5.0)));
  }

  TEST_CASE("inversion of a positive interval disk") {
    for (auto [mu, la] : {std::pair{1.0, 2.0}, std::pair{0.25, 8.0}, std::pair{-3.0, -0.5}}) {
      const auto inv = mobius_inverse(DiskAlgebraRegion::interval(mu, la));
      REQUIRE(inv.upper().size() == 1);
      CHECK(same_disk(inv.upper()[0], Disk::from_interval(1.0 / la, 1.0 / mu), 1e-12));
      CHECK(inv.lower().empty());
      CHECK_FALSE(inv.contains_infinity());
    }
  }

  TEST_CASE("inversion of a disk around the origin gives an exterior") {
    const auto inv = mobius_inverse(DiskAlgebraRegion::interval(-1.0, 2.0));
    CHECK_FALSE(inv.bounded());
    CHECK(inv.contains_infinity());
    CHECK(inv.contains(Complex(-1.0, 0.0)));
    CHECK(inv.contains(Complex(0.5, 0.0)));
    CHECK_FALSE(inv.contains(Complex(0.0, 0.0)));
    CHECK(inv.contains(Complex(0.0, 5.0)));
    // pointwise check of 1/z against membership
    std::mt19937_64 rng(3);
    const auto d = DiskAlgebraRegion::interval(-1.0, 2.0);
    for (int k = 0; k < 2000; ++k) {
      const Complex z = sample_in(d, rng, 2.0);
      if (std::abs(z) < 1e-9) continue;
      CHECK(inv.contains(1.0 / z, 1e-9));
    }
  }

  TEST_CASE("double inversion returns the region") {
    const auto r = DiskAlgebraRegion({Disk{1.0, 2.0}}, {Disk{0.5, 0.2}});
    const auto back = mobius_inverse(mobius_inverse(r));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> g(-4.0, 4.0);
    for (int k = 0; k < 5000; ++k) {
      const Complex z(g(rng), g(rng));
      if (std::abs(std::abs(z - 1.0) - 2.0) < 1e-6 || std::abs(std::abs(z - 0.5) - 0.2) < 1e-6) continue;
      CHECK(r.contains(z, 1e-9) == back.contains(z, 1e-9));
    }
  }

  TEST_CASE("rmin and distances") {
    CHECK(rmin(DiskAlgebraRegion::interval(1.0, 2.0)) == doctest::Approx(2.0));
    CHECK(rmin(DiskAlgebraRegion::interval(-3.0, 2.0)) == doctest::Approx(3.0));
    CHECK(std::isinf(rmin(mobius_inverse(DiskAlgebraRegion::interval(-1.0, 1.0)))));
    CHECK(dist(DiskAlgebraRegion::interval(0.0, 1.0), DiskAlgebraRegion::interval(2.0, 3.0)) ==
          doctest::Approx(1.0).epsilon(1e-6));
    CHECK(dist(DiskAlgebraRegion::interval(0.0, 1.0), Complex(0.5, 2.0)) == doctest::Approx(1.5));
  }

  TEST_CASE("emptiness") {
    CHECK_FALSE(DiskAlgebraRegion::interval(0.0, 1.0).is_empty());
    CHECK(DiskAlgebraRegion({Disk{0.0, 1.0}, Disk{5.0, 1.0}}, {}).is_empty());
    CHECK(DiskAlgebraRegion({Disk{0.0, 1.0}}, {Disk{0.0, 2.0}}).is_empty());
  }

  TEST_CASE("chord property of disks") {
    CHECK(has_chord_property(DiskAlgebraRegion::interval(-1.0, 2.0)));
    CHECK(has_chord_property(mobius_inverse(DiskAlgebraRegion::interval(1.0, 2.0))));
  }
}

TEST_SUITE("cover form") {
  TEST_CASE("grid cover contains the exact region") {
    const auto r = DiskAlgebraRegion({Disk{0.0, 2.0}}, {Disk{1.0, 0.5}});
    const CoverRegion c = to_cover(r, 0.05);
    CHECK(conjugate_closed(c));
    std::mt19937_64 rng(7);
    for (int k = 0; k < 3000; ++k) CHECK(c.covers(sample_in(r, rng, 2.0)));
    CHECK(rmin(c) >= 2.0);
    CHECK(rmin(c) <= 2.0 + 2.0 * c.epsilon());
  }

  TEST_CASE("chord completion of a circle is the disk") {
    const double R = 1.5, eps = 0.01;
    const auto ring = circle(Complex(0.5, 0.0), R, 720);
    const CoverRegion c = chord_completion(CoverRegion::from_points(ring, eps), CoverOptions{0.01});
    std::mt19937_64 rng(11);
    const auto disk = DiskAlgebraRegion::disk(Disk{0.5, R});
    for (int k = 0; k < 3000; ++k) CHECK(c.covers(sample_in(disk, rng, 2.5)));
    for (const auto& b : c.balls()) CHECK(std::abs(b.center - 0.5) <= R + eps + 2.0 * b.radius);
    CHECK(has_chord_property(c, 2.0 * c.epsilon()));
  }

  TEST_CASE("sums and products of finite clouds contain every pairwise result") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 6; ++trial) {
      const auto A = cloud(rng, Complex(1.0, 0.0), 0.8, 12);
      const auto B = cloud(rng, Complex(-0.5, 0.0), 1.0, 12);
      const CoverRegion ca = CoverRegion::from_points(A, 0.01), cb = CoverRegion::from_points(B, 0.01);
      const CoverOptions opt{0.01};
      const auto sum = minkowski_sum(ca, cb, opt);
      const auto isum = improved_sum(ca, cb, opt);
      const auto prod = minkowski_product(ca, cb, opt);
      const auto iprod = improved_product(ca, cb, opt);
      for (const Complex a : A)
        for (const Complex b : B) {
          CHECK(sum.covers(a + b));
          CHECK(isum.covers(a + b));
          CHECK(prod.covers(a * b));
          CHECK(iprod.covers(a * b));
        }
      for (const auto* c : {&sum, &isum, &prod, &iprod}) CHECK(conjugate_closed(*c));
    }
  }

  TEST_CASE("improved completions sit inside each completed variant") {
    std::mt19937_64 rng(17);
    const auto A = cloud(rng, Complex(1.0, 0.0), 0.6, 10);
    const auto B = cloud(rng, Complex(0.5, 0.0), 0.9, 10);
    const CoverRegion ca = CoverRegion::from_points(A, 0.01), cb = CoverRegion::from_points(B, 0.01);
    const CoverOptions opt{0.01};
    const auto isum = improved_sum(ca, cb, opt);
    const auto s1 = minkowski_sum(chord_completion(ca, opt), cb, opt);
    const auto s2 = minkowski_sum(ca, chord_completion(cb, opt), opt);
    const double tol = 2.0 * std::max(s1.epsilon(), s2.epsilon());
    CHECK(included(isum, s1, tol));
    CHECK(included(isum, s2, tol));

    const auto iprod = improved_product(ca, cb, opt);
    const auto p1 = minkowski_product(arc_completion(ca, ArcSide::right, opt), cb, opt);
    const auto p2 = minkowski_product(ca, arc_completion(cb, ArcSide::right, opt), opt);
    const double ptol = 2.0 * std::max(p1.epsilon(), p2.epsilon());
    CHECK(included(iprod, p1, ptol));
    CHECK(included(iprod, p2, ptol));
  }

  TEST_CASE("arc completion holds the arc through each point") {
    const std::vector<Complex> pts{Complex(1.0, 1.0), Complex(1.0, -1.0)};
    const auto c = arc_completion(CoverRegion::from_points(pts, 0.01), ArcSide::right, CoverOptions{0.01});
    for (double t = -M_PI / 4; t <= M_PI / 4; t += 0.01) CHECK(c.covers(std::polar(std::sqrt(2.0), t)));
    CHECK_FALSE(c.covers(Complex(-1.4, 0.0)));
    const auto l = arc_completion(CoverRegion::from_points(pts, 0.01), ArcSide::left, CoverOptions{0.01});
    CHECK(l.covers(Complex(-std::sqrt(2.0), 0.0)));
  }

  TEST_CASE("cover inversion and scaling are pointwise") {
    std::mt19937_64 rng(19);
    const auto A = cloud(rng, Complex(2.0, 0.0), 1.0, 30);
    const CoverRegion ca = CoverRegion::from_points(A, 0.01);
    const auto inv = mobius_inverse(ca);
    const auto sc = scale_real(ca, -1.5);
    const auto sh = shift_real(ca, 0.7);
    for (const Complex a : A) {
      CHECK(inv.covers(1.0 / a));
      CHECK(sc.covers(-1.5 * a));
      CHECK(sh.covers(a + 0.7));
    }
    CHECK(conjugate_closed(inv));
  }

  TEST_CASE("inverse of a sum with an exact unbounded operand") {
    // a = exterior region, b = a disk; compare against 1 / (a + b) pointwise
    const auto a = mobius_inverse(DiskAlgebraRegion::interval(-0.5, 1.0));
    const auto b = DiskAlgebraRegion::disk(Disk{0.3, 0.2});
    const auto c = inverse_of_sum(a, b, CoverOptions{0.005});
    const auto c2 = inverse_of_sum(a, to_cover(b, 0.002), CoverOptions{0.005});
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> g(-6.0, 6.0);
    int tested = 0;
    while (tested < 3000) {
      const Complex x(g(rng), g(rng));
      if (!a.contains(x, 0.0)) continue;
      const Complex y = sample_in(b, rng, 1.0);
      const Complex s = x + y;
      if (std::abs(s) < 1e-9) continue;
      CHECK(c.covers(1.0 / s));
      CHECK(c2.covers(1.0 / s));
      ++tested;
    }
    CHECK(conjugate_closed(c));
  }

  TEST_CASE("cover distances and intersection") {
    const auto a = CoverRegion::ball(Complex(0.0, 0.0), 0.5);
    const auto b = CoverRegion::ball(Complex(3.0, 0.0), 0.5);
    CHECK(dist(a, b) == doctest::Approx(2.0));
    CHECK(intersect(a, b).is_empty());
    CHECK(dist(DiskAlgebraRegion::interval(-1.0, 1.0), b) == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(rmin(CoverRegion::whole_plane()) == kInf);
  }

  TEST_CASE("negative resolution is rejected") {
    CHECK_THROWS_AS(to_cover(DiskAlgebraRegion::interval(0.0, 1.0), -1.0), InputError);
    CHECK_THROWS_AS(CoverRegion::from_points(std::vector<Complex>{1.0}, -0.1), InputError);
  }
}
