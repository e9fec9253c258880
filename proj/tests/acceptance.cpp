// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "srgkit/analysis.hpp"
#include "srgkit/examples.hpp"
#include "srgkit/region.hpp"
#include "srgkit/sim.hpp"

using namespace srg;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double rel_err(double got, double ref) { return std::abs(got - ref) / ref; }

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Certified {
  examples::Concrete model;
  AnalysisReport report;
  bool incremental;
};

std::vector<Certified> certified;

// ---- 1: controlled Lur'e plant at two loop shifts
void criterion1() {
  const auto t0 = Clock::now();
  const auto a = examples::lure(2.0, 3.0), b = examples::lure(0.5, 1.5);
  const auto ra = lfr_certify(a.model), rb = lfr_certify(b.model);
  const double secs = since(t0);
  const bool ok = ra.certified && rb.certified && rel_err(ra.gain_bound, 2.33) <= 0.1 &&
                  rel_err(rb.gain_bound, 6.13) <= 0.1 && secs < 60.0;
  if (ra.certified) certified.push_back({a, ra, true});
  if (rb.certified) certified.push_back({b, rb, true});
  report(1, ok,
         fmt("gain %.4f vs 2.33 (%+.1f%%), gain %.4f vs 6.13 (%+.1f%%), %s, %.1f s", ra.gain_bound,
             100 * (ra.gain_bound / 2.33 - 1), rb.gain_bound, 100 * (rb.gain_bound / 6.13 - 1),
             ra.certified && rb.certified ? "both certified" : "NOT certified", secs));
}

// ---- 2: coupled masses with normalized sectors
void criterion2() {
  const auto t0 = Clock::now();
  const auto m = examples::msd();
  const auto r = lfr_certify(m.model);
  const double secs = since(t0);
  double min_sep = kInf;
  for (const auto& [tau, d] : r.tau_table) min_sep = std::min(min_sep, d);
  const bool ok = r.certified && rel_err(r.gain_bound, 12.09) <= 0.1 && min_sep > 0.0 && secs < 120.0;
  if (r.certified) certified.push_back({m, r, true});
  report(2, ok,
         fmt("gain %.4f vs 12.09 (%+.1f%%), min separation over %zu tau points %.4f, %.1f s", r.gain_bound,
             100 * (r.gain_bound / 12.09 - 1), r.tau_table.size(), min_sep, secs));
}

// ---- 3: norm-bounded feedback, gain at zero
void criterion3() {
  const auto t0 = Clock::now();
  AnalysisSettings s;
  s.assume_wellposed = true;
  const auto r = feedback_certify(examples::iqc_problem(s), s);
  const double secs = since(t0);
  const bool ok = r.certified && !r.incremental && rel_err(r.gain_bound, 1.79) <= 0.1 && r.gain_bound < 4.05 &&
                  secs < 60.0;
  if (r.certified) certified.push_back({examples::iqc_lfr(), r, false});
  report(3, ok,
         fmt("gain %.4f vs 1.79 (%+.1f%%), below 4.05: %s, %s, %.1f s", r.gain_bound,
             100 * (r.gain_bound / 1.79 - 1), r.gain_bound < 4.05 ? "yes" : "no",
             r.certified ? "certified" : "NOT certified", secs));
}

// ---- 4: Monte-Carlo soundness of the LTI and sector bounds
void criterion4() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dim(1, 4);
  int lti_bad = 0, lti_systems = 0;
  long lti_samples = 0;
  for (int k = 0; k < 50; ++k) {
    const StateSpace g = oracle::random_stable(rng, dim(rng), dim(rng), dim(rng));
    const DiskAlgebraRegion r = block_bound(g);
    const CoverRegion c = to_cover_relative(Region(r), 0.01);
    const double scale = std::max(1.0, rmin(r));
    for (int s = 0; s < 10000; ++s) {
      const Complex z = oracle::lti_srg_point(g, rng);
      if (!r.contains(z, 1e-9 * scale) || !c.covers(z)) ++lti_bad;
      ++lti_samples;
    }
    ++lti_systems;
  }

  std::uniform_real_distribution<double> u(-2.0, 2.0), pos(0.05, 2.0);
  int nl_bad = 0, nl_count = 0;
  long nl_samples = 0;
  for (int k = 0; k < 24; ++k) {
    std::vector<NamedNonlinearity> nl;
    const int channels = 1 + k % 3;
    for (int ch = 0; ch < channels; ++ch) {
      const double a = u(rng), b = a + pos(rng);
      switch ((k + ch) % 4) {
        case 0:
          nl.push_back(NamedNonlinearity::saturation(pos(rng), 1.0, 0.0).transformed(b - a, a));
          break;
        case 1:
          nl.push_back(NamedNonlinearity::tanh(b - a, a));
          break;
        case 2:
          nl.push_back(NamedNonlinearity::custom({{-2.0, -2.0 * b}, {0.0, 0.0}, {0.5, 0.5 * a}, {3.0, 0.5 * a + 2.5 * b}},
                                                 {a, b}));
          break;
        default:
          nl.push_back(NamedNonlinearity::saturation(pos(rng), a, b));
          break;
      }
    }
    SectorBound s;
    for (const auto& f : nl) s.channels.push_back(f.sector());
    const DiskAlgebraRegion r = diagonal_nl_region(s);
    for (int i = 0; i < 10000; ++i) {
      if (!r.contains(oracle::nl_srg_point(nl, rng), 1e-9)) ++nl_bad;
      ++nl_samples;
    }
    ++nl_count;
  }
  const bool ok = lti_bad == 0 && nl_bad == 0 && lti_systems >= 50 && nl_count >= 20;
  report(4, ok,
         fmt("%d LTI systems, %ld samples: %d violations; %d sector maps, %ld samples: %d violations; %.1f s",
             lti_systems, lti_samples, lti_bad, nl_count, nl_samples, nl_bad, since(t0)));
}

// ---- 5: simulation never beats the certificate
void criterion5() {
  const auto t0 = Clock::now();
  int violations = 0;
  std::string detail;
  for (const auto& c : certified) {
    ExcitationSpec ex;
    ex.seed = 7;
    ex.incremental = c.incremental;
    const auto g = empirical_incremental_gain(c.model.model, c.model.nl, ex, default_sim_config(c.model.model.G));
    if (!(g.value <= c.report.gain_bound)) ++violations;
    detail += fmt("%.3f<=%.3f ", g.value, c.report.gain_bound);
  }
  const bool ok = violations == 0 && certified.size() == 4;
  report(5, ok,
         fmt("%zu certified examples, %d violations: ", certified.size(), violations) +
             detail + fmt("(%.1f s)", since(t0)));
}

// ---- 6: region calculus identities and inclusions
void criterion6() {
  int bad = 0, checks = 0;
  auto expect = [&](bool cond) {
    ++checks;
    if (!cond) ++bad;
  };
  auto same = [](const Disk& a, const Disk& b) {
    return std::abs(a.center - b.center) < 1e-12 && std::abs(a.radius - b.radius) < 1e-12;
  };
  std::mt19937_64 rng(66);
  std::uniform_real_distribution<double> g(-3.0, 3.0), p(0.1, 3.0);
  for (int k = 0; k < 200; ++k) {
    const double mu = p(rng), la = mu + p(rng), alpha = g(rng), c = g(rng);
    const Disk d1 = Disk::from_interval(mu, la), d2 = Disk::from_interval(c, c + p(rng));
    expect(same(minkowski_sum(d1, d2), Disk{d1.center + d2.center, d1.radius + d2.radius}));
    if (alpha != 0.0) {
      const auto s = scale_real(DiskAlgebraRegion::disk(d1), alpha).upper()[0];
      expect(same(s, Disk::from_interval(std::min(alpha * mu, alpha * la), std::max(alpha * mu, alpha * la))));
    }
    expect(same(shift_real(DiskAlgebraRegion::disk(d1), c).upper()[0], Disk::from_interval(mu + c, la + c)));
    expect(same(mobius_inverse(DiskAlgebraRegion::interval(mu, la)).upper()[0], Disk::from_interval(1 / la, 1 / mu)));
  }
  // chord completion of a circle is its disk
  std::vector<Complex> ring;
  for (int k = 0; k < 720; ++k) ring.push_back(Complex(0.3, 0.0) + std::polar(1.2, 2 * M_PI * k / 720));
  const auto chord = chord_completion(CoverRegion::from_points(ring, 0.005), CoverOptions{0.01});
  for (int k = 0; k < 2000; ++k) {
    const Complex z = Complex(0.3, 0.0) + std::polar(1.2 * std::sqrt(std::abs(g(rng)) / 3.0), g(rng));
    expect(chord.covers(z));
  }
  for (const auto& b : chord.balls()) expect(std::abs(b.center - 0.3) <= 1.2 + 0.005 + 2 * b.radius);

  // clouds: pairwise results are covered, improved results sit inside every variant,
  // and every output is conjugate-closed
  auto cloud = [&](Complex centre) {
    std::vector<Complex> pts;
    for (int k = 0; k < 10; ++k) {
      const Complex z = centre + Complex(0.4 * g(rng), 0.4 * g(rng));
      pts.push_back(z);
      pts.push_back(std::conj(z));
    }
    return pts;
  };
  auto conj_closed = [](const CoverRegion& r) {
    for (const auto& b : r.balls())
      if (!r.covers(std::conj(b.center), 1e-9 * (1 + std::abs(b.center)))) return false;
    return true;
  };
  auto inside = [](const CoverRegion& a, const CoverRegion& b) {
    const double tol = 2.0 * b.epsilon();
    for (const auto& x : a.balls())
      if (!b.covers(x.center, tol)) return false;
    return true;
  };
  const CoverOptions opt{0.01};
  for (int trial = 0; trial < 4; ++trial) {
    const auto A = cloud(Complex(1.0 + trial * 0.3, 0.0)), B = cloud(Complex(-0.4 + 0.5 * trial, 0.0));
    const auto ca = CoverRegion::from_points(A, 0.01), cb = CoverRegion::from_points(B, 0.01);
    const auto isum = improved_sum(ca, cb, opt), iprod = improved_product(ca, cb, opt);
    const auto inv = mobius_inverse(ca);
    for (const Complex a : A) {
      expect(inv.covers(1.0 / a));
      for (const Complex b : B) {
        expect(isum.covers(a + b));
        expect(iprod.covers(a * b));
      }
    }
    expect(inside(isum, minkowski_sum(chord_completion(ca, opt), cb, opt)));
    expect(inside(isum, minkowski_sum(ca, chord_completion(cb, opt), opt)));
    expect(inside(iprod, minkowski_product(arc_completion(ca, ArcSide::right, opt), cb, opt)));
    expect(inside(iprod, minkowski_product(ca, arc_completion(cb, ArcSide::left, opt), opt)));
    for (const auto* r : {&isum, &iprod, &inv}) expect(conj_closed(*r));
  }
  report(6, bad == 0, fmt("%d identity and inclusion checks, %d failures", checks, bad));
}

// ---- 7: LTI bound tightens with larger centre grids
// rmin is compared up to rounding (1e-12 relative); the raster area of the
// region on a fixed box must not grow either.
void criterion7() {
  const StateSpace g = examples::msd().model.Gzw();  // square 3x3
  std::string detail;
  double prev = kInf;
  long prev_area = -1;
  bool ok = true;
  for (int n : {5, 11, 41, 161}) {
    const auto gr = auto_grids(g, n, 400);
    const auto region = lti_srg_bound(g, gr.upsilon, gr.lambda, gr.grid);
    const double r = rmin(region);
    long area = 0;
    for (int i = 0; i < 400; ++i)
      for (int k = 0; k < 400; ++k) area += region.contains(Complex(-2.0 + 4.0 * i / 399, -2.0 + 4.0 * k / 399), 0.0);
    ok = ok && r <= prev * (1.0 + 1e-12) && (prev_area < 0 || area <= prev_area);
    prev = r;
    prev_area = area;
    detail += fmt("|U|=%d: rmin %.9f, area %ld; ", n, r, area);
  }
  report(7, ok, detail);
}

// ---- 8: loop-transformed realization vs the closed form
void criterion8() {
  double err = 0.0;
  for (auto [k1, k2] : {std::pair{2.0, 3.0}, std::pair{0.5, 1.5}}) {
    const auto c = examples::lure(k1, k2);
    for (double w : default_grid(c.model.G).omegas)
      err = std::max(err, (freq_response(c.model.G, w) - examples::lure_closed_form(k1, k2, w)).cwiseAbs().maxCoeff());
  }
  report(8, err <= 1e-9, fmt("max frequency-response error %.3g over the default grid", err));
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> all{criterion1, criterion2, criterion3, criterion4,
                                               criterion5, criterion6, criterion7, criterion8};
  for (std::size_t i = 0; i < all.size(); ++i) {
    try {
      all[i]();
    } catch (const std::exception& e) {
      report(static_cast<int>(i + 1), false, std::string("exception: ") + e.what());
    }
  }
  return failures;
}
