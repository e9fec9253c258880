#include "srgkit/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "srgkit/error.hpp"

namespace srg {

DiskAlgebraRegion PhiSpec::sector_region() const {
  return diagonal_nl_region(std::get<SectorBound>(source));
}

Region PhiSpec::region() const {
  if (is_sector()) return sector_region();
  return std::get<Region>(source);
}

void LfrModel::validate() const {
  const auto& p = partition;
  auto check = [](const std::vector<int>& a, const std::vector<int>& b, int n,
                  const char* what) {
    std::set<int> seen;
    for (int i : a) {
      if (i < 0 || i >= n) throw InputError(std::string(what) + " index out of range");
      if (!seen.insert(i).second) throw InputError(std::string(what) + " index repeated");
    }
    for (int i : b) {
      if (i < 0 || i >= n) throw InputError(std::string(what) + " index out of range");
      if (!seen.insert(i).second) throw InputError(std::string(what) + " index sets overlap");
    }
    if (static_cast<int>(seen.size()) != n)
      throw InputError(std::string(what) + " index sets do not cover G");
  };
  check(p.z_rows, p.y_rows, G.outputs(), "row");
  check(p.w_cols, p.u_cols, G.inputs(), "column");
  if (p.z_rows.empty() || p.w_cols.empty()) throw InputError("LFR needs z and w channels");
  if (p.y_rows.empty() || p.u_cols.empty()) throw InputError("LFR needs y and u channels");
  if (phi.is_sector()) {
    const auto& s = std::get<SectorBound>(phi.source);
    s.validate();
    if (static_cast<int>(s.size()) != nz() || nz() != nw())
      throw InputError("diagonal Phi needs as many sector channels as z and w channels");
    if (s.incremental != phi.incremental)
      throw InputError("sector incremental flag disagrees with the model");
  }
}

std::vector<double> tau_grid(int points) {
  if (points < 2) throw InputError("tau grid needs at least 2 points");
  return uniform_points(0.0, 1.0, points);
}

SeparationResult separation_sweep(const Region& h1, const Region& h2,
                                  const std::vector<double>& taus) {
  const bool has0 = std::find(taus.begin(), taus.end(), 0.0) != taus.end();
  const bool has1 = std::find(taus.begin(), taus.end(), 1.0) != taus.end();
  if (!has0 || !has1) throw InputError("tau grid must contain 0 and 1");
  for (double t : taus)
    if (!(t >= 0.0 && t <= 1.0)) throw InputError("tau values must lie in [0, 1]");
  if (!std::isfinite(rmin(h1)) || !std::isfinite(rmin(h2)))
    throw HypothesisError(
        "separation needs both regions to have finite radius (finite gains)");
  const Region inv = mobius_inverse(h1);
  const Region zero = DiskAlgebraRegion::point(0.0);
  SeparationResult res;
  res.r = kInf;
  for (double t : taus) {
    const double d = t == 0.0 ? dist(inv, zero) : dist(inv, scale_real(h2, -t));
    res.table.emplace_back(t, d);
    if (d < res.r) {
      res.r = d;
      res.tau_min = t;
    }
  }
  return res;
}

namespace {

SeparationResult sweep(const Region& h1, const Region& h2, const AnalysisSettings& s) {
  int n = s.tau_points;
  auto res = separation_sweep(h1, h2, tau_grid(n));
  if (!s.refine_tau) return res;
  for (int k = 0; k < 6; ++k) {
    n = 2 * n - 1;
    auto next = separation_sweep(h1, h2, tau_grid(n));
    const double change = std::abs(next.r - res.r);
    res = std::move(next);
    if (!(change > 0.01 * res.r)) break;
  }
  return res;
}

CoverRegion cover_of(const Region& r, double rel) { return to_cover_relative(r, rel); }

CoverRegion sum(const CoverRegion& a, const CoverRegion& b, const AnalysisSettings& s) {
  CoverOptions o{s.resolution};
  if (s.improved) return improved_sum(a, b, o);
  return minkowski_sum(chord_completion(a, o), b, o);
}

CoverRegion product(const CoverRegion& a, const CoverRegion& b, const AnalysisSettings& s) {
  CoverOptions o{s.resolution};
  if (s.improved) return improved_product(a, b, o);
  return minkowski_product(arc_completion(a, ArcSide::right, o), b, o);
}

// (h1^{-1} + h2)^{-1}, exact operands kept exact as long as possible
CoverRegion closed_loop(const Region& h1, const Region& h2, const AnalysisSettings& s) {
  CoverOptions o{s.resolution};
  const Region inv = mobius_inverse(h1);
  if (const auto* a = std::get_if<DiskAlgebraRegion>(&inv)) {
    if (const auto* b = std::get_if<DiskAlgebraRegion>(&h2); b && b->bounded())
      return inverse_of_sum(*a, *b, o);
    return inverse_of_sum(*a, cover_of(h2, s.resolution), o);
  }
  const auto& ci = std::get<CoverRegion>(inv);
  return mobius_inverse(sum(ci, cover_of(h2, s.resolution), s));
}

void require_wellposed_ack(bool incremental, bool ack) {
  if (!incremental && !ack)
    throw HypothesisError(
        "non-incremental analysis requires assuming well-posedness of the loop "
        "(pass --assume-wellposed)");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

DiskAlgebraRegion block_bound(const StateSpace& ss, const AnalysisSettings& s) {
  ss.require_hurwitz("block");
  const auto g = auto_grids(ss, s.base_points, s.freq_points);
  return lti_srg_bound(ss, g.upsilon, g.lambda, g.grid, s.bound);
}

AnalysisReport feedback_certify(const FeedbackProblem& fp, const AnalysisSettings& s) {
  const auto t0 = std::chrono::steady_clock::now();
  const bool ack = fp.wellposedness_assumed || s.assume_wellposed;
  require_wellposed_ack(fp.incremental, ack);
  AnalysisReport rep;
  rep.settings = s;
  rep.incremental = fp.incremental;
  Region h2 = fp.h2;
  if (!has_chord_property(fp.h1) && !has_chord_property(h2)) {
    h2 = chord_completion(cover_of(h2, s.resolution), CoverOptions{s.resolution});
    rep.notes.push_back("neither region has the chord property; H2 was chord-completed");
  }
  rep.regions["h1"] = fp.h1;
  rep.regions["h2"] = h2;
  rep.regions["h1_inverse"] = mobius_inverse(fp.h1);

  const auto sep = sweep(fp.h1, h2, s);
  rep.separation_r = sep.r;
  rep.tau_at_min = sep.tau_min;
  rep.tau_table = sep.table;
  rep.certified = sep.r > 0.0;
  if (rep.certified) {
    const CoverRegion cl = closed_loop(fp.h1, h2, s);
    rep.regions["closed_loop"] = cl;
    rep.gain_bound = std::min(1.0 / sep.r, rmin(cl));
    rep.wellposed_claim = fp.incremental;
    rep.causal_claim = fp.incremental;
    if (!fp.incremental)
      rep.notes.push_back("well-posedness assumed, not proven; causality not claimed");
  } else {
    rep.notes.push_back("regions touch for some tau: no conclusion (not an instability proof)");
  }
  rep.seconds = seconds_since(t0);
  return rep;
}

AnalysisReport lfr_certify(const LfrModel& m, const AnalysisSettings& s) {
  const auto t0 = std::chrono::steady_clock::now();
  m.validate();
  require_wellposed_ack(m.phi.incremental, s.assume_wellposed);
  if (!m.G.is_hurwitz())
    throw HypothesisError("loop transformation needed: G must be stable (A is not Hurwitz)");

  AnalysisReport rep;
  rep.settings = s;
  rep.incremental = m.phi.incremental;
  const DiskAlgebraRegion gzw = block_bound(m.Gzw(), s);
  const DiskAlgebraRegion gzu = block_bound(m.Gzu(), s);
  const DiskAlgebraRegion gyw = block_bound(m.Gyw(), s);
  const DiskAlgebraRegion gyu = block_bound(m.Gyu(), s);
  const Region phi = m.phi.region();
  const Region minus_gzw = scale_real(gzw, -1.0);
  rep.regions["G_zw"] = gzw;
  rep.regions["G_zu"] = gzu;
  rep.regions["G_yw"] = gyw;
  rep.regions["G_yu"] = gyu;
  rep.regions["phi"] = phi;
  rep.regions["phi_inverse"] = mobius_inverse(phi);

  // [Phi, -G_zw] must stay separated along the homotopy
  const auto sep = sweep(phi, minus_gzw, s);
  rep.separation_r = sep.r;
  rep.tau_at_min = sep.tau_min;
  rep.tau_table = sep.table;
  if (!(sep.r > 0.0)) {
    rep.notes.push_back("Phi^-1 and tau G_zw touch for some tau: no conclusion");
    rep.seconds = seconds_since(t0);
    return rep;
  }

  const CoverRegion Z = closed_loop(phi, minus_gzw, s);
  const CoverRegion W = product(cover_of(gyw, s.resolution), Z, s);
  const CoverRegion V = product(W, cover_of(gzu, s.resolution), s);
  const CoverRegion R = sum(cover_of(gyu, s.resolution), V, s);
  rep.regions["Z"] = Z;
  rep.regions["W"] = W;
  rep.regions["V"] = V;
  rep.regions["R"] = R;
  rep.gain_bound = rmin(R);
  rep.certified = std::isfinite(rep.gain_bound);
  rep.wellposed_claim = rep.certified && m.phi.incremental;
  rep.causal_claim = rep.certified && m.phi.incremental;
  rep.notes.push_back("gain bound evaluated at tau = 1; other tau enter only the separation check");
  rep.notes.push_back("singular value extrema are sampled estimates with safety inflation");
  if (!m.phi.incremental)
    rep.notes.push_back("non-incremental path: well-posedness assumed, causality not claimed");
  if (!rep.certified) rep.notes.push_back("closed-loop region is unbounded");
  rep.seconds = seconds_since(t0);
  return rep;
}

DimensionCheck validate_dimensions(Connection kind, const BlockDims& a, const BlockDims& b) {
  for (const auto* x : {&a, &b})
    if (x->inputs <= 0 || x->outputs <= 0)
      throw InputError("block '" + x->name + "' needs positive dimensions");
  DimensionCheck c;
  auto series = [&c](const BlockDims& inner, const BlockDims& outer) {
    if (inner.outputs > outer.inputs)
      throw InputError("series " + inner.name + " -> " + outer.name + ": " +
                       std::to_string(inner.outputs) + " outputs exceed " +
                       std::to_string(outer.inputs) +
                       " inputs, so the range assumption of the product rule fails");
    if (inner.outputs < outer.inputs)
      c.warnings.push_back("series " + inner.name + " -> " + outer.name +
                           ": missing channels act as zero outputs (conservative)");
  };
  switch (kind) {
    case Connection::series:
      series(a, b);
      break;
    case Connection::parallel:
      if (a.inputs != b.inputs)
        throw InputError("parallel " + a.name + " + " + b.name + ": input dimensions differ");
      if (a.outputs != b.outputs)
        c.warnings.push_back("parallel " + a.name + " + " + b.name +
                             ": the narrower block gains zero outputs");
      break;
    case Connection::feedback:
      series(a, b);
      series(b, a);
      break;
  }
  c.ok = true;
  return c;
}

}  // namespace srg
