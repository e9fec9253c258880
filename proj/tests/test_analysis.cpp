#include <cmath>
#include <string>

#include "doctest.h"
#include "srgkit/analysis.hpp"
#include "srgkit/error.hpp"
#include "srgkit/examples.hpp"
#include "srgkit/sim.hpp"

using namespace srg;

namespace {

AnalysisSettings coarse() {
  AnalysisSettings s;
  s.resolution = 0.01;
  s.tau_points = 21;
  return s;
}

double max_diff(const Signal& a, const Signal& b) {
  return (a.values - b.values).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("tau grid") {
  const auto t = tau_grid(5);
  REQUIRE(t.size() == 5);
  CHECK(t.front() == 0.0);
  CHECK(t[1] == doctest::Approx(0.25));
  CHECK(t.back() == 1.0);
}

TEST_CASE("separation sweep needs the end points") {
  const Region a = DiskAlgebraRegion::interval(0.5, 1.0), b = DiskAlgebraRegion::interval(0.0, 1.0);
  CHECK_THROWS_AS(separation_sweep(a, b, {0.0, 0.5}), InputError);
  CHECK_THROWS_AS(separation_sweep(a, b, {0.5, 1.0}), InputError);
  CHECK_THROWS_AS(separation_sweep(mobius_inverse(DiskAlgebraRegion::interval(-1.0, 1.0)), b, tau_grid(5)),
                  HypothesisError);
  const auto r = separation_sweep(a, b, tau_grid(11));
  // a^{-1} = D[1, 2], -tau b = D[-tau, 0]: distance 1 for every tau
  CHECK(r.r == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("separation against the zero operator") {
  // h1^{-1} = D[-1, -1/2], h2 = {0}: r = 0.5
  const auto r = separation_sweep(DiskAlgebraRegion::interval(-2.0, -1.0), DiskAlgebraRegion::point(0.0), tau_grid(11));
  CHECK(r.r == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("a finer tau grid never certifies more") {
  const auto h1 = examples::iqc_problem().h1;
  const Region h2 = DiskAlgebraRegion::interval(-1.5, 0.3);
  const auto coarse_r = separation_sweep(h1, h2, tau_grid(11)).r;
  const auto fine_r = separation_sweep(h1, h2, tau_grid(101)).r;
  CHECK(fine_r <= coarse_r + 1e-12);
}

TEST_CASE("static gains in feedback") {
  // H1 = 2, H2 = 0.5: closed loop 2 / (1 + 1) = 1
  FeedbackProblem fp{DiskAlgebraRegion::point(2.0), DiskAlgebraRegion::point(0.5), true, false};
  const auto rep = feedback_certify(fp, coarse());
  CHECK(rep.certified);
  CHECK(rep.gain_bound >= 1.0 - 1e-9);
  CHECK(rep.gain_bound <= 1.02);
}

TEST_CASE("disk operands in feedback") {
  // (D[1,2] + D[0,1])^{-1} = D[1,3]^{-1} = D[1/3, 1]
  FeedbackProblem fp{DiskAlgebraRegion::interval(0.5, 1.0), DiskAlgebraRegion::interval(0.0, 1.0), true, false};
  const auto rep = feedback_certify(fp, coarse());
  CHECK(rep.certified);
  CHECK(rep.separation_r == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(rep.gain_bound >= 1.0 - 1e-9);
  CHECK(rep.gain_bound <= 1.03);
}

TEST_CASE("overlapping regions are not certified") {
  FeedbackProblem fp{DiskAlgebraRegion::interval(-2.0, 2.0), DiskAlgebraRegion::interval(-1.0, 1.0), true, false};
  const auto rep = feedback_certify(fp, coarse());
  CHECK_FALSE(rep.certified);
  CHECK(std::isinf(rep.gain_bound));
}

TEST_CASE("non-incremental analysis needs the acknowledgment") {
  FeedbackProblem fp{DiskAlgebraRegion::interval(0.5, 1.0), DiskAlgebraRegion::interval(0.0, 1.0), false, false};
  CHECK_THROWS_AS(feedback_certify(fp, coarse()), HypothesisError);
  fp.wellposedness_assumed = true;
  const auto rep = feedback_certify(fp, coarse());
  CHECK(rep.certified);
  CHECK_FALSE(rep.incremental);
  CHECK_FALSE(rep.wellposed_claim);
}

TEST_CASE("unstable LFR blocks ask for a loop transformation") {
  const auto base = examples::lure_base();
  try {
    lfr_certify(base.model, coarse());
    FAIL("expected a hypothesis error");
  } catch (const HypothesisError& e) {
    CHECK(std::string(e.what()).find("loop transformation") != std::string::npos);
  }
}

TEST_CASE("transformed realization matches the closed form") {
  for (auto [k1, k2] : {std::pair{2.0, 3.0}, std::pair{0.5, 1.5}}) {
    const auto c = examples::lure(k1, k2);
    double err = 0.0;
    for (double w : default_grid(c.model.G).omegas)
      err = std::max(err, (freq_response(c.model.G, w) - examples::lure_closed_form(k1, k2, w)).cwiseAbs().maxCoeff());
    CHECK(err <= 1e-9);
  }
}

TEST_CASE("loop transformation keeps the closed loop unchanged") {
  SUBCASE("mass-spring-damper") {
    const auto base = examples::msd_base();
    const auto tr = examples::msd();
    SimConfig cfg = default_sim_config(base.model.G);
    cfg.horizon = 20.0;
    const Signal u = multisine(2, cfg, 0.1, 5.0, 6, 1.0, 3);
    const Signal y0 = simulate_lfr(base.model, base.nl, u, cfg);
    const Signal y1 = simulate_lfr(tr.model, tr.nl, u, cfg);
    CHECK(max_diff(y0, y1) < 1e-8);
  }
  SUBCASE("Lur'e plant") {
    const auto base = examples::lure_base();
    Matrix K = Matrix::Zero(2, 2);
    K(0, 0) = 2.0;
    K(1, 1) = 3.0;
    const LfrModel tr = loop_transform_lfr(base.model, K, Matrix::Identity(2, 2));
    const std::vector<NamedNonlinearity> nl{base.nl[0].transformed(1.0, -2.0), base.nl[1].transformed(1.0, -3.0)};
    SimConfig cfg;
    cfg.dt = 1e-3;
    cfg.horizon = 3.0;
    const Signal u = multisine(1, cfg, 0.5, 5.0, 4, 0.5, 5);
    const Signal y0 = simulate_lfr(base.model, base.nl, u, cfg);
    const Signal y1 = simulate_lfr(tr, nl, u, cfg);
    CHECK(max_diff(y0, y1) < 1e-7 * std::max(1.0, y0.values.cwiseAbs().maxCoeff()));
    // sector follows: [0,1] - 2 and [1,2] - 3
    const auto& s = std::get<SectorBound>(tr.phi.source);
    CHECK(s.channels[0] == std::pair{-2.0, -1.0});
    CHECK(s.channels[1] == std::pair{-2.0, -1.0});
  }
}

TEST_CASE("transform sweep skips unstable candidates") {
  const auto base = examples::lure_base();
  const auto res = transform_sweep(base.model, {{0.0, 0.0}, {2.0, 3.0}}, coarse());
  REQUIRE(res.table.size() == 2);
  CHECK_FALSE(res.table[0].stable);
  CHECK(res.table[1].stable);
}

TEST_CASE("model validation") {
  auto m = examples::lure(2.0, 3.0).model;
  m.partition.z_rows = {0, 5};
  CHECK_THROWS_AS(m.validate(), InputError);
  m = examples::lure(2.0, 3.0).model;
  m.phi.source = SectorBound{{{0.0, 1.0}}, true};  // one channel for two w inputs
  CHECK_THROWS_AS(m.validate(), InputError);
}

TEST_CASE("dimension checks") {
  const BlockDims a{"A", 2, 3}, b{"B", 3, 1}, c{"C", 2, 3};
  CHECK(validate_dimensions(Connection::series, a, b).ok);
  CHECK_THROWS_AS(validate_dimensions(Connection::series, a, BlockDims{"X", 2, 1}), InputError);
  const BlockDims narrow{"N", 4, 1};
  const auto w = validate_dimensions(Connection::series, a, narrow);
  CHECK(w.ok);
  CHECK_FALSE(w.warnings.empty());
  CHECK(validate_dimensions(Connection::parallel, a, c).ok);
  CHECK_THROWS_AS(validate_dimensions(Connection::parallel, a, b), InputError);
}

TEST_CASE("Lur'e example certifies with a coarse cover") {
  const auto rep = lfr_certify(examples::lure(2.0, 3.0).model, coarse());
  CHECK(rep.certified);
  CHECK(rep.separation_r > 0.0);
  CHECK(rep.gain_bound > 2.0);
  CHECK(rep.gain_bound < 3.5);
  for (const char* key : {"phi", "phi_inverse", "G_zw", "G_zu", "G_yw", "G_yu", "Z", "W", "V", "R"})
    CHECK(rep.regions.count(key) == 1);
}
