#include <cmath>

#include "doctest.h"
#include "srgkit/error.hpp"
#include "srgkit/examples.hpp"
#include "srgkit/io.hpp"

using namespace srg;
using io::Json;

TEST_CASE("non-finite numbers are strings") {
  CHECK(io::number(kInf) == Json("inf"));
  CHECK(io::number(-kInf) == Json("-inf"));
  CHECK(io::number(1.5) == Json(1.5));
  CHECK(std::isinf(io::number_from(Json("inf"))));
  CHECK_THROWS_AS(io::number_from(Json("big")), InputError);
}

TEST_CASE("disk-algebra regions round-trip") {
  const auto r = mobius_inverse(DiskAlgebraRegion::interval(-1.0, 2.0));
  const Region back = io::region_from_json(io::to_json(Region(r)));
  const auto& d = std::get<DiskAlgebraRegion>(back);
  CHECK(d.contains_infinity() == r.contains_infinity());
  REQUIRE(d.lower().size() == r.lower().size());
  CHECK(d.lower()[0].center == r.lower()[0].center);
  CHECK(d.lower()[0].radius == r.lower()[0].radius);
  CHECK(io::to_json(back).dump() == io::to_json(Region(r)).dump());
}

TEST_CASE("covers are symmetrized on load") {
  const Json j = Json::parse(R"({"kind": "cover", "points": [[1.0, 0.5]], "epsilon": 0.1})");
  const auto c = std::get<CoverRegion>(io::region_from_json(j));
  CHECK(c.covers(Complex(1.0, 0.5)));
  CHECK(c.covers(Complex(1.0, -0.5)));
  const Json e = Json::parse(R"({"kind": "cover", "points": [[0, 0]], "epsilon": 0.1, "exterior_radius": 5})");
  CHECK(std::get<CoverRegion>(io::region_from_json(e)).has_exterior());
  const Json r = Json::parse(R"({"kind": "cover", "points": [[0, 0], [2, 0]], "radii": [0.1, 0.3]})");
  const auto rc = std::get<CoverRegion>(io::region_from_json(r));
  CHECK(rc.covers(Complex(2.25, 0.0)));
  CHECK_FALSE(rc.covers(Complex(0.25, 0.0)));
}

TEST_CASE("malformed regions are input errors") {
  CHECK_THROWS_AS(io::region_from_json(Json::parse(R"({"kind": "blob"})")), InputError);
  CHECK_THROWS_AS(io::region_from_json(Json::parse(R"({"kind": "cover"})")), InputError);
  CHECK_THROWS_AS(io::region_from_json(Json::parse(R"({"kind": "disk_algebra", "upper": [[1]]})")), InputError);
  CHECK_THROWS_AS(io::region_from_json(Json::parse(R"([1, 2])")), InputError);
}

TEST_CASE("state space round-trip and static gains") {
  const StateSpace g = examples::msd_state_space();
  const StateSpace back = io::state_space_from_json(io::to_json(g));
  CHECK((back.A() - g.A()).norm() == 0.0);
  CHECK((back.B() - g.B()).norm() == 0.0);
  CHECK((back.C() - g.C()).norm() == 0.0);
  CHECK((back.D() - g.D()).norm() == 0.0);
  const StateSpace s = io::state_space_from_json(Json::parse(R"({"D": [[1, 2], [3, 4]]})"));
  CHECK(s.states() == 0);
  CHECK(s.inputs() == 2);
  CHECK_THROWS_AS(io::state_space_from_json(Json::parse(R"({"A": [[1, 2]], "D": [[1]]})")), InputError);
  CHECK_THROWS_AS(io::state_space_from_json(Json::parse(R"({"A": [[-1]]})")), InputError);
}

TEST_CASE("LFR models round-trip with their nonlinearities") {
  const auto c = examples::msd();
  const Json j = io::to_json(c.model, c.nl);
  const LfrModel m = io::lfr_from_json(j);
  const auto nl = io::nonlinearities_from_json(j);
  CHECK(m.partition.z_rows == c.model.partition.z_rows);
  CHECK(m.partition.u_cols == c.model.partition.u_cols);
  CHECK(std::get<SectorBound>(m.phi.source).channels == std::get<SectorBound>(c.model.phi.source).channels);
  REQUIRE(nl.size() == c.nl.size());
  for (std::size_t i = 0; i < nl.size(); ++i)
    for (double x : {-3.0, -0.2, 0.0, 0.7, 5.0}) CHECK(nl[i](x) == doctest::Approx(c.nl[i](x)));
  CHECK(io::to_json(m, nl).dump() == j.dump());
}

TEST_CASE("custom nonlinearities need a declared sector") {
  const Json ok = Json::parse(
      R"({"kind": "custom_pointwise", "table": [[-1, -1], [0, 0], [1, 2]], "declared_sector": [1, 2]})");
  const auto n = io::nonlinearity_from_json(ok);
  CHECK(n(0.5) == doctest::Approx(1.0));
  const Json bad = Json::parse(R"({"kind": "custom_pointwise", "table": [[-1, -1], [1, 1]]})");
  CHECK_THROWS_AS(io::nonlinearity_from_json(bad), InputError);
}

TEST_CASE("signal CSV round-trip") {
  Signal s;
  s.dt = 0.25;
  s.values = Matrix(3, 2);
  s.values << 1, 2, 3, 4, 5, 6;
  const Signal back = io::signal_from_csv(io::signal_csv(s));
  CHECK(back.dt == doctest::Approx(0.25));
  CHECK((back.values - s.values).norm() == 0.0);
  CHECK_THROWS_AS(io::signal_from_csv("t,u\n0,1\n0.1,2\n0.3,3\n"), InputError);
}

TEST_CASE("reports serialize deterministically") {
  AnalysisReport r;
  r.certified = true;
  r.separation_r = 0.25;
  r.gain_bound = 4.0;
  r.regions["phi"] = DiskAlgebraRegion::interval(0.0, 1.0);
  r.tau_table = {{0.0, 1.0}, {1.0, 0.25}};
  const auto a = io::to_json(r).dump(2), b = io::to_json(r).dump(2);
  CHECK(a == b);
  CHECK(io::to_json(r)["verdict"] == "certified");
  AnalysisReport u;
  CHECK(io::to_json(u)["gain_bound"] == "inf");
}
