#include <cmath>

#include "doctest.h"
#include "srgkit/error.hpp"
#include "srgkit/sim.hpp"

using namespace srg;

namespace {

// x' = -x + u, z = x, y = x; w enters through a zero column
LfrModel lag_model(double dzw = 0.0) {
  Matrix A = Matrix::Constant(1, 1, -1.0), B(1, 2), C(2, 1), D = Matrix::Zero(2, 2);
  B << 0.0, 1.0;
  C << 1.0, 1.0;
  D(0, 0) = dzw;
  LfrModel m;
  m.G = StateSpace(A, B, C, D);
  m.partition = {{0}, {1}, {0}, {1}};
  m.phi.source = SectorBound{{{0.0, 1.0}}, true};
  return m;
}

// z = a w + u, y = z: purely algebraic
LfrModel static_loop(double a) {
  Matrix D(2, 2);
  D << a, 1.0, a, 1.0;
  LfrModel m;
  m.G = StateSpace::static_gain(D);
  m.partition = {{0}, {1}, {0}, {1}};
  m.phi.source = SectorBound{{{0.0, 1.0}}, true};
  return m;
}

Signal constant(double v, const SimConfig& cfg) {
  Signal s;
  s.dt = cfg.dt;
  s.values = Matrix::Constant(static_cast<int>(std::round(cfg.horizon / cfg.dt)) + 1, 1, v);
  return s;
}

}  // namespace

TEST_CASE("step response of a first-order lag") {
  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.horizon = 5.0;
  const Signal y = simulate_lfr(lag_model(), {NamedNonlinearity::saturation()}, constant(1.0, cfg), cfg);
  double err = 0.0;
  for (int k = 0; k < y.samples(); ++k) err = std::max(err, std::abs(y.values(k, 0) - (1.0 - std::exp(-y.time(k)))));
  CHECK(err < 1e-10);
}

TEST_CASE("algebraic loop is solved by fixed-point iteration") {
  SimConfig cfg;
  cfg.dt = 0.01;
  cfg.horizon = 1.0;
  const Signal y = simulate_lfr(static_loop(0.5), {NamedNonlinearity::tanh()}, constant(0.8, cfg), cfg);
  const double v = y.values(10, 0);
  CHECK(std::abs(v - (0.5 * std::tanh(v) + 0.8)) < 1e-10);
}

TEST_CASE("non-contracting algebraic loop is rejected") {
  SimConfig cfg;
  cfg.dt = 0.01;
  cfg.horizon = 1.0;
  CHECK_THROWS_AS(simulate_lfr(static_loop(2.0), {NamedNonlinearity::tanh()}, constant(0.8, cfg), cfg), NumericalError);
}

TEST_CASE("input validation") {
  SimConfig cfg;
  cfg.dt = 0.01;
  cfg.horizon = 1.0;
  CHECK_THROWS_AS(simulate_lfr(lag_model(), {}, constant(1.0, cfg), cfg), InputError);
  SimConfig other = cfg;
  other.dt = 0.02;
  CHECK_THROWS_AS(simulate_lfr(lag_model(), {NamedNonlinearity::tanh()}, constant(1.0, other), cfg), InputError);
}

TEST_CASE("excitation signals") {
  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.horizon = 10.0;
  const Signal a = multisine(2, cfg, 0.1, 10.0, 8, 0.7, 42);
  const Signal b = multisine(2, cfg, 0.1, 10.0, 8, 0.7, 42);
  const Signal c = multisine(2, cfg, 0.1, 10.0, 8, 0.7, 43);
  CHECK(a.channels() == 2);
  CHECK(a.values.cwiseAbs().maxCoeff() == doctest::Approx(0.7));
  CHECK((a.values - b.values).norm() == 0.0);
  CHECK((a.values - c.values).norm() > 0.0);
  const Signal n = filtered_noise(1, cfg, 2.0, 1.0, 7);
  CHECK(n.values.cwiseAbs().maxCoeff() == doctest::Approx(1.0));
  CHECK(n.l2_norm() > 0.0);
}

TEST_CASE("L2 norm of a constant signal") {
  Signal s;
  s.dt = 0.5;
  s.values = Matrix::Constant(4, 1, 2.0);
  CHECK(s.l2_norm() == doctest::Approx(std::sqrt(4 * 4.0 * 0.5)));
}

TEST_CASE("empirical gain of a linear lag stays below its H-infinity norm") {
  LfrModel m = lag_model();
  const std::vector<NamedNonlinearity> nl{NamedNonlinearity::saturation()};
  const SimConfig cfg = default_sim_config(m.G);
  ExcitationSpec ex;
  ex.multisines = 4;
  ex.noise = 4;
  const auto g1 = empirical_incremental_gain(m, nl, ex, cfg);
  const auto g2 = empirical_incremental_gain(m, nl, ex, cfg);
  CHECK(g1.value <= 1.0 + 1e-6);
  CHECK(g1.value > 0.5);
  CHECK(g1.num_pairs == 8);
  CHECK(g1.value == g2.value);
  CHECK(g1.best_pair_seed == g2.best_pair_seed);
}

TEST_CASE("default configuration follows the time constants") {
  const SimConfig cfg = default_sim_config(lag_model().G);
  CHECK(cfg.horizon == doctest::Approx(50.0));
  CHECK(cfg.dt > 0.0);
  CHECK(cfg.dt <= 0.5);
  CHECK(cfg.horizon / cfg.dt <= 2e4 + 1);
}
