#include "srgkit/sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "srgkit/error.hpp"

namespace srg {

double Signal::l2_norm() const { return std::sqrt(values.squaredNorm() * dt); }

namespace {

struct Poles {
  double slow = 1.0;  // smallest |Re|
  double fast = 1.0;  // largest modulus
};

Poles poles(const StateSpace& G) {
  Poles p;
  if (G.states() == 0) return p;
  const Eigen::VectorXcd ev = Eigen::EigenSolver<Matrix>(G.A()).eigenvalues();
  p.slow = kInf;
  p.fast = 0.0;
  for (const auto& l : ev) {
    p.slow = std::min(p.slow, std::max(std::abs(l.real()), 1e-6));
    p.fast = std::max(p.fast, std::abs(l));
  }
  p.fast = std::max(p.fast, p.slow);
  return p;
}

}  // namespace

SimConfig default_sim_config(const StateSpace& G) {
  const Poles p = poles(G);
  SimConfig c;
  c.horizon = 50.0 / p.slow;
  c.dt = std::max(1e-3 / p.fast, c.horizon / 2e4);
  c.dt = std::min(c.dt, 0.5 / p.fast);  // stays well inside the RK4 stability region
  return c;
}

Signal simulate_lfr(const LfrModel& m, const std::vector<NamedNonlinearity>& nl,
                    const Signal& u, const SimConfig& cfg) {
  m.validate();
  const auto& p = m.partition;
  if (static_cast<int>(nl.size()) != m.nz() || m.nz() != m.nw())
    throw InputError("need one nonlinearity per z/w channel");
  if (u.channels() != m.nu()) throw InputError("input signal has the wrong channel count");
  if (!(cfg.dt > 0.0) || !(cfg.horizon > cfg.dt)) throw InputError("need dt > 0 and horizon > dt");
  if (std::abs(u.dt - cfg.dt) > 1e-12 * cfg.dt) throw InputError("input sampling differs from dt");

  const Matrix& A = m.G.A();
  const Matrix Bw = m.G.B()(Eigen::all, p.w_cols), Bu = m.G.B()(Eigen::all, p.u_cols);
  const Matrix Cz = m.G.C()(p.z_rows, Eigen::all), Cy = m.G.C()(p.y_rows, Eigen::all);
  const Matrix Dzw = m.G.D()(p.z_rows, p.w_cols), Dzu = m.G.D()(p.z_rows, p.u_cols);
  const Matrix Dyw = m.G.D()(p.y_rows, p.w_cols), Dyu = m.G.D()(p.y_rows, p.u_cols);
  const bool loop = Dzw.cwiseAbs().maxCoeff() > 0.0;
  if (loop) {
    double L = 0.0;
    for (const auto& f : nl) L = std::max(L, f.lipschitz());
    const double contraction = Dzw.operatorNorm() * L;
    if (!(contraction < 1.0))
      throw NumericalError("algebraic loop is not a contraction (||D_zw|| Lip(Phi) = " +
                           std::to_string(contraction) + ")");
  }

  const int n = m.G.states(), nzc = m.nz();
  int step = 0;
  auto phi = [&](const Eigen::VectorXd& z) {
    Eigen::VectorXd w(nzc);
    for (int i = 0; i < nzc; ++i) w(i) = nl[i](z(i));
    return w;
  };
  // w solving w = Phi(Cz x + Dzw w + Dzu u)
  auto solve_w = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& uu) {
    const Eigen::VectorXd base = Cz * x + Dzu * uu;
    Eigen::VectorXd w = phi(base);
    if (!loop) return w;
    for (int it = 0; it < cfg.max_iters; ++it) {
      const Eigen::VectorXd next = phi(base + Dzw * w);
      const double d = (next - w).norm();
      w = next;
      if (d <= cfg.loop_tol * std::max(1.0, w.norm())) return w;
    }
    throw NumericalError("algebraic loop did not converge at step " + std::to_string(step));
  };
  auto f = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& uu) -> Eigen::VectorXd {
    return A * x + Bw * solve_w(x, uu) + Bu * uu;
  };

  const int N = std::min(u.samples(), static_cast<int>(std::floor(cfg.horizon / cfg.dt)) + 1);
  Signal y;
  y.dt = cfg.dt;
  y.values = Matrix::Zero(N, m.ny());
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  const double h = cfg.dt;
  for (step = 0; step < N; ++step) {
    const Eigen::VectorXd u0 = u.values.row(step).transpose();
    const Eigen::VectorXd w0 = solve_w(x, u0);
    y.values.row(step) = (Cy * x + Dyw * w0 + Dyu * u0).transpose();
    if (!y.values.row(step).allFinite())
      throw NumericalError("simulation produced non-finite output at step " + std::to_string(step));
    if (step + 1 == N || n == 0) continue;
    const Eigen::VectorXd u1 = u.values.row(step + 1).transpose();
    const Eigen::VectorXd um = 0.5 * (u0 + u1);
    const Eigen::VectorXd k1 = A * x + Bw * w0 + Bu * u0;
    const Eigen::VectorXd k2 = f(x + 0.5 * h * k1, um);
    const Eigen::VectorXd k3 = f(x + 0.5 * h * k2, um);
    const Eigen::VectorXd k4 = f(x + h * k3, u1);
    x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!x.allFinite() || x.cwiseAbs().maxCoeff() > 1e150)
      throw NumericalError("simulation diverged at step " + std::to_string(step));
  }
  return y;
}

Signal multisine(int channels, const SimConfig& cfg, double w_lo, double w_hi,
                 int components, double amp, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 2.0 * M_PI);
  const int N = static_cast<int>(std::floor(cfg.horizon / cfg.dt)) + 1;
  Signal s;
  s.dt = cfg.dt;
  s.values = Matrix::Zero(N, channels);
  for (int c = 0; c < channels; ++c) {
    for (int j = 0; j < components; ++j) {
      const double t = components > 1 ? static_cast<double>(j) / (components - 1) : 0.5;
      const double w = w_lo * std::pow(w_hi / w_lo, t);
      const double ph = U(rng);
      for (int k = 0; k < N; ++k) s.values(k, c) += std::sin(w * k * cfg.dt + ph);
    }
    const double peak = s.values.col(c).cwiseAbs().maxCoeff();
    if (peak > 0.0) s.values.col(c) *= amp / peak;
  }
  return s;
}

Signal filtered_noise(int channels, const SimConfig& cfg, double w_c, double amp,
                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> G(0.0, 1.0);
  const int N = static_cast<int>(std::floor(cfg.horizon / cfg.dt)) + 1;
  Signal s;
  s.dt = cfg.dt;
  s.values = Matrix::Zero(N, channels);
  const double a = std::exp(-w_c * cfg.dt);
  for (int c = 0; c < channels; ++c) {
    double v = 0.0;
    for (int k = 0; k < N; ++k) {
      v = a * v + (1.0 - a) * G(rng) / std::sqrt(cfg.dt * w_c);
      s.values(k, c) = v;
    }
    const double peak = s.values.col(c).cwiseAbs().maxCoeff();
    if (peak > 0.0) s.values.col(c) *= amp / peak;
  }
  return s;
}

GainEstimate empirical_incremental_gain(const LfrModel& m,
                                        const std::vector<NamedNonlinearity>& nl,
                                        const ExcitationSpec& ex, const SimConfig& cfg) {
  const Poles pl = poles(m.G);
  const double w_lo = 0.1 * pl.slow, w_hi = std::min(10.0 * pl.fast, 0.2 / cfg.dt);
  const int nu = m.nu();
  GainEstimate g;
  auto consider = [&](const Signal& u1, const Signal& u2, std::uint64_t tag) {
    Signal du;
    du.dt = cfg.dt;
    du.values = u1.values - u2.values;
    const double den = du.l2_norm();
    if (!(den > 0.0)) return;
    const Signal y1 = simulate_lfr(m, nl, u1, cfg);
    Signal dy;
    dy.dt = cfg.dt;
    if (ex.incremental) {
      dy.values = y1.values - simulate_lfr(m, nl, u2, cfg).values;
    } else {
      dy.values = y1.values;  // R(0) = 0
    }
    const double ratio = dy.l2_norm() / den;
    ++g.num_pairs;
    if (ratio > g.value) {
      g.value = ratio;
      g.best_pair_seed = tag;
    }
  };
  std::mt19937_64 rng(ex.seed);
  std::uniform_real_distribution<double> level(0.05, 1.0);
  const int total = ex.multisines + ex.noise;
  for (int k = 0; k < total; ++k) {
    const std::uint64_t tag = ex.seed * 1000003ULL + static_cast<std::uint64_t>(k);
    const double a1 = ex.amplitude * level(rng) * 3.0;
    const double a2 = ex.amplitude * level(rng);
    Signal u1, d;
    if (k < ex.multisines) {
      // narrow bands sweep the spectrum, every fourth pair is broadband
      const double t = ex.multisines > 1 ? static_cast<double>(k) / (ex.multisines - 1) : 0.5;
      const double wc = w_lo * std::pow(w_hi / w_lo, t);
      const bool broad = k % 4 == 3;
      u1 = multisine(nu, cfg, w_lo, w_hi, 20, a1, tag);
      d = broad ? multisine(nu, cfg, w_lo, w_hi, 20, a2, tag + 1)
                : multisine(nu, cfg, wc / 1.2, wc * 1.2, 5, a2, tag + 1);
    } else {
      const double wc = w_lo * std::pow(w_hi / w_lo, level(rng));
      u1 = filtered_noise(nu, cfg, wc, a1, tag);
      d = filtered_noise(nu, cfg, wc, a2, tag + 1);
    }
    if (!ex.incremental) {
      Signal zero = d;
      zero.values.setZero();
      consider(d, zero, tag);
      continue;
    }
    Signal u2 = u1;
    u2.values += d.values;
    consider(u1, u2, tag);
  }
  return g;
}

}  // namespace srg
