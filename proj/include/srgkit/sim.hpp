#pragma once

#include <cstdint>
#include <vector>

#include "srgkit/analysis.hpp"
#include "srgkit/nonlin.hpp"

namespace srg {

/// Uniformly sampled signal: values(k, i) is channel i at time k * dt.
struct Signal {
  double dt = 0.0;
  Matrix values;

  int samples() const { return static_cast<int>(values.rows()); }
  int channels() const { return static_cast<int>(values.cols()); }
  double time(int k) const { return k * dt; }
  /// sqrt(sum |v|^2 dt)
  double l2_norm() const;
};

struct SimConfig {
  double dt = 1e-3;
  double horizon = 10.0;
  int max_iters = 200;     // algebraic loop
  double loop_tol = 1e-12;
};

/// dt = 1e-3 times the fastest time constant, but no finer than horizon/2e4;
/// horizon = 50 dominant time constants.
SimConfig default_sim_config(const StateSpace& G);

/// RK4 with zero initial state; w = Phi(z) channel by channel. Inputs are
/// linearly interpolated between samples.
Signal simulate_lfr(const LfrModel& m, const std::vector<NamedNonlinearity>& nl,
                    const Signal& u, const SimConfig& cfg);

struct ExcitationSpec {
  int multisines = 20;
  int noise = 20;
  double amplitude = 1.0;
  std::uint64_t seed = 1;
  bool incremental = true;  // false: second input of each pair is zero
};

struct GainEstimate {
  double value = 0.0;
  std::size_t num_pairs = 0;
  std::uint64_t best_pair_seed = 0;
};

/// Largest observed ||y1 - y2|| / ||u1 - u2|| over seeded input pairs.
GainEstimate empirical_incremental_gain(const LfrModel& m,
                                        const std::vector<NamedNonlinearity>& nl,
                                        const ExcitationSpec& ex, const SimConfig& cfg);

/// Sum of `components` sines with log-spaced frequencies in [w_lo, w_hi]
/// and random phases, scaled to peak amplitude `amp` per channel.
Signal multisine(int channels, const SimConfig& cfg, double w_lo, double w_hi,
                 int components, double amp, std::uint64_t seed);
/// White Gaussian noise through a first-order low-pass with corner w_c.
Signal filtered_noise(int channels, const SimConfig& cfg, double w_c, double amp,
                      std::uint64_t seed);

}  // namespace srg
