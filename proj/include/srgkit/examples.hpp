#pragma once

#include <string>
#include <vector>

#include "srgkit/analysis.hpp"
#include "srgkit/nonlin.hpp"

namespace srg::examples {

/// An LFR model with concrete nonlinearities for the simulation oracle.
struct Concrete {
  LfrModel model;
  std::vector<NamedNonlinearity> nl;
};

// ---- controlled Lur'e plant with saturation
// K(s) = 1/(s+1), P(s) = 3/((s-2)(s/10+1)), phi1 = saturation, phi2 = slope 1
// inside [-1, 1] and slope 2 outside. z = (controller output, plant output),
// w = (phi1, phi2) outputs, u = reference, y = plant output.

/// Untransformed realization; phi2 enters the plant input with a minus sign.
Concrete lure_base();
/// Shifted by kappa (phi_i - kappa_i), with the w2 column sign chosen so
/// that G_zw has two identical columns [-S P~ K; S P~] as in the closed form.
Concrete lure(double kappa1, double kappa2);
/// Closed-form transfer matrix of lure(k1, k2) at s = j omega, rows
/// (z1, z2, y) and columns (w1, w2, u).
CMatrix lure_closed_form(double kappa1, double kappa2, double omega);

// ---- two masses with nonlinear springs
struct MsdParams {
  double m1 = 0.5, m2 = 3.0, k1 = 1.0, k2 = 2.0, d1 = 0.3, d2 = 1.0, d12 = 1.0,
         k12 = 0.5;
};
/// Rows (z1, z2, z3, y1, y2), columns (w1, w2, w3, u1, u2).
StateSpace msd_state_space(const MsdParams& p = {});
/// phi = -tanh on both masses, phi12 = 2 tanh - id on the coupling.
Concrete msd_base(const MsdParams& p = {});
/// phi + x/2 on the masses and phi12 / 2 on the coupling.
Concrete msd(const MsdParams& p = {});

// ---- norm-bounded feedback around G = [P, H2]
StateSpace iqc_plant();  // P
StateSpace iqc_h2();     // H2
StateSpace iqc_loop();   // G = (I + P H2)^{-1} P
inline constexpr double kIqcPhiGain = 0.31622776601683794;  // sqrt(0.1)
/// H1 = SRG(G), H2 = -Phi with gain <= sqrt(0.1); non-incremental.
FeedbackProblem iqc_problem(const AnalysisSettings& s = {});
/// H1 = SRG(P) only.
FeedbackProblem iqc_inner_problem(const AnalysisSettings& s = {});
/// The same loop as an LFR (w = Phi(y) added to the input) for simulation.
Concrete iqc_lfr();

struct Reference {
  std::string label;
  double value;
};

inline const std::vector<Reference>& references() {
  static const std::vector<Reference> r{
      {"lure kappa=(2,3)", 2.33},
      {"lure kappa=(0.5,1.5)", 6.13},
      {"msd", 12.09},
      {"iqc T", 1.79},
      {"iqc T, IQC method", 4.05},
  };
  return r;
}

}  // namespace srg::examples
