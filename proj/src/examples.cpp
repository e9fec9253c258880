#include "srgkit/examples.hpp"

#include <cmath>

namespace srg::examples {

Concrete lure_base() {
  Matrix A(3, 3), B(3, 3), C(3, 3);
  // x1, x2: plant 30 / (s^2 + 8 s - 20); x3: controller
  A << 0, 1, 0,
       20, -8, 0,
       -30, 0, -1;
  B << 0, 0, 0,
       1, -1, 0,
       0, 0, 1;
  C << 0, 0, 1,
       30, 0, 0,
       30, 0, 0;
  Concrete c;
  c.model.G = StateSpace(A, B, C, Matrix::Zero(3, 3));
  c.model.partition = {{0, 1}, {2}, {0, 1}, {2}};
  c.model.phi.source = SectorBound{{{0.0, 1.0}, {1.0, 2.0}}, true};
  c.model.name = "lure";
  c.nl = {NamedNonlinearity::saturation(1.0, 1.0, 0.0),
          NamedNonlinearity::saturation(1.0, 1.0, 2.0)};
  return c;
}

Concrete lure(double k1, double k2) {
  Concrete base = lure_base();
  Matrix K = Matrix::Zero(2, 2);
  K(0, 0) = k1;
  K(1, 1) = k2;
  Concrete c;
  c.model = loop_transform_lfr(base.model, K, Matrix::Identity(2, 2));
  // flip the sign convention of the second channel's input to the plant
  Matrix B = c.model.G.B(), D = c.model.G.D();
  B.col(1) *= -1.0;
  D.col(1) *= -1.0;
  c.model.G = StateSpace(c.model.G.A(), B, c.model.G.C(), D);
  c.model.name = "lure kappa=(" + std::to_string(k1) + "," + std::to_string(k2) + ")";
  c.nl = {base.nl[0].transformed(1.0, -k1), base.nl[1].transformed(1.0, -k2)};
  return c;
}

CMatrix lure_closed_form(double k1, double k2, double omega) {
  const Complex s(0.0, omega);
  const Complex K = 1.0 / (s + 1.0);
  const Complex P = 3.0 / ((s - 2.0) * (s / 10.0 + 1.0));
  const Complex Pt = P / (1.0 + k2 * P);
  const Complex L = k1 * Pt * K;
  const Complex S = 1.0 / (1.0 + L);
  CMatrix G(3, 3);
  G << -S * Pt * K, -S * Pt * K, S * K,
       S * Pt, S * Pt, S * L,
       S * Pt, S * Pt, S * L;
  return G;
}

StateSpace msd_state_space(const MsdParams& p) {
  Matrix A(4, 4), B(4, 5), C(5, 4);
  A << 0, 1, 0, 0,
       (-p.k1 - p.k12) / p.m1, (-p.d1 - p.d12) / p.m1, p.k12 / p.m1, p.d12 / p.m1,
       0, 0, 0, 1,
       p.k12 / p.m2, p.d12 / p.m2, (-p.k2 - p.k12) / p.m2, (-p.d2 - p.d12) / p.m2;
  B << 0, 0, 0, 0, 0,
       1 / p.m1, 0, 1 / p.m1, 1 / p.m1, 0,
       0, 0, 0, 0, 0,
       0, 1 / p.m2, -1 / p.m2, 0, 1 / p.m2;
  C << 1, 0, 0, 0,
       0, 0, 1, 0,
       1, 0, -1, 0,
       1, 0, 0, 0,
       0, 0, 1, 0;
  return {A, B, C, Matrix::Zero(5, 5)};
}

Concrete msd_base(const MsdParams& p) {
  Concrete c;
  c.model.G = msd_state_space(p);
  c.model.partition = {{0, 1, 2}, {3, 4}, {0, 1, 2}, {3, 4}};
  c.model.phi.source = SectorBound{{{-1.0, 0.0}, {-1.0, 0.0}, {-1.0, 1.0}}, true};
  c.model.name = "msd";
  c.nl = {NamedNonlinearity::negated_tanh(), NamedNonlinearity::negated_tanh(),
          NamedNonlinearity::tanh(2.0, -1.0)};
  return c;
}

Concrete msd(const MsdParams& p) {
  const Concrete base = msd_base(p);
  const auto& sector = std::get<SectorBound>(base.model.phi.source);
  const auto norm = normalize_sectors(sector);
  Matrix K = Matrix::Zero(3, 3), S = Matrix::Zero(3, 3);
  Concrete c;
  for (int i = 0; i < 3; ++i) {
    S(i, i) = norm.sigma[i];
    K(i, i) = -norm.kappa[i] / norm.sigma[i];
    c.nl.push_back(base.nl[i].transformed(norm.sigma[i], norm.kappa[i]));
  }
  c.model = loop_transform_lfr(base.model, K, S);
  c.model.name = "msd transformed";
  return c;
}

StateSpace iqc_plant() {
  const std::vector<double> cubic{1, 5, 2, 1};
  return tf_matrix({{{{0.1}, {1, 1}}, {{1}, cubic}},
                    {{{0.1}, cubic}, {{0.2}, {1, 5}}}});
}

StateSpace iqc_h2() {
  return tf_matrix({{{{1.7}, {1, 2, 1}}, {{0}, {1}}},
                    {{{0}, {1}}, {{1.7}, {1, 3, 3}}}});
}

StateSpace iqc_loop() { return feedback(iqc_plant(), iqc_h2()); }

FeedbackProblem iqc_problem(const AnalysisSettings& s) {
  FeedbackProblem fp;
  fp.h1 = block_bound(iqc_loop(), s);
  fp.h2 = norm_ball_region(kIqcPhiGain);  // -Phi has the same disk
  fp.incremental = false;
  fp.wellposedness_assumed = s.assume_wellposed;
  return fp;
}

FeedbackProblem iqc_inner_problem(const AnalysisSettings& s) {
  FeedbackProblem fp = iqc_problem(s);
  fp.h1 = block_bound(iqc_plant(), s);
  return fp;
}

Concrete iqc_lfr() {
  const StateSpace G = iqc_loop();
  const int n = G.states();
  Matrix B(n, 4), C(4, n);
  B << G.B(), G.B();
  C << G.C(), G.C();
  Concrete c;
  c.model.G = StateSpace(G.A(), B, C, Matrix::Zero(4, 4));
  c.model.partition = {{0, 1}, {2, 3}, {0, 1}, {2, 3}};
  c.model.phi.source = Region{norm_ball_region(kIqcPhiGain)};
  c.model.phi.incremental = false;
  c.model.name = "iqc";
  c.nl = {NamedNonlinearity::tanh(kIqcPhiGain, 0.0),
          NamedNonlinearity::saturation(1.0, -kIqcPhiGain, 0.0)};
  return c;
}

}  // namespace srg::examples
