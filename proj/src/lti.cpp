#include "srgkit/lti.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "srgkit/error.hpp"

namespace srg {

StateSpace::StateSpace(Matrix A, Matrix B, Matrix C, Matrix D)
    : A_(std::move(A)), B_(std::move(B)), C_(std::move(C)), D_(std::move(D)) {
  const auto n = A_.rows();
  if (A_.cols() != n) throw InputError("A must be square");
  if (B_.rows() != n) throw InputError("B must have as many rows as A");
  if (C_.cols() != n) throw InputError("C must have as many columns as A");
  if (D_.rows() != C_.rows() || D_.cols() != B_.cols())
    throw InputError("D must be (rows of C) x (columns of B)");
  if (!A_.allFinite() || !B_.allFinite() || !C_.allFinite() || !D_.allFinite())
    throw InputError("state-space matrices must be finite");
}

StateSpace StateSpace::static_gain(Matrix D) {
  const auto q = D.rows(), p = D.cols();
  return {Matrix(0, 0), Matrix(0, p), Matrix(q, 0), std::move(D)};
}

bool StateSpace::is_hurwitz(double margin) const {
  if (states() == 0) return true;
  Eigen::EigenSolver<Matrix> es(A_, false);
  if (es.info() != Eigen::Success) return false;
  return (es.eigenvalues().real().array() < -margin).all();
}

void StateSpace::require_hurwitz(const std::string& what) const {
  if (!is_hurwitz())
    throw HypothesisError(what + ": SRG bound requires stable LTI operator "
                                 "(A has eigenvalues with Re >= -1e-9)");
}

StateSpace StateSpace::select(const std::vector<int>& rows,
                              const std::vector<int>& cols) const {
  for (int r : rows)
    if (r < 0 || r >= outputs()) throw InputError("output row index out of range");
  for (int c : cols)
    if (c < 0 || c >= inputs()) throw InputError("input column index out of range");
  Matrix B(states(), cols.size()), C(rows.size(), states()),
      D(rows.size(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) B.col(j) = B_.col(cols[j]);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    C.row(i) = C_.row(rows[i]);
    for (std::size_t j = 0; j < cols.size(); ++j) D(i, j) = D_(rows[i], cols[j]);
  }
  return {A_, std::move(B), std::move(C), std::move(D)};
}

CMatrix freq_response(const StateSpace& ss, double omega) {
  if (std::isinf(omega) || ss.states() == 0) return ss.D().cast<Complex>();
  CMatrix M = -ss.A().cast<Complex>();
  M.diagonal().array() += Complex(0.0, omega);
  Eigen::PartialPivLU<CMatrix> lu(M);
  CMatrix X = lu.solve(ss.B().cast<Complex>());
  if (!X.allFinite() || std::abs(lu.determinant()) == 0.0) {
    std::ostringstream os;
    os << "singular resolvent at omega = " << omega;
    throw NumericalError(os.str());
  }
  return ss.C().cast<Complex>() * X + ss.D().cast<Complex>();
}

FrequencyGrid default_grid(const StateSpace& ss, int points) {
  FrequencyGrid g;
  g.omegas.push_back(0.0);
  if (ss.states() == 0) return g;
  Eigen::EigenSolver<Matrix> es(ss.A(), false);
  double lo = kInf, hi = 0.0;
  std::vector<double> extra;
  for (const auto& ev : es.eigenvalues()) {
    const double m = std::abs(ev);
    if (m > 0) {
      lo = std::min(lo, m);
      hi = std::max(hi, m);
      extra.push_back(m);
    }
    if (std::abs(ev.imag()) > 0) extra.push_back(std::abs(ev.imag()));
  }
  if (!(hi > 0)) lo = hi = 1.0;
  const double a = std::log10(1e-3 * lo), b = std::log10(1e3 * hi);
  for (int k = 0; k < points; ++k)
    g.omegas.push_back(std::pow(10.0, a + (b - a) * k / std::max(1, points - 1)));
  g.omegas.insert(g.omegas.end(), extra.begin(), extra.end());
  std::sort(g.omegas.begin(), g.omegas.end());
  g.omegas.erase(std::unique(g.omegas.begin(), g.omegas.end()), g.omegas.end());
  return g;
}

namespace {

// Singular values of [G; 0] - [alpha I; 0] (descending).
Eigen::VectorXd shifted_sigmas(const CMatrix& G, double alpha) {
  const auto q = G.rows(), p = G.cols();
  const auto n = std::max(p, q);
  CMatrix Ga = CMatrix::Zero(n, p);
  Ga.topRows(q) = G;
  for (Eigen::Index i = 0; i < p; ++i) Ga(i, i) -= alpha;
  if (p == 1) return Eigen::VectorXd::Constant(1, Ga.norm());
  Eigen::JacobiSVD<CMatrix> svd(Ga);
  return svd.singularValues();
}

// Sampled sigma curves for one shift, refined by golden-section search.
class SigmaSweep {
 public:
  SigmaSweep(const StateSpace& ss, const FrequencyGrid& grid,
             const std::vector<CMatrix>& samples)
      : ss_(ss), grid_(grid), samples_(samples) {}

  std::pair<double, double> extrema(double alpha, double* arg_sup = nullptr,
                                    double* arg_inf = nullptr) const {
    const std::size_t K = grid_.omegas.size();
    std::vector<double> smax(K), smin(K);
    for (std::size_t k = 0; k < K; ++k) {
      const auto s = shifted_sigmas(samples_[k], alpha);
      smax[k] = s(0);
      smin[k] = s(s.size() - 1);
    }
    double sup = -1, inf = kInf, w_sup = 0, w_inf = 0;
    if (grid_.include_infinity) {
      const auto s = shifted_sigmas(ss_.D().cast<Complex>(), alpha);
      sup = s(0), inf = s(s.size() - 1);
      w_sup = w_inf = kInf;
    }
    for (std::size_t k = 0; k < K; ++k) {
      if (smax[k] > sup) sup = smax[k], w_sup = grid_.omegas[k];
      if (smin[k] < inf) inf = smin[k], w_inf = grid_.omegas[k];
    }
    // refine around the best few local extrema
    for (std::size_t k : local_extrema(smax, true)) {
      const auto [w, v] = refine(alpha, k, true);
      if (v > sup) sup = v, w_sup = w;
    }
    for (std::size_t k : local_extrema(smin, false)) {
      const auto [w, v] = refine(alpha, k, false);
      if (v < inf) inf = v, w_inf = w;
    }
    if (arg_sup) *arg_sup = w_sup;
    if (arg_inf) *arg_inf = w_inf;
    return {sup, inf};
  }

 private:
  static std::vector<std::size_t> local_extrema(const std::vector<double>& v,
                                                bool maximum) {
    std::vector<std::size_t> idx;
    const std::size_t K = v.size();
    for (std::size_t k = 0; k < K; ++k) {
      const bool left = k == 0 || (maximum ? v[k] >= v[k - 1] : v[k] <= v[k - 1]);
      const bool right =
          k + 1 == K || (maximum ? v[k] >= v[k + 1] : v[k] <= v[k + 1]);
      if (left && right) idx.push_back(k);
    }
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return maximum ? v[a] > v[b] : v[a] < v[b];
    });
    if (idx.size() > 4) idx.resize(4);
    return idx;
  }

  double eval(double alpha, double w, bool maximum) const {
    const auto s = shifted_sigmas(freq_response(ss_, w), alpha);
    return maximum ? s(0) : s(s.size() - 1);
  }

  std::pair<double, double> refine(double alpha, std::size_t k,
                                   bool maximum) const {
    const auto& om = grid_.omegas;
    const std::size_t K = om.size();
    if (K < 2) return {om[k], eval(alpha, om[k], maximum)};
    double a = om[k > 0 ? k - 1 : 0];
    double b = om[k + 1 < K ? k + 1 : K - 1];
    const bool logscale = a > 0;
    auto to = [&](double w) { return logscale ? std::log(w) : w; };
    auto from = [&](double t) { return logscale ? std::exp(t) : t; };
    double lo = to(a), hi = to(b);
    auto f = [&](double t) {
      const double v = eval(alpha, from(t), maximum);
      return maximum ? v : -v;
    };
    const double gr = 0.6180339887498949;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    const double scale = std::max(1.0, std::abs(lo) + std::abs(hi));
    for (int it = 0; it < 200 && (hi - lo) > grid_.refine_tol * scale; ++it) {
      if (f1 > f2) {
        hi = x2, x2 = x1, f2 = f1;
        x1 = hi - gr * (hi - lo), f1 = f(x1);
      } else {
        lo = x1, x1 = x2, f1 = f2;
        x2 = lo + gr * (hi - lo), f2 = f(x2);
      }
    }
    const double t = f1 > f2 ? x1 : x2;
    const double v = f1 > f2 ? f1 : f2;
    return {from(t), maximum ? v : -v};
  }

  const StateSpace& ss_;
  const FrequencyGrid& grid_;
  const std::vector<CMatrix>& samples_;
};

std::vector<CMatrix> sample(const StateSpace& ss, const FrequencyGrid& grid) {
  std::vector<CMatrix> out;
  out.reserve(grid.omegas.size());
  for (double w : grid.omegas) out.push_back(freq_response(ss, w));
  return out;
}

}  // namespace

SigmaProfile sigma_extrema(const StateSpace& ss, const FrequencyGrid& grid) {
  ss.require_hurwitz("sigma_extrema");
  if (grid.omegas.empty()) throw InputError("frequency grid is empty");
  SigmaProfile prof;
  const auto samples = sample(ss, grid);
  for (std::size_t k = 0; k < samples.size(); ++k) {
    prof.frequencies.push_back(grid.omegas[k]);
    // unshifted singular values: use the q x p matrix itself
    Eigen::JacobiSVD<CMatrix> svd(samples[k]);
    const auto sv = svd.singularValues();
    prof.sigma_max.push_back(sv.size() ? sv(0) : 0.0);
    prof.sigma_min.push_back(
        samples[k].rows() < samples[k].cols() ? 0.0 : (sv.size() ? sv(sv.size() - 1) : 0.0));
  }
  SigmaSweep sweep(ss, grid, samples);
  // sigma_max of G equals that of [G; 0]; sigma_min uses the padded form
  // only for tall matrices, so sweep alpha = 0 and reconcile
  const auto [sup, inf] = sweep.extrema(0.0, &prof.sup_frequency, &prof.inf_frequency);
  prof.sup_estimate = sup;
  prof.inf_estimate = ss.outputs() < ss.inputs() ? 0.0 : inf;
  return prof;
}

StateSpace shifted_system(const StateSpace& ss, double alpha) {
  const int p = ss.inputs(), q = ss.outputs();
  const int n = std::max(p, q);
  Matrix C = Matrix::Zero(n, ss.states());
  C.topRows(q) = ss.C();
  Matrix D = Matrix::Zero(n, p);
  D.topRows(q) = ss.D();
  for (int i = 0; i < p; ++i) D(i, i) -= alpha;
  return {ss.A(), ss.B(), std::move(C), std::move(D)};
}

namespace {

DiskAlgebraRegion assemble(const std::vector<double>& upsilon,
                           const std::vector<double>& lambda,
                           const SrgBoundOptions& opt, auto&& extrema) {
  if (upsilon.empty()) throw InputError("the upper base-point set must be nonempty");
  std::vector<double> alphas = upsilon;
  alphas.insert(alphas.end(), lambda.begin(), lambda.end());
  std::sort(alphas.begin(), alphas.end());
  alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());
  std::vector<std::pair<double, double>> ext(alphas.size());
  for (std::size_t i = 0; i < alphas.size(); ++i) ext[i] = extrema(alphas[i]);
  auto lookup = [&](double a) {
    return ext[std::lower_bound(alphas.begin(), alphas.end(), a) - alphas.begin()];
  };
  std::vector<Disk> upper, lower;
  for (double a : upsilon) upper.push_back({a, opt.upper_inflation * lookup(a).first});
  for (double a : lambda) {
    const double l = opt.lower_deflation * lookup(a).second;
    if (l > 0) lower.push_back({a, l});
  }
  return {std::move(upper), std::move(lower), false};
}

}  // namespace

DiskAlgebraRegion lti_srg_bound(const StateSpace& ss,
                                const std::vector<double>& upsilon,
                                const std::vector<double>& lambda,
                                const FrequencyGrid& grid,
                                const SrgBoundOptions& opt) {
  ss.require_hurwitz("lti_srg_bound");
  if (grid.omegas.empty()) throw InputError("frequency grid is empty");
  const auto samples = sample(ss, grid);
  SigmaSweep sweep(ss, grid, samples);
  return assemble(upsilon, lambda, opt,
                  [&](double a) { return sweep.extrema(a); });
}

DiskAlgebraRegion matrix_srg_bound(const CMatrix& M,
                                   const std::vector<double>& upsilon,
                                   const std::vector<double>& lambda,
                                   const SrgBoundOptions& opt) {
  return assemble(upsilon, lambda, opt, [&](double a) {
    const auto s = shifted_sigmas(M, a);
    return std::pair{s(0), s(s.size() - 1)};
  });
}

std::vector<double> uniform_points(double lo, double hi, int n) {
  if (n <= 0) return {};
  if (n == 1) return {(lo + hi) / 2.0};
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) out[k] = lo + (hi - lo) * k / (n - 1);
  // keep the grid exactly symmetric so 0 is hit for odd n
  for (int k = 0; k < n / 2; ++k)
    if (lo == -hi) out[n - 1 - k] = -out[k];
  if (n % 2 == 1 && lo == -hi) out[n / 2] = 0.0;
  return out;
}

AutoGrids auto_grids(const StateSpace& ss, int base_points, int freq_points) {
  ss.require_hurwitz("auto_grids");
  AutoGrids g;
  g.grid = default_grid(ss, freq_points);
  const double smax = sigma_extrema(ss, g.grid).sup_estimate;
  g.upsilon = uniform_points(-smax, smax, base_points);
  g.lambda = g.upsilon;
  return g;
}

StateSpace tf_siso(const std::vector<double>& num, const std::vector<double>& den) {
  std::vector<double> d = den, b = num;
  while (!d.empty() && d.front() == 0.0) d.erase(d.begin());
  while (b.size() > 1 && b.front() == 0.0) b.erase(b.begin());
  if (d.empty()) throw InputError("transfer function denominator is zero");
  const int n = static_cast<int>(d.size()) - 1;
  if (static_cast<int>(b.size()) - 1 > n) throw InputError("transfer function must be proper");
  const double a0 = d.front();
  for (auto& v : d) v /= a0;
  for (auto& v : b) v /= a0;
  b.insert(b.begin(), n + 1 - b.size(), 0.0);
  // controllable canonical form
  Matrix A = Matrix::Zero(n, n), B = Matrix::Zero(n, 1), C(1, n), D(1, 1);
  for (int i = 0; i + 1 < n; ++i) A(i, i + 1) = 1.0;
  for (int j = 0; j < n; ++j) A(n - 1, j) = -d[n - j];
  if (n) B(n - 1, 0) = 1.0;
  D(0, 0) = b[0];
  for (int j = 0; j < n; ++j) C(0, j) = b[n - j] - b[0] * d[n - j];
  return {A, B, C, D};
}

StateSpace tf_matrix(const std::vector<std::vector<TransferFunction>>& entries) {
  const int q = static_cast<int>(entries.size());
  if (q == 0 || entries[0].empty()) throw InputError("transfer matrix is empty");
  const int p = static_cast<int>(entries[0].size());
  std::vector<StateSpace> parts;
  int n = 0;
  for (const auto& row : entries) {
    if (static_cast<int>(row.size()) != p) throw InputError("transfer matrix rows differ in length");
    for (const auto& tf : row) {
      parts.push_back(tf_siso(tf.num, tf.den));
      n += parts.back().states();
    }
  }
  Matrix A = Matrix::Zero(n, n), B = Matrix::Zero(n, p), C = Matrix::Zero(q, n), D(q, p);
  int off = 0;
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < p; ++j) {
      const auto& s = parts[i * p + j];
      const int k = s.states();
      A.block(off, off, k, k) = s.A();
      B.block(off, j, k, 1) = s.B();
      C.block(i, off, 1, k) = s.C();
      D(i, j) = s.D()(0, 0);
      off += k;
    }
  return {A, B, C, D};
}

// e = u - H y, y = G e
StateSpace feedback(const StateSpace& G, const StateSpace& H) {
  if (H.inputs() != G.outputs() || H.outputs() != G.inputs())
    throw InputError("feedback needs H to map G's outputs back to its inputs");
  const int p = G.inputs(), q = G.outputs();
  const Matrix I = Matrix::Identity(p, p);
  Eigen::FullPivLU<Matrix> lu(I + H.D() * G.D());
  if (!lu.isInvertible()) throw InputError("feedback loop is not well-posed (I + D_H D_G singular)");
  const Matrix E = lu.inverse();  // e = E (u - H.C xh - H.D G.C xg)
  const int ng = G.states(), nh = H.states();
  Matrix Ce(p, ng + nh), A(ng + nh, ng + nh), B(ng + nh, p), C(q, ng + nh);
  Ce << -E * H.D() * G.C(), -E * H.C();
  const Matrix Be = E;
  A.setZero();
  A.topLeftCorner(ng, ng) = G.A();
  A.bottomRightCorner(nh, nh) = H.A();
  A.topRows(ng) += G.B() * Ce;
  // y = G.C xg + G.D e feeds H
  Matrix Cy(q, ng + nh);
  Cy << G.C(), Matrix::Zero(q, nh);
  Cy += G.D() * Ce;
  A.bottomRows(nh) += H.B() * Cy;
  B << G.B() * Be, H.B() * G.D() * Be;
  C = Cy;
  return {A, B, C, G.D() * Be};
}

}  // namespace srg
