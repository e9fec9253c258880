#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "srgkit/region.hpp"

namespace srg {

using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;

/// G(s) = C (sI - A)^{-1} B + D.
class StateSpace {
 public:
  StateSpace() = default;
  StateSpace(Matrix A, Matrix B, Matrix C, Matrix D);
  static StateSpace static_gain(Matrix D);

  const Matrix& A() const { return A_; }
  const Matrix& B() const { return B_; }
  const Matrix& C() const { return C_; }
  const Matrix& D() const { return D_; }
  int states() const { return static_cast<int>(A_.rows()); }
  int inputs() const { return static_cast<int>(D_.cols()); }
  int outputs() const { return static_cast<int>(D_.rows()); }

  bool is_hurwitz(double margin = 1e-9) const;
  /// Throws HypothesisError naming `what` when A is not Hurwitz.
  void require_hurwitz(const std::string& what) const;
  /// Sub-system keeping the given output rows and input columns.
  StateSpace select(const std::vector<int>& rows,
                    const std::vector<int>& cols) const;

 private:
  Matrix A_, B_, C_, D_;
};

/// G(j omega); omega = +inf returns D.
CMatrix freq_response(const StateSpace& ss, double omega);

struct FrequencyGrid {
  std::vector<double> omegas;  // finite, ascending, starts at 0
  bool include_infinity = true;
  double refine_tol = 1e-9;
};

/// 400 log-spaced points over [1e-3 |lambda|_min, 1e3 |lambda|_max] of A's
/// eigenvalues, plus 0 and the eigenvalue moduli and imaginary parts.
FrequencyGrid default_grid(const StateSpace& ss, int points = 400);

struct SigmaProfile {
  std::vector<double> frequencies;
  std::vector<double> sigma_max;
  std::vector<double> sigma_min;
  double sup_estimate = 0.0;
  double inf_estimate = 0.0;
  double sup_frequency = 0.0;
  double inf_frequency = 0.0;
};

SigmaProfile sigma_extrema(const StateSpace& ss, const FrequencyGrid& grid);

/// G_alpha = [G; 0] - [alpha I; 0] with max(p, q) outputs.
StateSpace shifted_system(const StateSpace& ss, double alpha);

struct SrgBoundOptions {
  double upper_inflation = 1.001;
  double lower_deflation = 0.999;
};

DiskAlgebraRegion lti_srg_bound(const StateSpace& ss,
                                const std::vector<double>& upsilon,
                                const std::vector<double>& lambda,
                                const FrequencyGrid& grid,
                                const SrgBoundOptions& opt = {});

DiskAlgebraRegion matrix_srg_bound(const CMatrix& M,
                                   const std::vector<double>& upsilon,
                                   const std::vector<double>& lambda,
                                   const SrgBoundOptions& opt = {});

struct AutoGrids {
  FrequencyGrid grid;
  std::vector<double> upsilon;
  std::vector<double> lambda;
};

AutoGrids auto_grids(const StateSpace& ss, int base_points = 41,
                     int freq_points = 400);

/// n uniformly spaced points over [lo, hi] (a single midpoint when n == 1).
std::vector<double> uniform_points(double lo, double hi, int n);

struct TransferFunction {
  std::vector<double> num;  // highest power first
  std::vector<double> den;
};

/// Controllable canonical realization of a proper SISO transfer function.
StateSpace tf_siso(const std::vector<double>& num, const std::vector<double>& den);
/// Entry-wise (non-minimal) realization of a transfer matrix.
StateSpace tf_matrix(const std::vector<std::vector<TransferFunction>>& entries);
/// Negative feedback (I + G H)^{-1} G from u to y.
StateSpace feedback(const StateSpace& G, const StateSpace& H);

}  // namespace srg
