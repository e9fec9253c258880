#include <cmath>

#include "srgkit/analysis.hpp"
#include "srgkit/error.hpp"

namespace srg {

namespace {

Matrix rows_of(const Matrix& M, const std::vector<int>& r) {
  Matrix out(r.size(), M.cols());
  for (std::size_t i = 0; i < r.size(); ++i) out.row(i) = M.row(r[i]);
  return out;
}

Matrix cols_of(const Matrix& M, const std::vector<int>& c) {
  Matrix out(M.rows(), c.size());
  for (std::size_t j = 0; j < c.size(); ++j) out.col(j) = M.col(c[j]);
  return out;
}

Matrix block(const Matrix& M, const std::vector<int>& r, const std::vector<int>& c) {
  return cols_of(rows_of(M, r), c);
}

void put(Matrix& M, const std::vector<int>& r, const std::vector<int>& c, const Matrix& v) {
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) M(r[i], c[j]) = v(i, j);
}

bool is_diagonal(const Matrix& M) {
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j)
      if (i != j && M(i, j) != 0.0) return false;
  return true;
}

bool is_scalar(const Matrix& M) {
  if (!is_diagonal(M) || M.rows() != M.cols()) return false;
  for (int i = 1; i < M.rows(); ++i)
    if (M(i, i) != M(0, 0)) return false;
  return true;
}

}  // namespace

// Substituting w = S^{-1} w~ + K z into z = Cz x + Dzw w + Dzu u gives
// z = M (Cz x + Dzw S^{-1} w~ + Dzu u) with M = (I - Dzw K)^{-1}; the
// remaining blocks follow by back-substitution.
LfrModel loop_transform_lfr(const LfrModel& m, const Matrix& K, const Matrix& S) {
  m.validate();
  const auto& p = m.partition;
  const int nz = m.nz(), nw = m.nw();
  if (K.rows() != nw || K.cols() != nz) throw InputError("K must be n_w x n_z");
  if (S.rows() != nw || S.cols() != nw || !is_diagonal(S))
    throw InputError("S must be a diagonal n_w x n_w matrix");
  for (int i = 0; i < nw; ++i)
    if (!(S(i, i) > 0.0)) throw InputError("S must have positive diagonal entries");
  if (!K.allFinite()) throw InputError("K must be finite");

  const Matrix& A = m.G.A();
  const Matrix& B = m.G.B();
  const Matrix& C = m.G.C();
  const Matrix& D = m.G.D();
  const Matrix Bw = cols_of(B, p.w_cols), Bu = cols_of(B, p.u_cols);
  const Matrix Cz = rows_of(C, p.z_rows), Cy = rows_of(C, p.y_rows);
  const Matrix Dzw = block(D, p.z_rows, p.w_cols), Dzu = block(D, p.z_rows, p.u_cols);
  const Matrix Dyw = block(D, p.y_rows, p.w_cols), Dyu = block(D, p.y_rows, p.u_cols);

  const Matrix I = Matrix::Identity(nz, nz);
  Eigen::FullPivLU<Matrix> lu(I - Dzw * K);
  if (!lu.isInvertible() || lu.rcond() < 1e-12)
    throw InputError("I - D_zw K is singular: the constant-gain loop is not well-posed");
  const Matrix M = lu.inverse();
  const Matrix Si = S.diagonal().cwiseInverse().asDiagonal();
  const Matrix KM = K * M;

  Matrix A2 = A + Bw * KM * Cz;
  Matrix B2 = B, C2 = C, D2 = D;
  const Matrix Bw2 = (Bw + Bw * KM * Dzw) * Si;
  const Matrix Bu2 = Bu + Bw * KM * Dzu;
  for (std::size_t j = 0; j < p.w_cols.size(); ++j) B2.col(p.w_cols[j]) = Bw2.col(j);
  for (std::size_t j = 0; j < p.u_cols.size(); ++j) B2.col(p.u_cols[j]) = Bu2.col(j);
  const Matrix Cz2 = M * Cz;
  const Matrix Cy2 = Cy + Dyw * KM * Cz;
  for (std::size_t i = 0; i < p.z_rows.size(); ++i) C2.row(p.z_rows[i]) = Cz2.row(i);
  for (std::size_t i = 0; i < p.y_rows.size(); ++i) C2.row(p.y_rows[i]) = Cy2.row(i);
  put(D2, p.z_rows, p.w_cols, M * Dzw * Si);
  put(D2, p.z_rows, p.u_cols, M * Dzu);
  put(D2, p.y_rows, p.w_cols, Dyw * (Matrix::Identity(nw, nw) + KM * Dzw) * Si);
  put(D2, p.y_rows, p.u_cols, Dyu + Dyw * KM * Dzu);

  LfrModel out = m;
  out.G = StateSpace(std::move(A2), std::move(B2), std::move(C2), std::move(D2));

  // Phi~ = S (Phi - K id)
  if (m.phi.is_sector()) {
    if (!is_diagonal(K))
      throw InputError("a diagonal sector stays diagonal only for diagonal K");
    std::vector<double> kappa, sigma;
    for (int i = 0; i < nw; ++i) {
      sigma.push_back(S(i, i));
      kappa.push_back(-S(i, i) * K(i, i));
    }
    out.phi.source = loop_transform_sector(std::get<SectorBound>(m.phi.source), kappa, sigma);
  } else {
    if (nz != nw || !is_scalar(K) || !is_scalar(S))
      throw InputError("a user-supplied Phi region can only be transformed by scalar K and S");
    const double k = K(0, 0), s = S(0, 0);
    const Region& r = std::get<Region>(m.phi.source);
    out.phi.source = std::visit(
        [&](const auto& x) -> Region { return scale_real(shift_real(x, -k), s); }, r);
  }
  return out;
}

SweepResult transform_sweep(const std::vector<std::vector<double>>& candidates,
                            const std::function<LfrModel(const std::vector<double>&)>& make,
                            const AnalysisSettings& settings) {
  if (candidates.empty()) throw InputError("transform sweep needs at least one candidate");
  SweepResult res;
  for (const auto& kappa : candidates) {
    SweepRow row;
    row.kappa = kappa;
    try {
      const LfrModel m = make(kappa);
      row.stable = m.G.is_hurwitz();
      if (row.stable) {
        const auto rep = lfr_certify(m, settings);
        row.certified = rep.certified;
        row.gain = rep.gain_bound;
        row.separation = rep.separation_r;
      }
    } catch (const HypothesisError&) {
      row.stable = false;
    }
    if (row.certified && row.gain < res.best_gain) {
      res.best_gain = row.gain;
      res.best_kappa = kappa;
      res.certified = true;
    }
    res.table.push_back(std::move(row));
  }
  return res;
}

SweepResult transform_sweep(const LfrModel& base,
                            const std::vector<std::vector<double>>& candidates,
                            const AnalysisSettings& settings) {
  const int nw = base.nw(), nz = base.nz();
  return transform_sweep(
      candidates,
      [&](const std::vector<double>& kappa) {
        if (static_cast<int>(kappa.size()) != nw || nw != nz)
          throw InputError("each candidate needs one shift per channel");
        Matrix K = Matrix::Zero(nw, nz);
        for (int i = 0; i < nw; ++i) K(i, i) = kappa[i];
        return loop_transform_lfr(base, K, Matrix::Identity(nw, nw));
      },
      settings);
}

}  // namespace srg
