#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "srgkit/lti.hpp"
#include "srgkit/nonlin.hpp"
#include "srgkit/region.hpp"

namespace srg {

/// Which rows of G are z or y and which columns are w or u.
struct Partition {
  std::vector<int> z_rows, y_rows, w_cols, u_cols;
};

/// Phi is given either as a sector (diagonal static) or as a region.
struct PhiSpec {
  std::variant<SectorBound, Region> source;
  bool incremental = true;

  DiskAlgebraRegion sector_region() const;  // throws unless sector
  Region region() const;
  bool is_sector() const { return std::holds_alternative<SectorBound>(source); }
};

struct LfrModel {
  StateSpace G;
  Partition partition;
  PhiSpec phi;
  std::string name;

  /// Disjoint, exhaustive index sets matching G, Phi channel counts.
  void validate() const;
  int nz() const { return static_cast<int>(partition.z_rows.size()); }
  int ny() const { return static_cast<int>(partition.y_rows.size()); }
  int nw() const { return static_cast<int>(partition.w_cols.size()); }
  int nu() const { return static_cast<int>(partition.u_cols.size()); }
  StateSpace Gzw() const { return G.select(partition.z_rows, partition.w_cols); }
  StateSpace Gzu() const { return G.select(partition.z_rows, partition.u_cols); }
  StateSpace Gyw() const { return G.select(partition.y_rows, partition.w_cols); }
  StateSpace Gyu() const { return G.select(partition.y_rows, partition.u_cols); }
};

struct AnalysisSettings {
  int tau_points = 101;
  bool refine_tau = false;  // double the tau grid until r moves < 1%
  double resolution = 0.002;  // cover step relative to region extent
  bool improved = true;       // improved completions at every sum/product
  bool assume_wellposed = false;
  int base_points = 41;   // |Upsilon| = |Lambda|
  int freq_points = 400;
  SrgBoundOptions bound;
};

struct AnalysisReport {
  bool certified = false;
  double separation_r = 0.0;
  double tau_at_min = 0.0;
  double gain_bound = kInf;
  bool incremental = true;
  bool wellposed_claim = false;
  bool causal_claim = false;
  std::map<std::string, Region> regions;
  std::vector<std::pair<double, double>> tau_table;  // (tau, dist)
  std::vector<std::string> notes;
  AnalysisSettings settings;
  double seconds = 0.0;
};

struct FeedbackProblem {
  Region h1;
  Region h2;
  bool incremental = true;
  bool wellposedness_assumed = false;
};

struct SeparationResult {
  double r = 0.0;
  double tau_min = 0.0;
  std::vector<std::pair<double, double>> table;
};

/// min over tau of dist(h1^{-1}, -tau h2). The grid must contain 0 and 1.
SeparationResult separation_sweep(const Region& h1, const Region& h2,
                                  const std::vector<double>& tau_grid);
std::vector<double> tau_grid(int points);

/// [H1, H2] = (H1^{-1} + H2)^{-1}. Gain bound is the smaller of 1/r and the
/// radius of the closed-loop region computed by the calculus.
AnalysisReport feedback_certify(const FeedbackProblem& fp,
                                const AnalysisSettings& settings = {});

/// Gain bound for the LFR closed loop via the Z, W, V, R chain at tau = 1.
AnalysisReport lfr_certify(const LfrModel& m,
                           const AnalysisSettings& settings = {});

/// SRG bound of a stable block with the automatic grids of the settings.
DiskAlgebraRegion block_bound(const StateSpace& ss,
                              const AnalysisSettings& settings = {});

/// Phi~ = S (Phi - K id) and w = S^{-1} w~ + K z, absorbed into G.
/// The sector (or a region, when K and S are multiples of I) follows.
LfrModel loop_transform_lfr(const LfrModel& m, const Matrix& K, const Matrix& S);

struct SweepRow {
  std::vector<double> kappa;
  bool stable = false;
  bool certified = false;
  double gain = kInf;
  double separation = 0.0;
};

struct SweepResult {
  bool certified = false;
  std::vector<double> best_kappa;
  double best_gain = kInf;
  std::vector<SweepRow> table;
};

/// Grid search over loop-transform shifts. `make` builds the transformed
/// model for a candidate; unstable candidates are skipped.
SweepResult transform_sweep(
    const std::vector<std::vector<double>>& candidates,
    const std::function<LfrModel(const std::vector<double>&)>& make,
    const AnalysisSettings& settings = {});
/// Candidates applied as K = diag(kappa), S = I to a base model.
SweepResult transform_sweep(const LfrModel& base,
                            const std::vector<std::vector<double>>& candidates,
                            const AnalysisSettings& settings = {});

struct BlockDims {
  std::string name;
  int inputs = 0;
  int outputs = 0;
};

struct DimensionCheck {
  bool ok = true;
  std::vector<std::string> warnings;
};

enum class Connection { series, parallel, feedback };

/// series: first block feeds the second. parallel: both share the input and
/// outputs add. feedback: the second block closes a loop around the first.
DimensionCheck validate_dimensions(Connection kind, const BlockDims& first,
                                   const BlockDims& second);

}  // namespace srg
