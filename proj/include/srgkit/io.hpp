#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "srgkit/analysis.hpp"
#include "srgkit/lti.hpp"
#include "srgkit/nonlin.hpp"
#include "srgkit/region.hpp"
#include "srgkit/sim.hpp"

namespace srg::io {

using Json = nlohmann::ordered_json;

/// Non-finite numbers are written as "inf" / "-inf" / "nan".
Json number(double v);
double number_from(const Json& j);

Json to_json(const DiskAlgebraRegion& r);
Json to_json(const CoverRegion& r);
Json to_json(const Region& r);
/// Covers are conjugate-closed on load.
Region region_from_json(const Json& j);

Json to_json(const Matrix& M);
Matrix matrix_from_json(const Json& j, int rows = -1, int cols = -1);
Json to_json(const StateSpace& ss);
StateSpace state_space_from_json(const Json& j);

Json to_json(const SectorBound& s);
SectorBound sector_from_json(const Json& j);
Json to_json(const NamedNonlinearity& n);
NamedNonlinearity nonlinearity_from_json(const Json& j);

Json to_json(const LfrModel& m, const std::vector<NamedNonlinearity>& nl = {});
LfrModel lfr_from_json(const Json& j);
/// The optional "nonlinearities" array of a model file.
std::vector<NamedNonlinearity> nonlinearities_from_json(const Json& model);

Json to_json(const AnalysisSettings& s);
Json to_json(const AnalysisReport& r, bool with_regions = false);
Json to_json(const SeparationResult& r);
Json to_json(const SweepResult& r);
Json to_json(const GainEstimate& g);
Json to_json(const SigmaProfile& p);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
void write_json_file(const std::string& path, const Json& j);

std::string region_csv(const Region& r);
std::string sigma_csv(const SigmaProfile& p);
std::string signal_csv(const Signal& s);
/// Signal from CSV rows "t,c1,c2,..." with uniform spacing.
Signal signal_from_csv(const std::string& text);

struct Manifest {
  std::string command;
  std::vector<std::string> inputs;
  Json settings = Json::object();
  std::vector<std::string> outputs;
};
Json to_json(const Manifest& m);

}  // namespace srg::io
