#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "srgkit/analysis.hpp"
#include "srgkit/error.hpp"
#include "srgkit/examples.hpp"
#include "srgkit/io.hpp"
#include "srgkit/lti.hpp"
#include "srgkit/nonlin.hpp"
#include "srgkit/region.hpp"
#include "srgkit/sim.hpp"

namespace py = pybind11;
using namespace srg;

namespace {

AnalysisSettings settings_from(double resolution, int tau_points, bool assume_wellposed, bool improved) {
  AnalysisSettings s;
  s.resolution = resolution;
  s.tau_points = tau_points;
  s.assume_wellposed = assume_wellposed;
  s.improved = improved;
  return s;
}

}  // namespace

PYBIND11_MODULE(_srgkit, m) {
  m.doc() = "scaled relative graph analysis core";

  static py::exception<InputError> input_error(m, "InputError", PyExc_ValueError);
  static py::exception<HypothesisError> hypothesis_error(m, "HypothesisError", PyExc_RuntimeError);
  static py::exception<NumericalError> numerical_error(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InputError& e) {
      input_error(e.what());
    } catch (const HypothesisError& e) {
      hypothesis_error(e.what());
    } catch (const NumericalError& e) {
      numerical_error(e.what());
    }
  });

  m.def("region_contains", [](const std::string& region_json, Complex z, double tol) {
    const Region r = io::region_from_json(io::Json::parse(region_json));
    if (const auto* d = std::get_if<DiskAlgebraRegion>(&r)) return d->contains(z, tol);
    return std::get<CoverRegion>(r).covers(z, tol);
  }, py::arg("region_json"), py::arg("z"), py::arg("tol") = 1e-12);

  m.def("region_rmin", [](const std::string& region_json) {
    return rmin(io::region_from_json(io::Json::parse(region_json)));
  });

  m.def("region_inverse", [](const std::string& region_json) {
    return io::to_json(mobius_inverse(io::region_from_json(io::Json::parse(region_json)))).dump();
  });

  m.def("interval_region", [](double lo, double hi) {
    return io::to_json(Region(DiskAlgebraRegion::interval(lo, hi))).dump();
  });

  m.def("freq_response", [](const Matrix& A, const Matrix& B, const Matrix& C, const Matrix& D, double w) {
    return freq_response(StateSpace(A, B, C, D), w);
  });

  m.def("srg_lti", [](const Matrix& A, const Matrix& B, const Matrix& C, const Matrix& D, int base_points,
                      int freq_points) {
    AnalysisSettings s;
    s.base_points = base_points;
    s.freq_points = freq_points;
    return io::to_json(Region(block_bound(StateSpace(A, B, C, D), s))).dump();
  }, py::arg("A"), py::arg("B"), py::arg("C"), py::arg("D"), py::arg("base_points") = 41,
     py::arg("freq_points") = 400);

  m.def("sector_region", [](const std::vector<std::pair<double, double>>& channels) {
    SectorBound s{channels, true};
    s.validate();
    return io::to_json(Region(diagonal_nl_region(s))).dump();
  });

  m.def("analyze_lfr", [](const std::string& model_json, double resolution, int tau_points, bool assume_wellposed,
                          bool improved, bool non_incremental) {
    LfrModel lfr = io::lfr_from_json(io::Json::parse(model_json));
    if (non_incremental) lfr.phi.incremental = false;
    py::gil_scoped_release release;
    return io::to_json(lfr_certify(lfr, settings_from(resolution, tau_points, assume_wellposed, improved))).dump();
  }, py::arg("model_json"), py::arg("resolution") = 0.002, py::arg("tau_points") = 101,
     py::arg("assume_wellposed") = false, py::arg("improved") = true, py::arg("non_incremental") = false);

  m.def("analyze_feedback", [](const std::string& h1_json, const std::string& h2_json, bool incremental,
                               double resolution, int tau_points, bool assume_wellposed) {
    FeedbackProblem fp{io::region_from_json(io::Json::parse(h1_json)), io::region_from_json(io::Json::parse(h2_json)),
                       incremental, false};
    py::gil_scoped_release release;
    return io::to_json(feedback_certify(fp, settings_from(resolution, tau_points, assume_wellposed, true))).dump();
  }, py::arg("h1_json"), py::arg("h2_json"), py::arg("incremental") = true, py::arg("resolution") = 0.002,
     py::arg("tau_points") = 101, py::arg("assume_wellposed") = false);

  m.def("empirical_gain", [](const std::string& model_json, std::uint64_t seed, int multisines, int noise,
                             bool incremental) {
    const auto j = io::Json::parse(model_json);
    const LfrModel lfr = io::lfr_from_json(j);
    const auto nl = io::nonlinearities_from_json(j);
    ExcitationSpec ex;
    ex.seed = seed;
    ex.multisines = multisines;
    ex.noise = noise;
    ex.incremental = incremental;
    py::gil_scoped_release release;
    return io::to_json(empirical_incremental_gain(lfr, nl, ex, default_sim_config(lfr.G))).dump();
  }, py::arg("model_json"), py::arg("seed") = 1, py::arg("multisines") = 20, py::arg("noise") = 20,
     py::arg("incremental") = true);

  m.def("example_model", [](const std::string& name) {
    examples::Concrete c;
    if (name == "lure_2_3") c = examples::lure(2.0, 3.0);
    else if (name == "lure_0.5_1.5") c = examples::lure(0.5, 1.5);
    else if (name == "msd") c = examples::msd();
    else if (name == "iqc") c = examples::iqc_lfr();
    else throw InputError("unknown example '" + name + "'");
    return io::to_json(c.model, c.nl).dump();
  });

  m.def("references", [] {
    std::vector<std::pair<std::string, double>> out;
    for (const auto& r : examples::references()) out.emplace_back(r.label, r.value);
    return out;
  });
}
