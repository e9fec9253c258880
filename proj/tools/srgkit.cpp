#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "srgkit/analysis.hpp"
#include "srgkit/error.hpp"
#include "srgkit/examples.hpp"
#include "srgkit/io.hpp"
#include "srgkit/lti.hpp"
#include "srgkit/nonlin.hpp"
#include "srgkit/region.hpp"
#include "srgkit/sim.hpp"
#include "srgkit/svg.hpp"

namespace fs = std::filesystem;
using namespace srg;
using io::Json;

namespace {

constexpr int kOk = 0, kInputError = 2, kHypothesis = 3, kNotCertified = 4;

struct Common {
  int tau_points = 101;
  double resolution = 0.002;
  bool assume_wellposed = false;
  bool non_incremental = false;
  bool plain = false;
  int base_points = 41;
  int freq_points = 400;
  std::string out = "srgkit_out";

  AnalysisSettings settings() const {
    AnalysisSettings s;
    s.tau_points = tau_points;
    s.resolution = resolution;
    s.assume_wellposed = assume_wellposed;
    s.improved = !plain;
    s.base_points = base_points;
    s.freq_points = freq_points;
    return s;
  }
};

void add_analysis_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--tau-points", c.tau_points, "tau grid size over [0, 1]")
      ->envname("SRGKIT_TAU_POINTS")->check(CLI::Range(2, 100000));
  cmd->add_option("--resolution", c.resolution, "cover step relative to region extent")
      ->envname("SRGKIT_RESOLUTION")->check(CLI::Range(1e-5, 0.5));
  cmd->add_flag("--assume-wellposed", c.assume_wellposed,
                "acknowledge well-posedness (needed on the non-incremental path)")
      ->envname("SRGKIT_ASSUME_WELLPOSED");
  cmd->add_flag("--non-incremental", c.non_incremental, "bound the gain at zero instead")
      ->envname("SRGKIT_NON_INCREMENTAL");
  cmd->add_flag("--plain", c.plain, "plain instead of improved completions")
      ->envname("SRGKIT_PLAIN");
  cmd->add_option("--base-points", c.base_points, "|Upsilon| = |Lambda| for LTI bounds")
      ->envname("SRGKIT_BASE_POINTS")->check(CLI::Range(1, 100000));
  cmd->add_option("--freq-points", c.freq_points, "frequency grid size")
      ->envname("SRGKIT_FREQ_POINTS")->check(CLI::Range(8, 1000000));
}

void add_out(CLI::App* cmd, std::string& out) {
  cmd->add_option("-o,--out", out, "output directory")->envname("SRGKIT_OUT");
}

fs::path prepare(const std::string& dir) {
  fs::create_directories(dir);
  return fs::path(dir);
}

struct Writer {
  fs::path dir;
  io::Manifest manifest;

  void text(const std::string& name, const std::string& body) {
    io::write_text_file((dir / name).string(), body);
    manifest.outputs.push_back(name);
  }
  void json(const std::string& name, const Json& j) { text(name, j.dump(2) + "\n"); }
  void finish() {
    manifest.outputs.push_back("manifest.json");
    io::write_json_file((dir / "manifest.json").string(), io::to_json(manifest));
  }
};

Json settings_json(const Common& c) {
  Json j = io::to_json(c.settings());
  j["non_incremental"] = c.non_incremental;
  return j;
}

std::string fixed(double v, int digits = 4) {
  if (!std::isfinite(v)) return v > 0 ? "inf" : "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void region_plots(Writer& w, const AnalysisReport& rep) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  int k = 0;
  for (const auto& [name, reg] : rep.regions) {
    svg::PlotOptions opt;
    opt.title = name + ", rmin = " + fixed(rmin(reg));
    w.text("region_" + name + ".svg", svg::render({{reg, name, colors[k++ % 5]}}, opt));
    w.text("region_" + name + ".csv", io::region_csv(reg));
  }
}

void separation_plot(Writer& w, const AnalysisReport& rep, const std::string& inv, const std::string& g) {
  if (!rep.regions.count(inv) || !rep.regions.count(g)) return;
  svg::PlotOptions opt;
  opt.title = "separation r = " + fixed(rep.separation_r);
  w.text("separation.svg", svg::separation_plot(rep.regions.at(inv), rep.regions.at(g),
                                                std::max(rep.tau_at_min, 1e-6), opt));
  std::ostringstream csv;
  csv << "tau,dist\n";
  for (const auto& [t, d] : rep.tau_table) csv << t << ',' << d << '\n';
  w.text("tau_table.csv", csv.str());
}

void print_report(const AnalysisReport& rep) {
  std::cout << "verdict: " << (rep.certified ? "certified" : "not_certified") << "\n"
            << "separation r: " << fixed(rep.separation_r, 6) << " at tau = " << rep.tau_at_min << "\n"
            << (rep.incremental ? "incremental" : "non-incremental")
            << " gain bound: " << fixed(rep.gain_bound, 6) << "\n";
  for (const auto& n : rep.notes) std::cout << "note: " << n << "\n";
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw InputError("not a number: '" + item + "'");
    }
  }
  return out;
}

// ---- operand readers

Region load_region(const std::string& path) { return io::region_from_json(io::read_json_file(path)); }

/// A feedback operand: region JSON, state space (SRG bound), {"gain": g} or {"sector": [mu, la]}.
Region operand(const Json& j, const AnalysisSettings& s) {
  if (j.contains("kind")) return io::region_from_json(j);
  if (j.contains("D")) return block_bound(io::state_space_from_json(j), s);
  if (j.contains("gain")) return norm_ball_region(io::number_from(j.at("gain")));
  if (j.contains("sector")) {
    const auto& v = j.at("sector");
    if (!v.is_array() || v.size() != 2) throw InputError("sector must be [mu, lambda]");
    return DiskAlgebraRegion::interval(io::number_from(v[0]), io::number_from(v[1]));
  }
  throw InputError("operand needs a region, a state space, a gain or a sector");
}

// ---- commands

int cmd_srg_lti(const std::string& model, const std::string& out, int up, int lp, int fp,
                const std::string& upsilon, const std::string& lambda) {
  const StateSpace ss = io::state_space_from_json(io::read_json_file(model));
  ss.require_hurwitz("model");
  AutoGrids g = auto_grids(ss, up, fp);
  if (lp != up) g.lambda = auto_grids(ss, lp, fp).lambda;
  if (!upsilon.empty()) g.upsilon = parse_list(upsilon);
  if (!lambda.empty()) g.lambda = parse_list(lambda);
  const DiskAlgebraRegion r = lti_srg_bound(ss, g.upsilon, g.lambda, g.grid);
  Writer w{prepare(out), {"srg-lti", {model}, {}, {}}};
  w.manifest.settings = {{"upsilon", g.upsilon}, {"lambda", g.lambda}, {"freq_points", fp}};
  w.json("region.json", io::to_json(r));
  w.text("boundary.csv", io::region_csv(r));
  w.text("sigma.csv", io::sigma_csv(sigma_extrema(ss, g.grid)));
  svg::PlotOptions opt;
  opt.title = "SRG bound, rmin = " + fixed(rmin(r));
  w.text("region.svg", svg::render({{r, "G", "#1f77b4"}}, opt));
  w.finish();
  std::cout << "rmin " << fixed(rmin(r), 6) << "\n";
  return kOk;
}

int cmd_srg_matrix(const std::string& file, const std::string& out, int points) {
  const Json j = io::read_json_file(file);
  const Matrix re = io::matrix_from_json(j.contains("re") ? j.at("re") : j.at("matrix"));
  Matrix im = Matrix::Zero(re.rows(), re.cols());
  if (j.contains("im")) im = io::matrix_from_json(j.at("im"), re.rows(), re.cols());
  if (re.rows() == 0 || re.cols() == 0) throw InputError("matrix is empty");
  CMatrix M(re.rows(), re.cols());
  M.real() = re;
  M.imag() = im;
  const double smax = Eigen::JacobiSVD<CMatrix>(M).singularValues()(0);
  const auto grid = uniform_points(-smax, smax, points);
  const DiskAlgebraRegion r = matrix_srg_bound(M, grid, grid);
  Writer w{prepare(out), {"srg-matrix", {file}, {{"points", points}}, {}}};
  w.json("region.json", io::to_json(r));
  w.text("boundary.csv", io::region_csv(r));
  w.text("region.svg", svg::render({{r, "M", "#1f77b4"}}));
  w.finish();
  std::cout << "rmin " << fixed(rmin(r), 6) << "\n";
  return kOk;
}

int cmd_sector(const std::string& file, const std::string& out, bool verify, std::size_t samples,
               std::uint64_t seed) {
  const Json j = io::read_json_file(file);
  Writer w{prepare(out), {"sector", {file}, {{"samples", samples}, {"seed", seed}}, {}}};
  int code = kOk;
  if (j.contains("channels")) {
    const SectorBound s = io::sector_from_json(j);
    const DiskAlgebraRegion r = diagonal_nl_region(s);
    const auto norm = normalize_sectors(s);
    w.json("region.json", io::to_json(r));
    w.json("normalization.json", {{"kappa", norm.kappa},
                                  {"sigma", norm.sigma},
                                  {"target", {norm.target.first, norm.target.second}}});
    w.text("region.svg", svg::render({{r, "Phi", "#d62728"}}));
    std::cout << "region D[" << r.upper()[0].lo() << ", " << r.upper()[0].hi() << "]\n";
  } else {
    const NamedNonlinearity nl = io::nonlinearity_from_json(j);
    const auto [mu, la] = nl.sector();
    const DiskAlgebraRegion r = DiskAlgebraRegion::interval(mu, la);
    w.json("region.json", io::to_json(r));
    w.text("region.svg", svg::render({{r, nl.kind_name(), "#d62728"}}));
    std::cout << "sector [" << mu << ", " << la << "]\n";
    if (verify) {
      const SectorCheck c = verify_sector(nl, {mu, la}, samples, seed);
      w.json("verification.json",
             {{"ok", c.ok}, {"pairs", c.pairs}, {"worst_x", c.x}, {"worst_y", c.y}, {"slope", c.slope}});
      std::cout << "verification " << (c.ok ? "ok" : "FAILED") << " over " << c.pairs << " pairs\n";
      if (!c.ok) code = kHypothesis;
    }
  }
  w.finish();
  return code;
}

int cmd_region(const std::string& op, const std::vector<std::string>& args, const std::string& out,
               double resolution) {
  const CoverOptions opt{resolution};
  auto need = [&](std::size_t n) {
    if (args.size() != n)
      throw InputError("region " + op + " takes " + std::to_string(n) + " argument(s)");
  };
  auto cover = [&](const std::string& path) { return to_cover_relative(load_region(path), resolution); };
  auto scalar = [](const std::string& s) {
    try {
      return std::stod(s);
    } catch (const std::exception&) {
      throw InputError("expected a number, got '" + s + "'");
    }
  };

  if (op == "rmin") {
    need(1);
    std::cout << fixed(rmin(load_region(args[0])), 9) << "\n";
    return kOk;
  }
  if (op == "dist") {
    need(2);
    std::cout << fixed(dist(load_region(args[0]), load_region(args[1])), 9) << "\n";
    return kOk;
  }

  Region result;
  if (op == "inverse") {
    need(1);
    result = mobius_inverse(load_region(args[0]));
  } else if (op == "scale") {
    need(2);
    result = scale_real(load_region(args[0]), scalar(args[1]));
  } else if (op == "shift") {
    need(2);
    const double c = scalar(args[1]);
    result = std::visit([c](const auto& r) -> Region { return shift_real(r, c); }, load_region(args[0]));
  } else if (op == "cover") {
    need(1);
    result = cover(args[0]);
  } else if (op == "chord") {
    need(1);
    result = chord_completion(cover(args[0]), opt);
  } else if (op == "arc-left" || op == "arc-right") {
    need(1);
    result = arc_completion(cover(args[0]), op == "arc-left" ? ArcSide::left : ArcSide::right, opt);
  } else if (op == "sum" || op == "improved-sum" || op == "product" || op == "improved-product" ||
             op == "intersect") {
    need(2);
    const CoverRegion a = cover(args[0]), b = cover(args[1]);
    if (op == "sum") result = minkowski_sum(a, b, opt);
    if (op == "improved-sum") result = improved_sum(a, b, opt);
    if (op == "product") result = minkowski_product(a, b, opt);
    if (op == "improved-product") result = improved_product(a, b, opt);
    if (op == "intersect") result = intersect(a, b);
  } else {
    throw InputError("unknown region op '" + op + "'");
  }
  const Json j = io::to_json(result);
  if (const auto* c = std::get_if<CoverRegion>(&result))
    std::cerr << "cover: " << c->size() << " balls, epsilon " << c->epsilon()
              << (c->has_exterior() ? ", exterior part" : "") << "\n";
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    io::write_json_file(out, j);
    io::Manifest m{"region " + op, args, {{"resolution", resolution}}, {out}};
    io::write_json_file(out + ".manifest.json", io::to_json(m));
  }
  return kOk;
}

int cmd_analyze_lfr(const std::string& model, const Common& c) {
  const Json j = io::read_json_file(model);
  LfrModel m = io::lfr_from_json(j);
  if (c.non_incremental) m.phi.incremental = false;
  AnalysisReport rep;
  try {
    rep = lfr_certify(m, c.settings());
  } catch (const HypothesisError& e) {
    std::cerr << "hypothesis violated: " << e.what() << "\n"
              << "hint: shift the nonlinearity (sweep-transform) until G is stable\n";
    return kHypothesis;
  }
  Writer w{prepare(c.out), {"analyze-lfr", {model}, settings_json(c), {}}};
  w.json("report.json", io::to_json(rep));
  region_plots(w, rep);
  separation_plot(w, rep, "phi_inverse", "G_zw");
  w.finish();
  print_report(rep);
  return rep.certified ? kOk : kNotCertified;
}

int cmd_analyze_feedback(const std::string& file, const Common& c) {
  const Json j = io::read_json_file(file);
  AnalysisSettings s = c.settings();
  FeedbackProblem fp;
  if (!j.contains("h1") || !j.contains("h2")) throw InputError("feedback problem needs h1 and h2");
  fp.h1 = operand(j.at("h1"), s);
  fp.h2 = operand(j.at("h2"), s);
  fp.incremental = j.value("incremental", true) && !c.non_incremental;
  fp.wellposedness_assumed = j.value("assume_wellposed", false);
  const AnalysisReport rep = feedback_certify(fp, s);
  Writer w{prepare(c.out), {"analyze-feedback", {file}, settings_json(c), {}}};
  w.json("report.json", io::to_json(rep));
  region_plots(w, rep);
  w.finish();
  print_report(rep);
  return rep.certified ? kOk : kNotCertified;
}

std::vector<std::vector<double>> candidate_grid(const std::string& spec, int channels) {
  std::vector<std::vector<double>> out;
  // "a,b;c,d" lists candidates; "lo:hi:n" spans a grid on every channel
  if (spec.find(':') != std::string::npos) {
    std::vector<double> p;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) p.push_back(parse_list(item).at(0));
    if (p.size() != 3 || p[2] < 1) throw InputError("grid must be lo:hi:n");
    const auto axis = uniform_points(p[0], p[1], static_cast<int>(p[2]));
    std::vector<std::size_t> idx(channels, 0);
    while (true) {
      std::vector<double> k;
      for (int i = 0; i < channels; ++i) k.push_back(axis[idx[i]]);
      out.push_back(k);
      int i = 0;
      while (i < channels && ++idx[i] == axis.size()) idx[i++] = 0;
      if (i == channels) break;
    }
    return out;
  }
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ';')) {
    out.push_back(parse_list(item));
    if (static_cast<int>(out.back().size()) != channels)
      throw InputError("candidate needs one shift per nonlinearity channel");
  }
  return out;
}

int cmd_sweep(const std::string& model, const std::string& spec, const Common& c) {
  LfrModel m = io::lfr_from_json(io::read_json_file(model));
  if (c.non_incremental) m.phi.incremental = false;
  const auto cands = candidate_grid(spec, m.nw());
  const SweepResult r = transform_sweep(m, cands, c.settings());
  Writer w{prepare(c.out), {"sweep-transform", {model}, settings_json(c), {}}};
  w.manifest.settings["candidates"] = spec;
  w.json("sweep.json", io::to_json(r));
  w.finish();
  std::cout << "candidates: " << r.table.size() << "\n";
  for (const auto& row : r.table) {
    std::cout << "  kappa=(";
    for (std::size_t i = 0; i < row.kappa.size(); ++i) std::cout << (i ? "," : "") << row.kappa[i];
    std::cout << ") " << (row.stable ? (row.certified ? "certified gain " + fixed(row.gain) : "not certified")
                                     : "unstable")
              << "\n";
  }
  std::cout << "verdict: " << (r.certified ? "certified, best gain " + fixed(r.best_gain) : "not_certified")
            << "\n";
  return r.certified ? kOk : kNotCertified;
}

struct SimFlags {
  std::string input;
  bool gain = false;
  std::uint64_t seed = 1;
  int multisines = 20;
  int noise = 20;
  double amplitude = 1.0;
  double dt = 0.0;
  double horizon = 0.0;
  bool non_incremental = false;
  std::string out = "srgkit_out";
};

int cmd_simulate(const std::string& model, const SimFlags& f) {
  const Json j = io::read_json_file(model);
  const LfrModel m = io::lfr_from_json(j);
  const auto nl = io::nonlinearities_from_json(j);
  if (static_cast<int>(nl.size()) != m.nw())
    throw InputError("model needs one entry in 'nonlinearities' per w channel");
  SimConfig cfg = default_sim_config(m.G);
  if (f.dt > 0) cfg.dt = f.dt;
  if (f.horizon > 0) cfg.horizon = f.horizon;
  Writer w{prepare(f.out), {"simulate", {model}, {}, {}}};
  w.manifest.settings = {{"dt", cfg.dt}, {"horizon", cfg.horizon}, {"seed", f.seed},
                         {"multisines", f.multisines}, {"noise", f.noise}, {"amplitude", f.amplitude},
                         {"incremental", !f.non_incremental}};
  if (!f.input.empty()) {
    std::ifstream in(f.input);
    if (!in) throw InputError("cannot open '" + f.input + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const Signal u = io::signal_from_csv(buf.str());
    if (u.channels() != m.nu()) throw InputError("input CSV has the wrong number of channels");
    SimConfig c2 = cfg;
    c2.dt = u.dt;
    c2.horizon = u.dt * (u.samples() - 1);
    w.manifest.inputs.push_back(f.input);
    w.text("output.csv", io::signal_csv(simulate_lfr(m, nl, u, c2)));
  }
  if (f.gain || f.input.empty()) {
    ExcitationSpec ex;
    ex.seed = f.seed;
    ex.multisines = f.multisines;
    ex.noise = f.noise;
    ex.amplitude = f.amplitude;
    ex.incremental = !f.non_incremental;
    const GainEstimate g = empirical_incremental_gain(m, nl, ex, cfg);
    w.json("gain.json", io::to_json(g));
    std::cout << "empirical " << (ex.incremental ? "incremental " : "") << "gain " << fixed(g.value, 6)
              << " over " << g.num_pairs << " pairs\n";
  }
  w.finish();
  return kOk;
}

// ---- reproduce

struct Row {
  std::string label;
  double reference;
  double computed;
  bool certified;
  double empirical;  // < 0 when not run
  double seconds;
};

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_reproduce(int id, const Common& c, bool sim, std::uint64_t seed) {
  if (id < 1 || id > 3) throw InputError("example id must be 1, 2 or 3");
  const auto& refs = examples::references();
  Writer w{prepare(c.out), {"reproduce " + std::to_string(id), {}, settings_json(c), {}}};
  w.manifest.settings["sim"] = sim;
  w.manifest.settings["seed"] = seed;
  std::vector<Row> rows;
  bool all_certified = true;
  ExcitationSpec ex;
  ex.seed = seed;

  auto run_lfr = [&](const examples::Concrete& ex_model, const std::string& tag, const examples::Reference& ref) {
    const auto t0 = std::chrono::steady_clock::now();
    const AnalysisReport rep = lfr_certify(ex_model.model, c.settings());
    const double secs = elapsed(t0);
    Writer sub{prepare((w.dir / tag).string()), {"reproduce " + std::to_string(id), {}, settings_json(c), {}}};
    sub.json("model.json", io::to_json(ex_model.model, ex_model.nl));
    sub.json("report.json", io::to_json(rep));
    region_plots(sub, rep);
    separation_plot(sub, rep, "phi_inverse", "G_zw");
    double emp = -1.0;
    if (sim) {
      const GainEstimate g = empirical_incremental_gain(ex_model.model, ex_model.nl, ex,
                                                        default_sim_config(ex_model.model.G));
      sub.json("gain.json", io::to_json(g));
      emp = g.value;
    }
    sub.finish();
    w.manifest.outputs.push_back(tag + "/");
    all_certified = all_certified && rep.certified;
    rows.push_back({ref.label, ref.value, rep.gain_bound, rep.certified, emp, secs});
  };

  if (id == 1) {
    run_lfr(examples::lure(2.0, 3.0), "kappa_2_3", refs[0]);
    run_lfr(examples::lure(0.5, 1.5), "kappa_0.5_1.5", refs[1]);
  } else if (id == 2) {
    run_lfr(examples::msd(), "msd", refs[2]);
  } else {
    // the gain-at-zero path needs the well-posedness acknowledgment
    AnalysisSettings s = c.settings();
    s.assume_wellposed = true;
    const auto t0 = std::chrono::steady_clock::now();
    const AnalysisReport rep = feedback_certify(examples::iqc_problem(s), s);
    const double secs = elapsed(t0);
    Writer sub{prepare((w.dir / "iqc").string()), {"reproduce 3", {}, settings_json(c), {}}};
    sub.manifest.settings["assume_wellposed"] = true;
    sub.json("report.json", io::to_json(rep));
    region_plots(sub, rep);
    double emp = -1.0;
    if (sim) {
      const auto lfr = examples::iqc_lfr();
      ExcitationSpec e0 = ex;
      e0.incremental = false;
      const GainEstimate g = empirical_incremental_gain(lfr.model, lfr.nl, e0, default_sim_config(lfr.model.G));
      sub.json("gain.json", io::to_json(g));
      emp = g.value;
    }
    sub.finish();
    w.manifest.outputs.push_back("iqc/");
    all_certified = all_certified && rep.certified;
    rows.push_back({refs[3].label, refs[3].value, rep.gain_bound, rep.certified, emp, secs});
    rows.push_back({refs[4].label, refs[4].value, rep.gain_bound, rep.certified, emp, 0.0});
  }

  std::ostringstream table, csv;
  char line[256];
  std::snprintf(line, sizeof line, "%-24s %10s %10s %9s %-14s %10s %8s\n", "case", "reference", "computed",
                "rel.err", "verdict", "simulated", "seconds");
  table << line;
  csv << "case,reference,computed,relative_error,certified,simulated\n";
  for (const auto& r : rows) {
    const double rel = (r.computed - r.reference) / r.reference;
    std::snprintf(line, sizeof line, "%-24s %10.2f %10.4f %+8.1f%% %-14s %10s %8.2f\n", r.label.c_str(),
                  r.reference, r.computed, 100.0 * rel, r.certified ? "certified" : "not_certified",
                  r.empirical < 0 ? "-" : fixed(r.empirical).c_str(), r.seconds);
    table << line;
    csv << r.label << ',' << r.reference << ',' << r.computed << ',' << rel << ',' << r.certified << ','
        << (r.empirical < 0 ? std::string() : fixed(r.empirical, 9)) << '\n';
  }
  std::cout << table.str();
  w.text("comparison.csv", csv.str());
  w.finish();
  return all_certified ? kOk : kNotCertified;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"srgkit: scaled relative graph analysis of Lur'e-type systems"};
  app.require_subcommand(1);
  Common common;
  std::function<int()> action;

  // srg-lti
  std::string lti_model, lti_ups, lti_lam;
  int lti_up = 41, lti_lp = 41, lti_fp = 400;
  auto* lti = app.add_subcommand("srg-lti", "SRG bound of a stable LTI block");
  lti->add_option("model", lti_model, "state-space JSON")->required();
  lti->add_option("--upsilon-points", lti_up)->envname("SRGKIT_UPSILON_POINTS")->check(CLI::Range(1, 100000));
  lti->add_option("--lambda-points", lti_lp)->envname("SRGKIT_LAMBDA_POINTS")->check(CLI::Range(1, 100000));
  lti->add_option("--freq-points", lti_fp)->envname("SRGKIT_FREQ_POINTS")->check(CLI::Range(8, 1000000));
  lti->add_option("--upsilon", lti_ups, "explicit comma-separated Upsilon")->envname("SRGKIT_UPSILON");
  lti->add_option("--lambda", lti_lam, "explicit comma-separated Lambda")->envname("SRGKIT_LAMBDA");
  add_out(lti, common.out);
  lti->callback([&] { action = [&] { return cmd_srg_lti(lti_model, common.out, lti_up, lti_lp, lti_fp, lti_ups, lti_lam); }; });

  // srg-matrix
  std::string mat_file;
  int mat_points = 41;
  auto* mat = app.add_subcommand("srg-matrix", "SRG bound of a complex matrix");
  mat->add_option("matrix", mat_file, "JSON with 're' (and optional 'im') rows")->required();
  mat->add_option("--points", mat_points)->envname("SRGKIT_BASE_POINTS")->check(CLI::Range(1, 100000));
  add_out(mat, common.out);
  mat->callback([&] { action = [&] { return cmd_srg_matrix(mat_file, common.out, mat_points); }; });

  // sector
  std::string sec_file;
  bool sec_verify = false;
  std::size_t sec_samples = 100000;
  std::uint64_t seed = 1;
  auto* sec = app.add_subcommand("sector", "sector region of a nonlinearity or sector bound");
  sec->add_option("file", sec_file, "nonlinearity or sector-bound JSON")->required();
  sec->add_flag("--verify", sec_verify, "Monte-Carlo check of the declared sector")->envname("SRGKIT_VERIFY");
  sec->add_option("--samples", sec_samples)->envname("SRGKIT_SAMPLES");
  sec->add_option("--seed", seed)->envname("SRGKIT_SEED");
  add_out(sec, common.out);
  sec->callback([&] { action = [&] { return cmd_sector(sec_file, common.out, sec_verify, sec_samples, seed); }; });

  // region <op>
  std::string reg_op, reg_out;
  std::vector<std::string> reg_args;
  double reg_res = 0.01;
  auto* reg = app.add_subcommand("region", "region calculus on JSON region files");
  reg->add_option("op", reg_op,
                  "inverse | scale | shift | cover | chord | arc-left | arc-right | sum | improved-sum | "
                  "product | improved-product | intersect | rmin | dist")
      ->required();
  reg->add_option("args", reg_args, "region files (and a scalar for scale/shift)");
  reg->add_option("-o,--out", reg_out, "output file (stdout if omitted)");
  reg->add_option("--resolution", reg_res)->envname("SRGKIT_RESOLUTION")->check(CLI::Range(1e-5, 0.5));
  reg->callback([&] { action = [&] { return cmd_region(reg_op, reg_args, reg_out, reg_res); }; });

  // analyze-lfr
  std::string lfr_model;
  auto* lfr = app.add_subcommand("analyze-lfr", "certify an LFR model");
  lfr->add_option("model", lfr_model, "LFR model JSON")->required();
  add_analysis_flags(lfr, common);
  add_out(lfr, common.out);
  lfr->callback([&] { action = [&] { return cmd_analyze_lfr(lfr_model, common); }; });

  // analyze-feedback
  std::string fb_file;
  auto* fb = app.add_subcommand("analyze-feedback", "certify a feedback interconnection [H1, H2]");
  fb->add_option("problem", fb_file, "JSON with h1 and h2 operands")->required();
  add_analysis_flags(fb, common);
  add_out(fb, common.out);
  fb->callback([&] { action = [&] { return cmd_analyze_feedback(fb_file, common); }; });

  // sweep-transform
  std::string sw_model, sw_spec = "-2:2:5";
  auto* sw = app.add_subcommand("sweep-transform", "search loop-transform shifts");
  sw->add_option("model", sw_model, "LFR model JSON with a sector phi")->required();
  sw->add_option("--kappa", sw_spec, "'lo:hi:n' per channel or 'a,b;c,d' candidates")->envname("SRGKIT_KAPPA");
  add_analysis_flags(sw, common);
  add_out(sw, common.out);
  sw->callback([&] { action = [&] { return cmd_sweep(sw_model, sw_spec, common); }; });

  // simulate
  std::string sim_model;
  SimFlags sf;
  auto* sim = app.add_subcommand("simulate", "simulate an LFR model or estimate its gain");
  sim->add_option("model", sim_model, "LFR model JSON with 'nonlinearities'")->required();
  sim->add_option("--input", sf.input, "input CSV (t,u1,...)");
  sim->add_flag("--gain", sf.gain, "estimate the empirical gain from seeded input pairs");
  sim->add_option("--seed", sf.seed)->envname("SRGKIT_SEED");
  sim->add_option("--multisines", sf.multisines)->envname("SRGKIT_MULTISINES");
  sim->add_option("--noise", sf.noise)->envname("SRGKIT_NOISE");
  sim->add_option("--amplitude", sf.amplitude)->envname("SRGKIT_AMPLITUDE");
  sim->add_option("--dt", sf.dt)->envname("SRGKIT_DT");
  sim->add_option("--horizon", sf.horizon)->envname("SRGKIT_HORIZON");
  sim->add_flag("--non-incremental", sf.non_incremental)->envname("SRGKIT_NON_INCREMENTAL");
  add_out(sim, sf.out);
  sim->callback([&] { action = [&] { return cmd_simulate(sim_model, sf); }; });

  // reproduce
  int rep_id = 1;
  bool no_sim = false;
  auto* rep = app.add_subcommand("reproduce", "rerun a built-in example against its reference value");
  rep->add_option("id", rep_id, "1, 2 or 3")->required()->check(CLI::Range(1, 3));
  rep->add_flag("--no-sim", no_sim, "skip the simulation oracle")->envname("SRGKIT_NO_SIM");
  rep->add_option("--seed", seed)->envname("SRGKIT_SEED");
  add_analysis_flags(rep, common);
  add_out(rep, common.out);
  rep->callback([&] { action = [&] { return cmd_reproduce(rep_id, common, !no_sim, seed); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }
  try {
    return action();
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const HypothesisError& e) {
    std::cerr << "hypothesis violated: " << e.what() << "\n";
    return kHypothesis;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
